"""Seed derivation for independently reproducible pages."""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64_mix(z: int) -> int:
    """The splitmix64 output finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def page_seed(master_seed: int, page_index: int) -> int:
    """Seed of page ``page_index``: the (index+1)-th splitmix64 output."""
    return splitmix64_mix((master_seed & MASK64) + GOLDEN_GAMMA * (page_index + 1))


def page_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & MASK64))
