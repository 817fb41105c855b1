"""Histogram-overlap similarity between two images.

    f(s, g) = 1/256 * sum_i (1 - |s_i - g_i| / max(s_i, g_i))

where s_i and g_i are the fractions of pixels at gray level i. Bins that are
empty in both images contribute a full 1 (their difference is zero), which
keeps f(h, h) == 1 for every histogram.
"""
from __future__ import annotations

import numpy as np

from .catalog import HIST_BINS, gray_histogram


def similarity(s: np.ndarray, g: np.ndarray) -> float:
    s = np.asarray(s, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if s.shape != (HIST_BINS,) or g.shape != (HIST_BINS,):
        raise ValueError(f"histograms must have {HIST_BINS} bins")
    peak = np.maximum(s, g)
    diff = np.abs(s - g)
    terms = np.ones(HIST_BINS)
    nz = peak > 0
    terms[nz] = 1.0 - diff[nz] / peak[nz]
    return float(terms.sum()) / HIST_BINS


def image_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Similarity of two RGB rasters of any sizes."""
    return similarity(gray_histogram(a), gray_histogram(b))
