"""Procedurally drawn sample assets so the pipeline runs without a real corpus.

Text blocks are rows of dark word-like bars, figures are smooth color fields
with a few blobs, tables are ruled grids with filled cells. Output is a
catalog directory (PNGs + ``catalog.csv``) fully determined by ``seed``.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .catalog import MANIFEST_NAME, write_manifest
from .labels import ClassLabel


def _text_block(rng: np.random.Generator, w: int, h: int) -> np.ndarray:
    img = np.full((h, w, 3), 255, dtype=np.uint8)
    ink = int(rng.integers(0, 70))
    line_h = int(rng.integers(8, 16))
    y = int(rng.integers(2, 6))
    while y + line_h <= h - 2:
        x = 2
        glyph_h = max(2, int(line_h * 0.65))
        end = w - 2 if rng.random() > 0.15 else int(w * rng.uniform(0.3, 0.9))
        while x < end:
            word = int(rng.integers(6, 40))
            img[y:y + glyph_h, x:min(x + word, end)] = ink
            x += word + int(rng.integers(3, 7))
        y += line_h
    return img


def _figure(rng: np.random.Generator, w: int, h: int) -> np.ndarray:
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    c0 = rng.integers(0, 256, size=3).astype(np.float64)
    c1 = rng.integers(0, 256, size=3).astype(np.float64)
    t = (xx / max(w - 1, 1) * rng.uniform(0, 1) + yy / max(h - 1, 1) * rng.uniform(0, 1)) / 2
    img = c0 + (c1 - c0) * t[..., None]
    for _ in range(int(rng.integers(1, 5))):
        cx, cy = rng.uniform(0, w), rng.uniform(0, h)
        rad = rng.uniform(0.1, 0.4) * min(w, h)
        blob = (xx - cx) ** 2 + (yy - cy) ** 2 < rad**2
        img[blob] = rng.integers(0, 256, size=3)
    return np.clip(img, 0, 255).astype(np.uint8)


def _table(rng: np.random.Generator, w: int, h: int) -> np.ndarray:
    img = np.full((h, w, 3), 255, dtype=np.uint8)
    rows, cols = int(rng.integers(3, 10)), int(rng.integers(2, 6))
    ys = np.linspace(0, h - 1, rows + 1).astype(int)
    xs = np.linspace(0, w - 1, cols + 1).astype(int)
    header = rng.integers(150, 230, size=3)
    img[ys[0]:ys[1]] = header
    for r in range(rows):
        for c in range(cols):
            if rng.random() < 0.7:
                x0 = xs[c] + 4
                x1 = x0 + int((xs[c + 1] - xs[c] - 8) * rng.uniform(0.3, 0.9))
                yc = (ys[r] + ys[r + 1]) // 2
                img[max(yc - 2, 0):yc + 2, x0:max(x1, x0 + 1)] = 40
    img[ys, :] = 0
    img[:, xs] = 0
    return img


MAKERS = {
    ClassLabel.TEXT: (_text_block, (150, 400), (60, 300)),
    ClassLabel.FIGURE: (_figure, (120, 420), (100, 420)),
    ClassLabel.TABLE: (_table, (150, 420), (90, 320)),
}


def make_demo_catalog(out_dir, n_text: int = 12, n_figure: int = 10, n_table: int = 6, seed: int = 0) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    entries = []
    for label, n in ((ClassLabel.TEXT, n_text), (ClassLabel.FIGURE, n_figure), (ClassLabel.TABLE, n_table)):
        make, (wlo, whi), (hlo, hhi) = MAKERS[label]
        for i in range(n):
            w, h = int(rng.integers(wlo, whi + 1)), int(rng.integers(hlo, hhi + 1))
            rel = f"{label.label_name}_{i:03d}.png"
            Image.fromarray(make(rng, w, h)).save(out_dir / rel)
            entries.append((rel, label))
    write_manifest(out_dir / MANIFEST_NAME, entries)
    return out_dir / MANIFEST_NAME
