"""Painter's-algorithm rendering of page plans into raster + class mask."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image
from scipy import ndimage

from .catalog import Catalog
from .errors import RenderError
from .labels import ClassLabel, FOREGROUND, colorize
from .planner import PageSpec

FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)


@dataclass(frozen=True, eq=False)
class Page:
    page_id: str
    raster: np.ndarray  # H x W x 3 uint8
    mask: np.ndarray  # H x W uint8 class codes
    spec: PageSpec


def _resized(raster: np.ndarray, w: int, h: int) -> np.ndarray:
    if raster.shape[1] == w and raster.shape[0] == h:
        return raster
    return np.asarray(Image.fromarray(raster).resize((w, h), Image.BILINEAR))


def render(spec: PageSpec, catalog: Catalog) -> Page:
    raster = np.full((spec.height, spec.width, 3), 255, dtype=np.uint8)
    mask = np.zeros((spec.height, spec.width), dtype=np.uint8)
    cache: dict[tuple[str, int, int], np.ndarray] = {}

    for p in sorted(spec.placements, key=lambda p: p.z):
        if p.asset_id not in catalog:
            raise RenderError(f"{spec.page_id}: unknown asset id {p.asset_id!r}")
        if (p.x < 0 or p.y < 0 or p.target_w < 1 or p.target_h < 1
                or p.x + p.target_w > spec.width or p.y + p.target_h > spec.height):
            raise RenderError(
                f"{spec.page_id}: placement of {p.asset_id!r} at ({p.x},{p.y}) size "
                f"{p.target_w}x{p.target_h} exceeds page {spec.width}x{spec.height}"
            )
        key = (p.asset_id, p.target_w, p.target_h)
        if key not in cache:
            cache[key] = _resized(catalog[p.asset_id].raster, p.target_w, p.target_h)
        rows = slice(p.y, p.y + p.target_h)
        cols = slice(p.x, p.x + p.target_w)
        raster[rows, cols] = cache[key]
        mask[rows, cols] = int(p.label)

    return Page(spec.page_id, raster, mask, spec)


def region_components(mask: np.ndarray) -> list[tuple[ClassLabel, np.ndarray]]:
    """Maximal 4-connected same-class foreground regions.

    Each region is returned as a boolean array the size of ``mask``. Order is
    by class code, then by scan order of each region's first pixel.
    """
    out = []
    for label in FOREGROUND:
        labeled, n = ndimage.label(mask == label, structure=FOUR_CONNECTED)
        for i in range(1, n + 1):
            out.append((label, labeled == i))
    return out


def labeled_components(mask: np.ndarray):
    """Like :func:`region_components` but as (label, slice, local bool mask) tuples.

    Cheaper on large pages since each region is cropped to its bounding box.
    """
    out = []
    for label in FOREGROUND:
        labeled, n = ndimage.label(mask == label, structure=FOUR_CONNECTED)
        for i, sl in enumerate(ndimage.find_objects(labeled), start=1):
            if sl is not None:
                out.append((label, sl, labeled[sl] == i))
    return out


def save_page(page: Page, out_dir, stem: str | None = None) -> dict[str, str]:
    """Write raster, raw mask and color-key mask PNGs; return their file names."""
    out_dir = Path(out_dir)
    stem = stem or page.page_id
    names = {
        "raster": f"{stem}.png",
        "mask": f"{stem}_mask.png",
        "vis": f"{stem}_vis.png",
    }
    Image.fromarray(page.raster).save(out_dir / names["raster"])
    Image.fromarray(page.mask).save(out_dir / names["mask"])
    Image.fromarray(colorize(page.mask)).save(out_dir / names["vis"])
    return names


def read_mask(path) -> np.ndarray:
    with Image.open(path) as im:
        if im.mode not in ("L", "P", "I", "I;16"):
            raise ValueError(f"{path}: expected a single-channel class mask, got mode {im.mode}")
        return np.asarray(im, dtype=np.uint8)
