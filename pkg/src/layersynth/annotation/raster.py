"""Shape lists back to class masks (even-odd fill at pixel centers)."""
from __future__ import annotations

import math

import numpy as np

from ..labels import ClassLabel
from .model import AnnotationDoc, Shape


def fill_polygon(vertices, width: int, height: int) -> np.ndarray:
    """Boolean mask of pixels whose center lies inside the polygon (even-odd)."""
    pts = np.asarray(vertices, dtype=np.float64)
    out = np.zeros((height, width), dtype=bool)
    if len(pts) < 3:
        return out
    x1, y1 = pts[:, 0], pts[:, 1]
    x2, y2 = np.roll(x1, -1), np.roll(y1, -1)

    rows, xs = [], []
    for ax, ay, bx, by in zip(x1, y1, x2, y2):
        if ay == by:
            continue
        lo, hi = (ay, by) if ay < by else (by, ay)
        # rows whose center c satisfies lo <= c < hi
        j0 = max(0, math.ceil(lo - 0.5))
        j1 = min(height, math.ceil(hi - 0.5))
        if j1 <= j0:
            continue
        yc = np.arange(j0, j1) + 0.5
        rows.append(np.arange(j0, j1))
        xs.append(ax + (yc - ay) * (bx - ax) / (by - ay))
    if not rows:
        return out
    rows = np.concatenate(rows)
    xs = np.concatenate(xs)
    order = np.lexsort((xs, rows))
    rows, xs = rows[order], xs[order]

    # rank of each crossing within its row; even ranks open a span
    first = np.searchsorted(rows, rows, side="left")
    rank = np.arange(len(rows)) - first
    starts = rank % 2 == 0
    r = rows[starts]
    xa = xs[starts]
    xb = xs[np.flatnonzero(starts) + 1]
    # pixel i is inside when xa <= i + 0.5 < xb
    ia = np.clip(np.ceil(xa - 0.5), 0, width).astype(np.int64)
    ib = np.clip(np.ceil(xb - 0.5), 0, width).astype(np.int64)

    acc = np.zeros((height, width + 1), dtype=np.int32)
    np.add.at(acc, (r, ia), 1)
    np.add.at(acc, (r, ib), -1)
    out[:] = np.cumsum(acc, axis=1)[:, :width] > 0
    return out


def rasterize_shapes(shapes: list[Shape], width: int, height: int) -> np.ndarray:
    mask = np.zeros((height, width), dtype=np.uint8)
    for shape in sorted(shapes, key=lambda s: s.z_order):
        code = int(ClassLabel.from_name(shape.label))
        if shape.kind == "points":
            for x, y in shape.vertices:
                i = min(int(math.floor(x)), width - 1)
                j = min(int(math.floor(y)), height - 1)
                mask[j, i] = code
        else:
            mask[fill_polygon(shape.vertices, width, height)] = code
    return mask


def rasterize(doc: AnnotationDoc, image_id: int) -> np.ndarray:
    im = doc.image(image_id)
    return rasterize_shapes(im.shapes, im.width, im.height)
