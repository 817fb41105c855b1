"""Mask regions to simplified polygon outlines.

Outlines follow the crack edges between pixels, so every vertex sits on the
integer corner lattice. Regions are 4-connected; at a pinch vertex (two
region pixels touching diagonally) the trace turns left, i.e. keeps hugging
the pixel it is walking around.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from ..compositor import FOUR_CONNECTED
from ..labels import FOREGROUND
from .model import Shape

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)

WEST, SOUTH, EAST, NORTH = (-1, 0), (0, 1), (1, 0), (0, -1)


def _left(d):
    return (d[1], -d[0])


def _right(d):
    return (-d[1], d[0])


def trace_outline(region: np.ndarray) -> list[tuple[int, int]]:
    """Counter-clockwise (on screen) outer outline of one 4-connected region.

    ``region`` is a boolean array; returned (x, y) corner coordinates are in
    its frame and only include direction changes.
    """
    fg = np.pad(np.asarray(region, dtype=bool), 1)
    inner = fg[1:-1, 1:-1]
    if not inner.any():
        return []

    # outgoing crack edges per corner vertex, interior kept on the left
    out: dict[tuple[int, int], list[tuple[int, int]]] = {}
    rows, cols = np.nonzero(inner & ~fg[:-2, 1:-1])
    for r, c in zip(rows.tolist(), cols.tolist()):
        out.setdefault((c + 1, r), []).append(WEST)
    rows, cols = np.nonzero(inner & ~fg[2:, 1:-1])
    for r, c in zip(rows.tolist(), cols.tolist()):
        out.setdefault((c, r + 1), []).append(EAST)
    rows, cols = np.nonzero(inner & ~fg[1:-1, :-2])
    for r, c in zip(rows.tolist(), cols.tolist()):
        out.setdefault((c, r), []).append(SOUTH)
    rows, cols = np.nonzero(inner & ~fg[1:-1, 2:])
    for r, c in zip(rows.tolist(), cols.tolist()):
        out.setdefault((c + 1, r + 1), []).append(NORTH)

    r0 = int(np.argmax(inner.any(axis=1)))
    c0 = int(np.argmax(inner[r0]))
    start = (c0, r0)
    verts = [start]
    d = SOUTH
    v = (c0, r0 + 1)
    while v != start:
        options = out[v]
        if len(options) == 1:
            nd = options[0]
        else:
            for nd in (_left(d), d, _right(d)):
                if nd in options:
                    break
        if nd != d:
            verts.append(v)
        d = nd
        v = (v[0] + d[0], v[1] + d[1])
    return verts


def _seg_dist(p, a, b) -> float:
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    L2 = dx * dx + dy * dy
    if L2 == 0:
        return math.hypot(p[0] - ax, p[1] - ay)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - (ax + t * dx), p[1] - (ay + t * dy))


def douglas_peucker(points, eps: float) -> list:
    """Simplify an open polyline; endpoints are always kept."""
    n = len(points)
    if n < 3 or eps <= 0:
        return list(points)
    keep = [False] * n
    keep[0] = keep[-1] = True
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        best, idx = -1.0, -1
        for k in range(i + 1, j):
            dist = _seg_dist(points[k], points[i], points[j])
            if dist > best:
                best, idx = dist, k
        if idx >= 0 and best > eps:
            keep[idx] = True
            stack.append((i, idx))
            stack.append((idx, j))
    return [p for p, k in zip(points, keep) if k]


def simplify_ring(ring, eps: float) -> list:
    """Douglas-Peucker on a closed ring, split at vertex 0 and its farthest vertex."""
    n = len(ring)
    if n < 4 or eps <= 0:
        return list(ring)
    x0, y0 = ring[0]
    far = max(range(1, n), key=lambda k: (ring[k][0] - x0) ** 2 + (ring[k][1] - y0) ** 2)
    first = douglas_peucker(ring[: far + 1], eps)
    second = douglas_peucker(list(ring[far:]) + [ring[0]], eps)
    return first[:-1] + second[:-1]


def _components(mask: np.ndarray):
    """Yield (label, component id, slice, local region) plus a global id map."""
    ids = np.zeros(mask.shape, dtype=np.int32)
    comps = []
    next_id = 0
    for label in FOREGROUND:
        labeled, n = ndimage.label(mask == label, structure=FOUR_CONNECTED)
        for i, sl in enumerate(ndimage.find_objects(labeled), start=1):
            if sl is None:
                continue
            next_id += 1
            local = labeled[sl] == i
            ids[sl][local] = next_id
            comps.append((label, next_id, sl, local))
    return comps, ids


def polygonize(mask: np.ndarray, simplify_eps: float = 1.5) -> tuple[list[Shape], int]:
    """Polygons for every foreground region, plus the number dropped as degenerate.

    Regions lying inside the outline of another region (e.g. a table fully
    surrounded by a figure) get a higher z_order than their container, so
    filling shapes in z order reproduces the mask without hole rings.
    """
    if simplify_eps < 0:
        raise ValueError("simplify_eps must be >= 0")
    mask = np.asarray(mask)
    comps, ids = _components(mask)

    depth = dict.fromkeys((cid for _, cid, _, _ in comps), 0)
    for _, cid, sl, local in comps:
        filled = ndimage.binary_fill_holes(local, structure=EIGHT_CONNECTED)
        holes = filled & ~local
        if holes.any():
            for inner_id in np.unique(ids[sl][holes]):
                if inner_id:
                    depth[int(inner_id)] += 1

    shapes, dropped = [], 0
    for label, cid, sl, local in comps:
        oy, ox = sl[0].start, sl[1].start
        ring = [(x + ox, y + oy) for x, y in trace_outline(local)]
        ring = simplify_ring(ring, simplify_eps)
        if len(ring) < 3:
            dropped += 1
            continue
        verts = [(float(x), float(y)) for x, y in ring]
        shapes.append(Shape("polygon", label.label_name, verts, z_order=depth[cid]))
    shapes.sort(key=lambda s: s.z_order)
    return shapes, dropped


def mask_to_polygons(mask: np.ndarray, simplify_eps: float = 1.5) -> list[Shape]:
    return polygonize(mask, simplify_eps)[0]
