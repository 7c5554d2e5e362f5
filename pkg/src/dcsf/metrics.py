"""Front-quality metrics: spacing, maximum spread, hypervolume, knee selection.

All metrics normalize each objective dimension by the front's own min/max;
degenerate dimensions contribute zero. Objectives are (f1 max, f2 max, f3 min)
throughout.
"""

from __future__ import annotations

import math

import numpy as np


def _normalize(front: np.ndarray) -> np.ndarray:
    lo = front.min(axis=0)
    hi = front.max(axis=0)
    span = hi - lo
    out = np.zeros_like(front, dtype=float)
    ok = span > 0
    out[:, ok] = (front[:, ok] - lo[ok]) / span[ok]
    return out


def spacing_metric(front_objectives) -> float:
    """SP: stddev of nearest-neighbor city-block distances on the normalized front.

    Zero means perfectly even spacing; fronts of fewer than 2 points return 0.
    """
    front = np.atleast_2d(np.asarray(front_objectives, dtype=float))
    n = len(front)
    if n < 2:
        return 0.0
    norm = _normalize(front)
    dists = np.abs(norm[:, None, :] - norm[None, :, :]).sum(axis=2)
    np.fill_diagonal(dists, np.inf)
    d = dists.min(axis=1)
    mean = d.mean()
    return float(math.sqrt(np.sum((mean - d) ** 2) / (n - 1)))


def max_spread_metric(front_objectives) -> float:
    """M3*: diagonal extent of the normalized front's bounding box."""
    front = np.atleast_2d(np.asarray(front_objectives, dtype=float))
    if len(front) < 2:
        return 0.0
    norm = _normalize(front)
    extents = norm.max(axis=0) - norm.min(axis=0)
    return float(math.sqrt(np.sum(extents**2)))


def _staircase_area(points_2d: np.ndarray, ref_x: float, ref_y: float) -> float:
    """Area dominated (toward smaller values) by 2D minimization points, up to ref."""
    pts = points_2d[(points_2d[:, 0] < ref_x) & (points_2d[:, 1] < ref_y)]
    if len(pts) == 0:
        return 0.0
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    area = 0.0
    prev_y = ref_y
    for x, y in pts:
        if y < prev_y:
            area += (ref_x - x) * (prev_y - y)
            prev_y = y
    return area


def hypervolume(front_objectives, reference=None) -> float:
    """Dominated hypervolume of a 3-objective (max, max, min) front.

    Objectives are normalized to minimization in [0, 1] by the front's own
    ranges; the default reference point is 1.1 per dimension (nadir * 1.1).
    Passing `reference` together with pre-normalized minimization triples is
    supported through `hypervolume_min`.
    """
    front = np.atleast_2d(np.asarray(front_objectives, dtype=float))
    if len(front) == 0:
        return 0.0
    g = np.column_stack([-front[:, 0], -front[:, 1], front[:, 2]])
    g = _normalize(g)
    ref = np.full(3, 1.1) if reference is None else np.asarray(reference, dtype=float)
    return hypervolume_min(g, ref)


def hypervolume_min(points: np.ndarray, ref: np.ndarray) -> float:
    """Exact 3D hypervolume for minimization points against `ref` (z-sweep)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    pts = pts[np.all(pts < ref, axis=1)]
    if len(pts) == 0:
        return 0.0
    z_levels = np.unique(pts[:, 2])
    hv = 0.0
    for i, z in enumerate(z_levels):
        z_next = z_levels[i + 1] if i + 1 < len(z_levels) else ref[2]
        active = pts[pts[:, 2] <= z][:, :2]
        hv += (z_next - z) * _staircase_area(active, ref[0], ref[1])
    return float(hv)


def normalized_ideal_distance(front_objectives) -> np.ndarray:
    """Per-member Euclidean distance to the normalized ideal (max f1, max f2, min f3)."""
    front = np.atleast_2d(np.asarray(front_objectives, dtype=float))
    g = np.column_stack([-front[:, 0], -front[:, 1], front[:, 2]])
    norm = _normalize(g)  # ideal maps to 0 per dimension
    return np.sqrt((norm**2).sum(axis=1))


def knee_index(front_objectives) -> int:
    """Index of the front member closest to the normalized ideal point."""
    d = normalized_ideal_distance(front_objectives)
    return int(np.argmin(d))
