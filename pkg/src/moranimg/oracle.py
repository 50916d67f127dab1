"""Brute-force images from points known to lie in the fractals.

IFS sources contribute the images of 0 and 1 under every word of a fixed
length; Moran realizations contribute the endpoints of their basic
intervals.  Every sample is a genuine member of the set, so the resulting
value set under-approximates the true image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expr.evaluate import DomainError, eval_array
from .fractal import MoranRealization, cylinder_bounds, level_bounds
from .interval import IntervalSet, hausdorff_distance, normalize, subset_of

POINT_CAP = 10_000_000


class OracleCapError(ValueError):
    """The requested sample would exceed the point cap."""


def sample_points(src, depth: int) -> np.ndarray:
    """Sorted distinct points of the set at the given depth."""
    if isinstance(src, MoranRealization):
        if depth > src.depth:
            raise ValueError(f"depth {depth} exceeds realization depth {src.depth}")
        size = 2 * src.cls.count(depth)
        if size > POINT_CAP:
            raise OracleCapError(f"{size} points exceed the cap of {POINT_CAP}")
        lo, hi = level_bounds(src, depth)
    else:
        size = 2 * len(src) ** depth
        if size > POINT_CAP:
            raise OracleCapError(f"{size} points exceed the cap of {POINT_CAP}")
        lo, hi = cylinder_bounds(src, depth)
    return np.unique(np.concatenate([lo, hi]))


def brute_force_image(b, src1, src2, depth: int, merge_tol: float, points=None) -> IntervalSet:
    """f over all sample pairs, merged into intervals with ``merge_tol``.

    ``points`` may supply precomputed (xs, ys) samples, for instance a
    filtered subset of one side.
    """
    f = b.f if hasattr(b, "f") else b
    xs, ys = points if points is not None else (sample_points(src1, depth), sample_points(src2, depth))
    if xs.size * ys.size > POINT_CAP:
        raise OracleCapError(f"{xs.size * ys.size} pairs exceed the cap of {POINT_CAP}")
    vals = eval_array(f, xs[:, None], ys[None, :]).ravel()
    if not np.all(np.isfinite(vals)):
        raise DomainError("f is undefined at some sampled pair")
    return normalize((vals, vals), merge_tol)


def max_gap(values: IntervalSet, lo: float, hi: float) -> float:
    """Largest stretch of [lo, hi] not covered by ``values``."""
    gap = 0.0
    reach = lo
    for iv in values:
        if iv.hi < lo:
            continue
        if iv.lo > hi:
            break
        gap = max(gap, iv.lo - reach)
        reach = max(reach, iv.hi)
    return max(gap, hi - reach)


@dataclass(frozen=True)
class OracleComparison:
    contained: bool
    distance: float
    oracle_components: int
    exact_components: int

    @property
    def passed(self) -> bool:
        return self.contained


def compare_to_level_image(oracle: IntervalSet, exact: IntervalSet, tol: float) -> OracleComparison:
    """Oracle values must all lie in the exact image; also reports the distance."""
    return OracleComparison(subset_of(oracle, exact, tol), hausdorff_distance(oracle, exact),
                            len(oracle), len(exact))
