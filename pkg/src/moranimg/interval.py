"""Closed intervals and normalized finite unions of them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from . import kernels

#: merge tolerance for constructions, where touching is exact by design
CONSTRUCTION_TOL = 1e-12
#: merge tolerance for comparing images computed at different levels
IMAGE_TOL = 1e-9


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def to_list(self) -> list[float]:
        return [self.lo, self.hi]

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"


IntervalLike = Union[Interval, Sequence[float]]


@dataclass(frozen=True)
class IntervalSet:
    """Sorted, pairwise disjoint closed intervals.

    Consecutive items are separated by gaps strictly wider than
    ``merge_tol``.  Build instances with :func:`normalize`.
    """

    items: tuple[Interval, ...]
    merge_tol: float = CONSTRUCTION_TOL

    @property
    def lows(self) -> np.ndarray:
        return np.array([iv.lo for iv in self.items])

    @property
    def highs(self) -> np.ndarray:
        return np.array([iv.hi for iv in self.items])

    @property
    def hull(self) -> Interval:
        return Interval(self.items[0].lo, self.items[-1].hi)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i) -> Interval:
        return self.items[i]

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return bool(points_inside(self, np.array([x]), tol)[0])

    def to_list(self) -> list[list[float]]:
        return [iv.to_list() for iv in self.items]

    def __repr__(self) -> str:
        return "{" + ", ".join(repr(iv) for iv in self.items) + "}"


def as_bounds(raw) -> tuple[np.ndarray, np.ndarray]:
    """Lower/upper bound arrays from Intervals, pairs, or an (N, 2) array."""
    if isinstance(raw, IntervalSet):
        return raw.lows, raw.highs
    if isinstance(raw, tuple) and len(raw) == 2 and isinstance(raw[0], np.ndarray):
        return np.asarray(raw[0], dtype=float), np.asarray(raw[1], dtype=float)
    if isinstance(raw, np.ndarray):
        arr = np.asarray(raw, dtype=float).reshape(-1, 2)
        return arr[:, 0].copy(), arr[:, 1].copy()
    pairs = [(iv.lo, iv.hi) if isinstance(iv, Interval) else tuple(iv) for iv in raw]
    if not pairs:
        return np.empty(0), np.empty(0)
    arr = np.asarray(pairs, dtype=float)
    return arr[:, 0].copy(), arr[:, 1].copy()


def normalize(raw: Iterable[IntervalLike] | np.ndarray, merge_tol: float = CONSTRUCTION_TOL) -> IntervalSet:
    """Sort and merge intervals whose gap is at most ``merge_tol``."""
    if merge_tol < 0:
        raise ValueError("merge_tol must be nonnegative")
    lo, hi = as_bounds(raw)
    if lo.size == 0:
        raise ValueError("cannot normalize an empty collection of intervals")
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise ValueError("interval endpoints must be finite")
    if np.any(lo > hi):
        raise ValueError("input contains an empty interval (lo > hi)")
    order = np.argsort(lo, kind="stable")
    mlo, mhi = kernels.merge_sorted(lo[order], hi[order], float(merge_tol))
    items = tuple(Interval(a, b) for a, b in zip(mlo.tolist(), mhi.tolist()))
    return IntervalSet(items, float(merge_tol))


def component_count(a: IntervalSet) -> int:
    return len(a.items)


def set_equal(a: IntervalSet, b: IntervalSet, tol: float) -> bool:
    """Same number of components and every endpoint within ``tol``."""
    if len(a) != len(b):
        return False
    return bool(np.all(np.abs(a.lows - b.lows) <= tol) and np.all(np.abs(a.highs - b.highs) <= tol))


def points_inside(a: IntervalSet, pts: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Boolean mask: which points lie in the union of ``a`` enlarged by ``tol``."""
    pts = np.asarray(pts, dtype=float)
    lows, highs = a.lows - tol, a.highs + tol
    idx = np.searchsorted(lows, pts, side="right") - 1
    ok = idx >= 0
    safe = np.clip(idx, 0, len(a) - 1)
    return ok & (pts <= highs[safe])


def subset_of(a: IntervalSet, b: IntervalSet, tol: float = 0.0) -> bool:
    """True iff every point of ``a`` lies within ``tol`` of ``b``."""
    grown = normalize((b.lows - tol, b.highs + tol), 0.0)
    idx = np.searchsorted(grown.lows, a.lows, side="right") - 1
    if np.any(idx < 0):
        return False
    return bool(np.all(a.highs <= grown.highs[idx]))


def _distance_to(b: IntervalSet, pts: np.ndarray) -> np.ndarray:
    lows, highs = b.lows, b.highs
    idx = np.searchsorted(lows, pts, side="right") - 1
    # nearest component is either idx (at or left of the point) or idx + 1
    left = np.clip(idx, 0, len(b) - 1)
    right = np.clip(idx + 1, 0, len(b) - 1)
    d_left = np.where(pts > highs[left], pts - highs[left], np.where(pts >= lows[left], 0.0, lows[left] - pts))
    d_right = np.where(pts < lows[right], lows[right] - pts, np.where(pts <= highs[right], 0.0, pts - highs[right]))
    return np.minimum(d_left, d_right)


def _directed(a: IntervalSet, b: IntervalSet) -> float:
    # distance to b is piecewise linear: extrema at a's endpoints or b's gap midpoints
    cand = [a.lows, a.highs]
    if len(b) > 1:
        mids = 0.5 * (b.highs[:-1] + b.lows[1:])
        cand.append(mids[points_inside(a, mids)])
    pts = np.concatenate(cand)
    return float(np.max(_distance_to(b, pts)))


def hausdorff_distance(a: IntervalSet, b: IntervalSet) -> float:
    return max(_directed(a, b), _directed(b, a))
