"""Exact finite-level images f(C_k, D_k) and the extreme test configurations.

For f monotone in each variable (a certified sign case) the image of a box
is the interval between two opposite corners, so the level image is the
union of corner intervals over all box pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .expr.calculus import PartialBundle
from .expr.evaluate import eval_array, eval_real
from .fractal import (
    HomogeneousIFS,
    MoranClass,
    MoranRealization,
    GeneralIFS,
    cylinder_bounds,
    level_bounds,
    xi,
)
from .interval import (
    IMAGE_TOL,
    Interval,
    IntervalSet,
    as_bounds,
    component_count,
    hausdorff_distance,
    normalize,
    set_equal,
    subset_of,
)
from .signs import ALL_CASES, SignCase

Source = Union[MoranRealization, HomogeneousIFS, GeneralIFS]


def _f(b) -> object:
    return b.f if isinstance(b, PartialBundle) else b


def box_images(b, sc: SignCase | None, xlo, xhi, ylo, yhi) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`box_image`; ``sc=None`` takes min/max over four corners."""
    f = _f(b)
    if sc is None:
        vals = np.stack([eval_array(f, x, y) for x in (xlo, xhi) for y in (ylo, yhi)])
        return vals.min(axis=0), vals.max(axis=0)
    lo = eval_array(f, *sc.min_corner(xlo, xhi, ylo, yhi))
    hi = eval_array(f, *sc.max_corner(xlo, xhi, ylo, yhi))
    return lo, hi


def box_image(b, sc: SignCase | None, box: tuple[Interval, Interval]) -> Interval:
    X, Y = box
    f = _f(b)
    if sc is None:
        vals = [eval_real(f, x, y) for x in (X.lo, X.hi) for y in (Y.lo, Y.hi)]
        return Interval(min(vals), max(vals))
    lo = eval_real(f, *sc.min_corner(X.lo, X.hi, Y.lo, Y.hi))
    hi = eval_real(f, *sc.max_corner(X.lo, X.hi, Y.lo, Y.hi))
    return Interval(lo, hi)


def hull_image(b, sc: SignCase | None) -> Interval:
    """Image of the unit square."""
    return box_image(b, sc, (Interval(0.0, 1.0), Interval(0.0, 1.0)))


def level_image(b, sc: SignCase | None, C, D, merge_tol: float = IMAGE_TOL) -> IntervalSet:
    """Union of box images over every pair from ``C`` x ``D``, normalized."""
    clo, chi = as_bounds(C)
    dlo, dhi = as_bounds(D)
    xlo, ylo = np.meshgrid(clo, dlo, indexing="ij")
    xhi, yhi = np.meshgrid(chi, dhi, indexing="ij")
    lo, hi = box_images(b, sc, xlo.ravel(), xhi.ravel(), ylo.ravel(), yhi.ravel())
    return normalize((lo, hi), merge_tol)


def source_bounds(src: Source, k: int) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(src, MoranRealization):
        return level_bounds(src, k)
    return cylinder_bounds(src, k)


@dataclass(frozen=True)
class LevelEntry:
    k: int
    image: IntervalSet
    components: int
    distance_to_previous: float | None
    equal_to_previous: bool | None
    nested_in_previous: bool | None


@dataclass(frozen=True)
class LevelImageReport:
    levels: tuple[LevelEntry, ...]
    rigorous: bool

    @property
    def stabilized(self) -> bool:
        return all(e.equal_to_previous for e in self.levels[1:])

    @property
    def nested(self) -> bool:
        return all(e.nested_in_previous for e in self.levels[1:])

    @property
    def final(self) -> IntervalSet:
        return self.levels[-1].image


def stabilization_report(b, sc: SignCase | None, sources: tuple[Source, Source], k_max: int,
                         tol: float = IMAGE_TOL) -> LevelImageReport:
    """Level images for k = 0..k_max with level-to-level comparisons."""
    s1, s2 = sources
    entries = []
    prev = None
    for k in range(k_max + 1):
        img = level_image(b, sc, source_bounds(s1, k), source_bounds(s2, k), tol)
        if prev is None:
            entries.append(LevelEntry(k, img, component_count(img), None, None, None))
        else:
            entries.append(LevelEntry(k, img, component_count(img), hausdorff_distance(prev, img),
                                      set_equal(prev, img, tol), subset_of(img, prev, tol)))
        prev = img
    return LevelImageReport(tuple(entries), sc is not None)


# -- extreme configurations ---------------------------------------------------------


@dataclass(frozen=True)
class FixturePair:
    """Two points to compare under f, with the expected displacement between them."""

    name: str
    P_hi: tuple[Fraction, Fraction]
    P_lo: tuple[Fraction, Fraction]
    l1: Fraction
    l2: Fraction
    case: SignCase
    k: int

    def displacement(self) -> tuple[Fraction, Fraction]:
        return self.P_hi[0] - self.P_lo[0], self.P_hi[1] - self.P_lo[1]

    def gain(self, b) -> float:
        f = _f(b)
        return eval_real(f, float(self.P_hi[0]), float(self.P_hi[1])) - \
            eval_real(f, float(self.P_lo[0]), float(self.P_lo[1]))


def _samples(lo: Fraction, hi: Fraction, m: int) -> list[Fraction]:
    if m <= 1 or lo == hi:
        return [lo]
    return [lo + (hi - lo) * Fraction(i, m - 1) for i in range(m)]


def extreme_pairs(cls: MoranClass, k: int, case: SignCase, x0_samples: int = 9) -> list[FixturePair]:
    """The left-packed configurations of the Moran argument at level k, a = b = 0."""
    if k < 1:
        raise ValueError("k must be >= 1")
    T = cls.length(k - 1)
    c, n = cls.level(k)
    x = xi(cls, k)
    B = 1 + (n - 2) * (1 - cls.kappa)
    Tc, BTc = T * c, B * T * c
    out = []
    if case.case == "PP":
        for x0 in _samples(Tc, T, x0_samples):
            out.append(FixturePair("P1/P2", (x0, BTc), (x0 - Tc, T - Tc), Tc, T * (x - 1), case, k))
        out.append(FixturePair("P3/P4", (BTc, T), (T - Tc, Fraction(0)), T * (x - 1), T, case, k))
    elif case.case == "NN":
        for x0 in _samples(Fraction(0), T - Tc, x0_samples):
            out.append(FixturePair("P5/P6", (x0, T - Tc), (x0 + Tc, BTc), -Tc, T * (1 - x), case, k))
        out.append(FixturePair("P7/P8", (T - Tc, Fraction(0)), (BTc, T), T * (1 - x), -T, case, k))
    elif case.case == "NP":
        for x0 in _samples(Fraction(0), T - Tc, x0_samples):
            out.append(FixturePair("P9/P10", (x0, BTc), (x0 + Tc, T - Tc), -Tc, T * (x - 1), case, k))
        out.append(FixturePair("P11/P12", (T - Tc, T), (BTc, Fraction(0)), T * (1 - x), T, case, k))
    else:
        for x0 in _samples(Fraction(0), T - Tc, x0_samples):
            out.append(FixturePair("P13/P14", (x0 + Tc, T - Tc), (x0, BTc), Tc, T * (1 - x), case, k))
        out.append(FixturePair("P15/P16", (BTc, Fraction(0)), (T - Tc, T), T * (x - 1), -T, case, k))
    return out


WORD_PAIR_CAP = 200


def _word_offset(ifs: HomogeneousIFS, word: tuple[int, ...]) -> Fraction:
    t = Fraction(0)
    for i in reversed(word):
        t = ifs.lam * t + ifs.a[i]
    return t


def _word_pairs(K1: HomogeneousIFS, K2: HomogeneousIFS, m: int) -> list[tuple[tuple, tuple]]:
    n1, n2 = len(K1.a), len(K2.a)
    total = (n1 * n2) ** m
    if total <= WORD_PAIR_CAP:
        idx = range(total)
    else:
        idx = np.unique(np.linspace(0, total - 1, WORD_PAIR_CAP).round().astype(np.int64)).tolist()
    out = []
    for q in idx:
        w1, w2 = [], []
        for _ in range(m):
            q, r = divmod(q, n1 * n2)
            w1.append(r // n2)
            w2.append(r % n2)
        out.append((tuple(w1), tuple(w2)))
    return out


def sss_extreme_pairs(K1: HomogeneousIFS, K2: HomogeneousIFS, k: int, case: SignCase) -> list[FixturePair]:
    """Endpoint configurations of the self-similar argument at level k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if K1.lam != K2.lam:
        raise ValueError("both systems must share one ratio")
    lam = K1.lam
    s = lam ** (k - 1)
    lk = lam ** k
    f0 = lambda i: K1.a[i]
    f1 = lambda i: K1.a[i] + lam
    g0 = lambda j: K2.a[j]
    g1 = lambda j: K2.a[j] + lam
    out = []
    for w, v in _word_pairs(K1, K2, k - 1):
        F0, G0 = _word_offset(K1, w), _word_offset(K2, v)
        F = lambda t: F0 + s * t
        G = lambda t: G0 + s * t
        for i in range(len(K1.a) - 1):
            for j in range(len(K2.a) - 1):
                gj = s * (g1(j) - g0(j + 1))
                fi = s * (f1(i) - f0(i + 1))
                if case.case == "PP":
                    out.append(FixturePair("P17/P18", (F(f1(i)), G(g1(j))), (F(f1(i)) - lk, G(g0(j + 1))),
                                           lk, gj, case, k))
                    out.append(FixturePair("P19/P20", (F(f1(i)), G(1)), (F(f0(i + 1)), G(0)), fi, s, case, k))
                elif case.case == "NN":
                    out.append(FixturePair("P21/P22", (F(f0(i)), G(g0(j + 1))), (F(f0(i)) + lk, G(g1(j))),
                                           -lk, -gj, case, k))
                    out.append(FixturePair("P23/P24", (F(f0(i + 1)), G(0)), (F(f1(i)), G(1)), -fi, -s, case, k))
                elif case.case == "NP":
                    out.append(FixturePair("P25/P26", (F(f0(i)), G(g1(j))), (F(f0(i)) + lk, G(g0(j + 1))),
                                           -lk, gj, case, k))
                    out.append(FixturePair("P27/P28", (F(f0(i + 1)), G(1)), (F(f1(i)), G(0)), -fi, s, case, k))
                else:
                    out.append(FixturePair("P29/P30", (F(f1(i)), G(g0(j + 1))), (F(f1(i)) - lk, G(g1(j))),
                                           lk, -gj, case, k))
                    out.append(FixturePair("P31/P32", (F(f1(i)), G(0)), (F(f0(i + 1)), G(1)), fi, -s, case, k))
    return out


def all_extreme_pairs(cls: MoranClass, k: int, x0_samples: int = 9) -> list[FixturePair]:
    return [p for sc in ALL_CASES for p in extreme_pairs(cls, k, sc, x0_samples)]
