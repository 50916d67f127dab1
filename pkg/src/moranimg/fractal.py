"""Moran classes with overlaps, their concrete realizations, and IFS attractors.

Class parameters (c_k, n_k, kappa, IFS ratios and translations) are kept as
exact ``Fraction`` values so that closed conditions such as
``c_k + xi_k >= 1`` are decided exactly.  Realized basic intervals are
float arrays; they feed the image computations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .interval import Interval

Rational = Union[int, float, str, Fraction]


def to_fraction(v: Rational) -> Fraction:
    """Exact rational from an int, a ``"p/q"`` or decimal string, or a float.

    Floats go through their shortest repr, so ``0.3`` means 3/10.
    """
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"non-finite parameter {v!r}")
        return Fraction(repr(v))
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"cannot interpret {v!r} as a rational number")


def _is_exact_input(v: Rational) -> bool:
    return not isinstance(v, float)


FLOAT_TOL = 1e-12


def _same(a: Fraction, b: Fraction, exact: bool) -> bool:
    """Equality, relaxed to FLOAT_TOL when a parameter was given as a float."""
    return a == b if exact else abs(a - b) <= FLOAT_TOL


# -- eventually periodic sequences -------------------------------------------


@dataclass(frozen=True)
class PeriodicSequence:
    """``preperiod`` followed by ``period`` repeated forever; indexed from 1."""

    preperiod: tuple
    period: tuple

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))

    def __getitem__(self, k: int):
        if k < 1:
            raise IndexError("levels are numbered from 1")
        if k <= len(self.preperiod):
            return self.preperiod[k - 1]
        return self.period[(k - 1 - len(self.preperiod)) % len(self.period)]

    def values(self) -> tuple:
        return self.preperiod + self.period


# -- Moran classes -------------------------------------------------------------


@dataclass(frozen=True)
class LevelTriple:
    c: Fraction
    n: int
    xi: Fraction


@dataclass(frozen=True)
class LevelSummary:
    triples: tuple[LevelTriple, ...]
    sup_one_minus_xi: Fraction
    inf_c_over_one_minus_xi: Fraction


@dataclass(frozen=True)
class MoranClass:
    c: PeriodicSequence
    n: PeriodicSequence
    kappa: Fraction

    def __post_init__(self):
        c = PeriodicSequence(tuple(to_fraction(v) for v in self.c.preperiod),
                             tuple(to_fraction(v) for v in self.c.period))
        n = PeriodicSequence(tuple(int(v) for v in self.n.preperiod),
                             tuple(int(v) for v in self.n.period))
        kappa = to_fraction(self.kappa)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "kappa", kappa)
        if not 0 <= kappa < 1:
            raise ValueError(f"kappa must lie in [0, 1), got {kappa}")
        for k in range(1, self.horizon + 1):
            ck, nk = c[k], n[k]
            if not 0 < ck < Fraction(1, 2):
                raise ValueError(f"c_{k} = {ck} is not in (0, 1/2)")
            if nk < 2:
                raise ValueError(f"n_{k} = {nk} must be at least 2")
            if ck * nk >= 1:
                raise ValueError(f"c_{k} * n_{k} = {ck * nk} must be < 1")

    @classmethod
    def constant(cls, c: Rational, n: int, kappa: Rational = 0) -> "MoranClass":
        return cls(PeriodicSequence((), (c,)), PeriodicSequence((), (n,)), kappa)

    @classmethod
    def cantor(cls) -> "MoranClass":
        return cls.constant(Fraction(1, 3), 2, 0)

    @classmethod
    def from_levels(cls, preperiod: Sequence[tuple], period: Sequence[tuple], kappa: Rational = 0) -> "MoranClass":
        """Build from ``(c, n)`` pairs."""
        return cls(PeriodicSequence(tuple(p[0] for p in preperiod), tuple(p[0] for p in period)),
                   PeriodicSequence(tuple(p[1] for p in preperiod), tuple(p[1] for p in period)),
                   kappa)

    @property
    def horizon(self) -> int:
        """Number of leading levels after which (c_k, n_k) repeats."""
        pre = max(len(self.c.preperiod), len(self.n.preperiod))
        return pre + math.lcm(len(self.c.period), len(self.n.period))

    def level(self, k: int) -> tuple[Fraction, int]:
        return self.c[k], self.n[k]

    def length(self, k: int) -> Fraction:
        """Exact length c_1 ... c_k of a level-k basic interval."""
        out = Fraction(1)
        for j in range(1, k + 1):
            out *= self.c[j]
        return out

    def count(self, k: int) -> int:
        out = 1
        for j in range(1, k + 1):
            out *= self.n[j]
        return out


def xi(cls: MoranClass, k: int) -> Fraction:
    """c_k (2 + (n_k - 2)(1 - kappa)), the span of the packed block plus one child."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ck, nk = cls.level(k)
    return ck * (2 + (nk - 2) * (1 - cls.kappa))


def distinct_levels(cls: MoranClass, start: int = 1) -> LevelSummary:
    """All distinct (c_k, n_k, xi_k) for k >= start, with the binding ratio bounds."""
    if start < 1:
        raise ValueError("start must be >= 1")
    seen: dict[tuple, LevelTriple] = {}
    for k in range(start, start + cls.horizon):
        ck, nk = cls.level(k)
        key = (ck, nk)
        if key not in seen:
            seen[key] = LevelTriple(ck, nk, xi(cls, k))
    triples = tuple(seen.values())
    sup_lo = max(1 - t.xi for t in triples)
    inf_hi = min(t.c / (1 - t.xi) for t in triples)
    return LevelSummary(triples, sup_lo, inf_hi)


# -- realizations ----------------------------------------------------------------

STRATEGIES = ("uniform", "extreme_left_packed", "random")
RANDOM_RETRIES = 10_000


@dataclass(frozen=True, eq=False)
class MoranRealization:
    """One placement of basic intervals down to ``depth``.

    ``offsets[k - 1]`` has shape ``(n_1 ... n_{k-1}, n_k)``: the left ends of
    the children of each level-(k-1) parent, in units of the parent length.
    """

    cls: MoranClass
    depth: int
    offsets: tuple[np.ndarray, ...]
    strategy: str = "custom"

    def __post_init__(self):
        if len(self.offsets) != self.depth:
            raise ValueError("need one offset array per level")
        parents = 1
        for k, off in enumerate(self.offsets, start=1):
            ck, nk = self.cls.level(k)
            if off.shape != (parents, nk):
                raise ValueError(f"level {k} offsets have shape {off.shape}, expected {(parents, nk)}")
            check_offsets(off, float(ck), float(self.cls.kappa))
            parents *= nk

    def length(self, k: int) -> float:
        return float(self.cls.length(k))


def check_offsets(off: np.ndarray, c: float, kappa: float, tol: float = 1e-12) -> None:
    """Raise ValueError unless each row satisfies the pinning and overlap rules."""
    if np.any(np.abs(off[:, 0]) > tol):
        raise ValueError("first child must start at the parent's left end")
    if np.any(np.abs(off[:, -1] - (1 - c)) > tol):
        raise ValueError("last child must end at the parent's right end")
    steps = np.diff(off, axis=1)
    if np.any(steps < c * (1 - kappa) - tol):
        raise ValueError("adjacent children overlap by more than kappa")


def _uniform_row(c: float, n: int) -> np.ndarray:
    return np.arange(n) * ((1 - c) / (n - 1))


def _packed_row(c: float, n: int, kappa: float) -> np.ndarray:
    row = np.arange(n) * (c * (1 - kappa))
    row[-1] = 1 - c
    return row


def _random_rows(rng: np.random.Generator, parents: int, c: float, n: int, kappa: float) -> np.ndarray:
    out = np.empty((parents, n))
    out[:, 0] = 0.0
    out[:, -1] = 1 - c
    if n == 2:
        return out
    min_step = c * (1 - kappa)
    todo = np.arange(parents)
    for _ in range(RANDOM_RETRIES):
        inner = np.sort(rng.uniform(0.0, 1 - c, size=(todo.size, n - 2)), axis=1)
        rows = np.concatenate([np.zeros((todo.size, 1)), inner, np.full((todo.size, 1), 1 - c)], axis=1)
        ok = np.all(np.diff(rows, axis=1) >= min_step, axis=1)
        out[todo[ok]] = rows[ok]
        todo = todo[~ok]
        if todo.size == 0:
            return out
    raise RuntimeError(f"random placement failed after {RANDOM_RETRIES} attempts")


def realize(cls: MoranClass, depth: int, strategy: str = "uniform", seed: int | None = None) -> MoranRealization:
    """Place basic intervals down to ``depth``.

    ``uniform`` spaces children evenly; ``extreme_left_packed`` overlaps the
    first n_k - 1 children by exactly kappa and pins the last one right;
    ``random`` draws valid placements by rejection sampling from ``seed``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    rng = np.random.default_rng(seed)
    kappa = float(cls.kappa)
    offsets = []
    parents = 1
    for k in range(1, depth + 1):
        ck, nk = cls.level(k)
        c = float(ck)
        if strategy == "uniform":
            off = np.tile(_uniform_row(c, nk), (parents, 1))
        elif strategy == "extreme_left_packed":
            off = np.tile(_packed_row(c, nk, kappa), (parents, 1))
        else:
            off = _random_rows(rng, parents, c, nk, kappa)
        offsets.append(off)
        parents *= nk
    name = strategy if strategy != "random" else f"random({seed})"
    return MoranRealization(cls, depth, tuple(offsets), name)


def level_bounds(r: MoranRealization, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Left and right ends of the level-k basic intervals, parent-major order."""
    if k < 0 or k > r.depth:
        raise ValueError(f"level {k} outside realization depth {r.depth}")
    lows = np.zeros(1)
    parent_len = 1.0
    for j in range(1, k + 1):
        lows = (lows[:, None] + r.offsets[j - 1] * parent_len).ravel()
        parent_len = r.length(j)
    return lows, lows + parent_len


def level_intervals(r: MoranRealization, k: int) -> list[Interval]:
    lows, highs = level_bounds(r, k)
    return [Interval(a, b) for a, b in zip(lows.tolist(), highs.tolist())]


# -- iterated function systems ----------------------------------------------------


class EmptyGapError(ValueError):
    """The IFS has no positive gap, so its attractor is all of [0, 1]."""


@dataclass(frozen=True)
class GapProfile:
    F: tuple[int, ...]
    gaps: tuple[tuple[int, Fraction], ...]
    tau: Fraction


@dataclass(frozen=True)
class HomogeneousIFS:
    """Maps x -> lam*x + a_i, sorted by translation, hull [0, 1]."""

    lam: Fraction
    a: tuple[Fraction, ...]
    exact: bool = field(default=True, compare=False)

    def __post_init__(self):
        exact = self.exact and _is_exact_input(self.lam) and all(_is_exact_input(v) for v in self.a)
        lam = to_fraction(self.lam)
        a = tuple(to_fraction(v) for v in self.a)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "exact", exact)
        if not 0 < lam < 1:
            raise ValueError(f"lambda must lie in (0, 1), got {lam}")
        if len(a) < 2:
            raise ValueError("need at least two maps")
        if a[0] != 0 or not _same(a[-1], 1 - lam, exact):
            raise ValueError("translations must start at 0 and end at 1 - lambda")
        if any(a[i] > a[i + 1] for i in range(len(a) - 1)):
            raise ValueError("translations must be nondecreasing")
        gap_profile(self)

    @classmethod
    def cantor(cls) -> "HomogeneousIFS":
        return cls(Fraction(1, 3), (Fraction(0), Fraction(2, 3)))

    @property
    def maps(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple((self.lam, t) for t in self.a)

    def __len__(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class GeneralIFS:
    """Maps x -> r_i*x + a_i with positive ratios and hull [0, 1]."""

    maps: tuple[tuple[Fraction, Fraction], ...]
    exact: bool = field(default=True, compare=False)

    def __post_init__(self):
        exact = self.exact and all(_is_exact_input(r) and _is_exact_input(t) for r, t in self.maps)
        maps = tuple((to_fraction(r), to_fraction(t)) for r, t in self.maps)
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "exact", exact)
        if not maps:
            raise ValueError("need at least one map")
        if any(not 0 < r < 1 for r, _ in maps):
            raise ValueError("ratios must lie in (0, 1)")
        if not (_same(min(t for _, t in maps), Fraction(0), exact)
                and _same(max(r + t for r, t in maps), Fraction(1), exact)):
            raise ValueError("attractor convex hull must be [0, 1]")

    def __len__(self) -> int:
        return len(self.maps)


IFS = Union[HomogeneousIFS, GeneralIFS]


def gap_profile(ifs: HomogeneousIFS) -> GapProfile:
    """Gaps a_{i+1} - (a_i + lam) between neighbouring first-level cylinders."""
    lam, a = ifs.lam, ifs.a
    gaps = tuple((i + 1, a[i + 1] - (a[i] + lam)) for i in range(len(a) - 1))
    F = tuple(i for i, g in gaps if g > 0)
    if not F:
        raise EmptyGapError("no positive gap: the attractor is the whole interval [0, 1]")
    tau = max(g for _, g in gaps if g > 0)
    return GapProfile(F, gaps, tau)


def cylinder_bounds(ifs: IFS, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Ends of f_w([0, 1]) over all words of length k, parent-major order."""
    if k < 0:
        raise ValueError("k must be >= 0")
    r = np.array([float(m[0]) for m in ifs.maps])
    t = np.array([float(m[1]) for m in ifs.maps])
    lows = np.zeros(1)
    lens = np.ones(1)
    for _ in range(k):
        lows = (lows[:, None] + lens[:, None] * t[None, :]).ravel()
        lens = (lens[:, None] * r[None, :]).ravel()
    return lows, lows + lens


def cylinders(ifs: IFS, k: int) -> list[Interval]:
    lows, highs = cylinder_bounds(ifs, k)
    return [Interval(a, b) for a, b in zip(lows.tolist(), highs.tolist())]


def parse_word(word: str | Sequence[int]) -> tuple[int, ...]:
    """``"13"`` or ``[1, 3]`` -> (1, 3); indices are 1-based."""
    if isinstance(word, str):
        parts = word.split(",") if "," in word else list(word)
        return tuple(int(p) for p in parts)
    return tuple(int(p) for p in word)


def compose_word(ifs: IFS, word: Iterable[int]) -> tuple[Fraction, Fraction]:
    """(ratio, translation) of f_{i1} o ... o f_{im}."""
    word = tuple(word)
    maps = ifs.maps
    ratio, trans = Fraction(1), Fraction(0)
    for i in reversed(word):
        if not 1 <= i <= len(maps):
            raise ValueError(f"map index {i} out of range 1..{len(maps)}")
        r, t = maps[i - 1]
        ratio, trans = r * ratio, r * trans + t
    return ratio, trans


def verify_subifs_witness(K: GeneralIFS, Kp: HomogeneousIFS, words: Sequence) -> bool:
    """Check that composing K's maps along ``words`` reproduces every map of Kp."""
    words = [parse_word(w) for w in words]
    if len(words) != len(Kp.a):
        raise ValueError(f"need one word per map of the sub-IFS ({len(Kp.a)}), got {len(words)}")
    exact = K.exact and Kp.exact
    if not (_same(min(t for _, t in K.maps), Fraction(0), exact)
            and _same(max(r + t for r, t in K.maps), Fraction(1), exact)):
        return False
    if Kp.a[0] != 0 or not _same(Kp.a[-1] + Kp.lam, Fraction(1), exact):
        return False
    for word, target in zip(words, Kp.a):
        ratio, trans = compose_word(K, word)
        if not (_same(ratio, Kp.lam, exact) and _same(trans, target, exact)):
            return False
    return True


def words_of_length(n_maps: int, k: int) -> Iterable[tuple[int, ...]]:
    return itertools.product(range(1, n_maps + 1), repeat=k)
