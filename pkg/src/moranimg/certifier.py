"""Interval branch-and-bound certification of the derivative conditions.

Every condition is reduced to ``g >= 0`` (or ``g > 0`` for the sign
conditions) for an expression ``g`` built from the partial bundle with the
exact smart constructors.  Boxes are processed breadth-first in vectorized
batches; a box is settled when its enclosure has the right sign, refuted when
the enclosure of the box or of one of its corners or centre has the wrong
sign, and bisected along its wider side otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .expr import calculus as ca
from .expr.evaluate import enclose
from .expr.calculus import PartialBundle
from .expr.nodes import Const, Expr
from .fractal import (
    GeneralIFS,
    HomogeneousIFS,
    MoranClass,
    distinct_levels,
    gap_profile,
    to_fraction,
    verify_subifs_witness,
)
from .interval import Interval
from .signs import SignCase

CERTIFIED = "Certified"
VIOLATED = "ConditionsViolated"
UNKNOWN = "Unknown"

DEFAULT_BUDGET = 200_000
DEPTH_CAP = 40
_BATCH = 65_536


class WitnessError(ValueError):
    """The sub-IFS words do not reproduce the claimed homogeneous sub-system."""


@dataclass(frozen=True)
class DomainSpec:
    """Finite list of boxes (xlo, xhi, ylo, yhi) inside the unit square."""

    boxes: tuple[tuple[Interval, Interval], ...]
    unit: bool = False

    def __post_init__(self):
        if not self.boxes:
            raise ValueError("domain needs at least one box")
        for X, Y in self.boxes:
            if X.lo < 0 or Y.lo < 0 or X.hi > 1 or Y.hi > 1:
                raise ValueError(f"box {X} x {Y} leaves the unit square")

    @classmethod
    def unit_square(cls) -> "DomainSpec":
        return cls(((Interval(0.0, 1.0), Interval(0.0, 1.0)),), unit=True)

    @classmethod
    def from_levels(cls, C: Sequence[Interval], D: Sequence[Interval]) -> "DomainSpec":
        """All boxes I x J with I from C and J from D."""
        return cls(tuple((I, J) for I in C for J in D))

    def arrays(self) -> tuple[np.ndarray, ...]:
        a = np.array([(X.lo, X.hi, Y.lo, Y.hi) for X, Y in self.boxes], dtype=float)
        return a[:, 0].copy(), a[:, 1].copy(), a[:, 2].copy(), a[:, 3].copy()

    def __len__(self) -> int:
        return len(self.boxes)


@dataclass(frozen=True)
class Witness:
    condition: str
    box: tuple[float, float, float, float]
    enclosure: tuple[float, float]


@dataclass(frozen=True)
class Stats:
    boxes: int = 0
    max_depth: int = 0

    def __add__(self, other: "Stats") -> "Stats":
        return Stats(self.boxes + other.boxes, max(self.max_depth, other.max_depth))


@dataclass(frozen=True)
class ConditionResult:
    id: str
    expression: str
    status: str
    witness: Witness | None
    stats: Stats


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Witness | None = None
    stats: Stats = Stats()
    conditions: tuple[ConditionResult, ...] = ()
    sign_case: SignCase | None = None
    conclusion: str | None = None
    constants: dict = field(default_factory=dict)
    image: Interval | None = None

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED


def _combine(results: Sequence[ConditionResult], **extra) -> Verdict:
    """Conjunction: the first violation wins, then Unknown, then Certified."""
    stats = Stats()
    for r in results:
        stats = stats + r.stats
    status, witness = CERTIFIED, None
    for r in results:
        if r.status == VIOLATED:
            status, witness = VIOLATED, r.witness
            break
        if r.status == UNKNOWN:
            status = UNKNOWN
    return Verdict(status, witness, stats, tuple(results), **extra)


# -- branch and bound ---------------------------------------------------------


def _lex_first(*cols: np.ndarray) -> int:
    return int(np.lexsort(cols[::-1])[0])


def prove_nonneg(g: Expr, dom: DomainSpec, budget: int = DEFAULT_BUDGET, strict: bool = False,
                 condition: str = "g", depth_cap: int = DEPTH_CAP) -> ConditionResult:
    """Decide ``g >= 0`` (``g > 0`` if strict) on every point of ``dom``."""
    expr_text = str(g)
    if isinstance(g, Const):
        ok = g.value > 0 if strict else g.value >= 0
        if ok:
            return ConditionResult(condition, expr_text, CERTIFIED, None, Stats(len(dom), 0))
        X, Y = dom.boxes[0]
        v = float(g.value)
        w = Witness(condition, (X.lo, X.hi, Y.lo, Y.hi), (v, v))
        return ConditionResult(condition, expr_text, VIOLATED, w, Stats(1, 0))

    xlo, xhi, ylo, yhi = dom.arrays()
    depth = np.zeros(xlo.size, dtype=np.int64)
    processed = 0
    max_depth = 0
    unknown = False
    while xlo.size:
        if processed >= budget:
            unknown = True
            break
        take = min(xlo.size, _BATCH, budget - processed)
        bx = (xlo[:take], xhi[:take], ylo[:take], yhi[:take])
        bd = depth[:take]
        rest = (xlo[take:], xhi[take:], ylo[take:], yhi[take:], depth[take:])
        processed += take
        max_depth = max(max_depth, int(bd.max()))

        lo, hi = enclose(g, *bx)
        nan = np.isnan(lo) | np.isnan(hi)
        good = ~nan & ((lo > 0) if strict else (lo >= 0))
        bad = ~nan & ((hi <= 0) if strict else (hi < 0))
        if np.any(bad):
            i = _lex_first(*(b[bad] for b in bx))
            box = tuple(float(b[bad][i]) for b in bx)
            w = Witness(condition, box, (float(lo[bad][i]), float(hi[bad][i])))
            return ConditionResult(condition, expr_text, VIOLATED, w, Stats(processed, max_depth))

        open_ = ~good
        ox = tuple(b[open_] for b in bx)
        od = bd[open_]
        if ox[0].size:
            w = _point_refutation(g, ox, strict, condition)
            if w is not None:
                return ConditionResult(condition, expr_text, VIOLATED, w, Stats(processed, max_depth))
            if np.any(od >= depth_cap):
                unknown = True
                break
            children = _bisect(*ox)
            nd = np.concatenate([od + 1, od + 1])
            xlo = np.concatenate([rest[0], children[0]])
            xhi = np.concatenate([rest[1], children[1]])
            ylo = np.concatenate([rest[2], children[2]])
            yhi = np.concatenate([rest[3], children[3]])
            depth = np.concatenate([rest[4], nd])
        else:
            xlo, xhi, ylo, yhi, depth = rest
    status = UNKNOWN if unknown else CERTIFIED
    return ConditionResult(condition, expr_text, status, None, Stats(processed, max_depth))


def _bisect(xlo, xhi, ylo, yhi):
    split_x = (xhi - xlo) >= (yhi - ylo)
    xm = 0.5 * (xlo + xhi)
    ym = 0.5 * (ylo + yhi)
    a = (xlo, np.where(split_x, xm, xhi), ylo, np.where(split_x, yhi, ym))
    b = (np.where(split_x, xm, xlo), xhi, np.where(split_x, ylo, ym), yhi)
    return tuple(np.concatenate([p, q]) for p, q in zip(a, b))


def _point_refutation(g: Expr, boxes, strict: bool, condition: str) -> Witness | None:
    """Rigorous point enclosures at the centre and corners of each open box."""
    xlo, xhi, ylo, yhi = boxes
    xm, ym = 0.5 * (xlo + xhi), 0.5 * (ylo + yhi)
    px = np.concatenate([xm, xlo, xlo, xhi, xhi])
    py = np.concatenate([ym, ylo, yhi, ylo, yhi])
    lo, hi = enclose(g, px, px, py, py)
    bad = ~np.isnan(hi) & ((hi <= 0) if strict else (hi < 0))
    if not np.any(bad):
        return None
    i = _lex_first(px[bad], py[bad])
    x, y = float(px[bad][i]), float(py[bad][i])
    return Witness(condition, (x, x, y, y), (float(lo[bad][i]), float(hi[bad][i])))


# -- individual conditions ------------------------------------------------------


def quadform(l1: Fraction, l2: Fraction, b: PartialBundle) -> Expr:
    """l1^2 fxx + 2 l1 l2 fxy + l2^2 fyy."""
    l1, l2 = to_fraction(l1), to_fraction(l2)
    return ca.add(ca.add(ca.mul(ca.const(l1 * l1), b.fxx), ca.mul(ca.const(2 * l1 * l2), b.fxy)),
                  ca.mul(ca.const(l2 * l2), b.fyy))


def _sign_results(b: PartialBundle, dom: DomainSpec, budget: int) -> tuple[SignCase | None, list]:
    X, Y = dom.boxes[0]
    xm, ym = np.array([X.mid]), np.array([Y.mid])
    results = []
    signs = []
    for name, d in (("fx", b.fx), ("fy", b.fy)):
        lo, hi = enclose(d, xm, xm, ym, ym)
        # a partial that is not sign-definite at the centre is tried as
        # positive; the search then refutes it wherever it reaches zero
        s = -1 if hi[0] < 0 else 1
        results.append(prove_nonneg(ca.mul(ca.const(s), d), dom, budget, strict=True, condition=f"sign_{name}"))
        signs.append(s)
    if all(r.status == CERTIFIED for r in results):
        return SignCase.from_signs(*signs), results
    return None, results


def classify_signs(b: PartialBundle, dom: DomainSpec, budget: int = DEFAULT_BUDGET) -> SignCase | Verdict:
    """Common strict signs of fx and fy over ``dom``, or a failing Verdict."""
    sc, results = _sign_results(b, dom, budget)
    return sc if sc is not None else _combine(results)


def certify_nonneg_quadform(l1, l2, b: PartialBundle, dom: DomainSpec, budget: int = DEFAULT_BUDGET,
                            condition: str | None = None) -> Verdict:
    l1, l2 = to_fraction(l1), to_fraction(l2)
    cid = condition or f"quadform({l1},{l2})"
    return _combine([prove_nonneg(quadform(l1, l2, b), dom, budget, condition=cid)])


def ratio_conditions(lo, hi, sc: SignCase, b: PartialBundle) -> tuple[Expr, Expr]:
    """s (delta fy - lo fx) and s (hi fx - delta fy), s the sign of fx."""
    lo, hi = to_fraction(lo), to_fraction(hi)
    s = ca.const(sc.sx)
    dfy = ca.mul(ca.const(sc.delta), b.fy)
    lower = ca.mul(s, ca.sub(dfy, ca.mul(ca.const(lo), b.fx)))
    upper = ca.mul(s, ca.sub(ca.mul(ca.const(hi), b.fx), dfy))
    return lower, upper


def _ratio_results(lo, hi, sc, b, dom, budget) -> list[ConditionResult]:
    lower, upper = ratio_conditions(lo, hi, sc, b)
    return [prove_nonneg(lower, dom, budget, condition=f"ratio_lower({to_fraction(lo)})"),
            prove_nonneg(upper, dom, budget, condition=f"ratio_upper({to_fraction(hi)})")]


def certify_ratio_bounds(lo, hi, sc: SignCase, b: PartialBundle, dom: DomainSpec,
                         budget: int = DEFAULT_BUDGET) -> Verdict:
    """lo <= delta fy / fx <= hi on ``dom`` via sign-corrected products."""
    if to_fraction(lo) > to_fraction(hi):
        results = [ConditionResult("ratio_bounds", f"[{lo}, {hi}]", VIOLATED,
                                   Witness("ratio_bounds", (0.0, 1.0, 0.0, 1.0), (float(lo), float(hi))), Stats())]
        return _combine(results, sign_case=sc)
    return _combine(_ratio_results(lo, hi, sc, b, dom, budget), sign_case=sc)


# -- certifiers per fractal kind ---------------------------------------------------


def _conclusion(dom: DomainSpec) -> str:
    if dom.unit:
        return "closed interval"
    return f"union of at most {len(dom)} closed intervals"


def certify_moran(b: PartialBundle, cls: MoranClass, dom: DomainSpec | None = None,
                  budget: int = DEFAULT_BUDGET, start: int = 1) -> Verdict:
    """Derivative conditions for two sets of one Moran class with overlaps.

    ``start`` is the first level the conditions quantify over; use p for a
    domain made of level-p box pairs.
    """
    dom = dom or DomainSpec.unit_square()
    levels = distinct_levels(cls, start)
    constants = {
        "kappa": cls.kappa,
        "levels": [{"c": t.c, "n": t.n, "xi": t.xi, "c_plus_xi": t.c + t.xi} for t in levels.triples],
        "ratio_lower": levels.sup_one_minus_xi,
        "ratio_upper": levels.inf_c_over_one_minus_xi,
    }
    sc, results = _sign_results(b, dom, budget)
    if sc is None:
        return _combine(results, constants=constants)
    constants["delta"] = sc.delta
    seen = set()
    for t in levels.triples:
        m = sc.delta * (t.xi - 1)
        for l1, l2 in ((t.c, m), (m, Fraction(1))):
            if (l1, l2) in seen:
                continue
            seen.add((l1, l2))
            results.append(prove_nonneg(quadform(l1, l2, b), dom, budget, condition=f"quadform({l1},{l2})"))
    if levels.sup_one_minus_xi > levels.inf_c_over_one_minus_xi:
        w = Witness("ratio_bounds", (0.0, 1.0, 0.0, 1.0),
                    (float(levels.sup_one_minus_xi), float(levels.inf_c_over_one_minus_xi)))
        results.append(ConditionResult("ratio_bounds", "empty bound interval", VIOLATED, w, Stats()))
    else:
        results += _ratio_results(levels.sup_one_minus_xi, levels.inf_c_over_one_minus_xi, sc, b, dom, budget)
    return _combine(results, sign_case=sc, conclusion=_conclusion(dom), constants=constants)


def certify_linear(cls: MoranClass, s) -> Verdict:
    """Closed-form check for f = x + s y; no subdivision needed."""
    s = to_fraction(s)
    if s == 0:
        raise ValueError("s must be nonzero")
    levels = distinct_levels(cls)
    lo, hi = levels.sup_one_minus_xi, levels.inf_c_over_one_minus_xi
    steinhaus = all(t.c + t.xi >= 1 for t in levels.triples)
    constants = {
        "s": s,
        "ratio_lower": lo,
        "ratio_upper": hi,
        "levels": [{"c": t.c, "n": t.n, "xi": t.xi, "c_plus_xi": t.c + t.xi} for t in levels.triples],
        "c_plus_xi_at_least_one": steinhaus,
    }
    ok = lo <= abs(s) <= hi
    cond = ConditionResult("linear_ratio", f"{lo} <= |{s}| <= {hi}", CERTIFIED if ok else VIOLATED,
                           None if ok else Witness("linear_ratio", (0.0, 1.0, 0.0, 1.0), (float(s), float(s))),
                           Stats())
    sc = SignCase("PP" if s > 0 else "PN")
    if not ok:
        return _combine([cond], sign_case=sc, constants=constants)
    image = Interval(0.0, float(1 + s)) if s > 0 else Interval(float(s), 1.0)
    conclusion = "closed interval"
    if abs(s) == 1 and steinhaus:
        conclusion = "E1 + E2 = [0, 2]" if s > 0 else "E1 - E2 = [-1, 1]"
    return _combine([cond], sign_case=sc, conclusion=conclusion, constants=constants, image=image)


def sss_forms(K1: HomogeneousIFS, K2: HomogeneousIFS, delta: int) -> list[tuple[Fraction, Fraction]]:
    """Direction vectors of the second-order conditions for a homogeneous pair."""
    lam = K1.lam
    forms = []
    for l in range(len(K2.a) - 1):
        forms.append((lam * delta, (K2.a[l] + lam) - K2.a[l + 1]))
    for j in range(len(K1.a) - 1):
        forms.append((delta * ((K1.a[j] + lam) - K1.a[j + 1]), Fraction(1)))
    return list(dict.fromkeys(forms))


def corollary8_precheck(b: PartialBundle, dom: DomainSpec, budget: int = DEFAULT_BUDGET) -> Verdict:
    """fxx >= 0, fxy <= 0, fyy >= 0: implies every form with l1 l2 <= 0."""
    return _combine([
        prove_nonneg(b.fxx, dom, budget, condition="fxx_nonneg"),
        prove_nonneg(ca.neg(b.fxy), dom, budget, condition="fxy_nonpos"),
        prove_nonneg(b.fyy, dom, budget, condition="fyy_nonneg"),
    ])


def certify_sss(b: PartialBundle, K1: HomogeneousIFS, K2: HomogeneousIFS, dom: DomainSpec | None = None,
                budget: int = DEFAULT_BUDGET, fast_path: bool = False) -> Verdict:
    """Derivative conditions for two homogeneous self-similar sets sharing lambda.

    With ``fast_path`` the sign-pattern precheck on the second partials is
    tried first; it settles every form whose coefficients l1, l2 have
    opposite signs.
    """
    if K1.lam != K2.lam:
        raise ValueError(f"both systems must share one ratio, got {K1.lam} and {K2.lam}")
    dom = dom or DomainSpec.unit_square()
    g1, g2 = gap_profile(K1), gap_profile(K2)
    lo, hi = g1.tau, K1.lam / g2.tau
    constants = {"lambda": K1.lam, "tau1": g1.tau, "tau2": g2.tau, "ratio_lower": lo, "ratio_upper": hi}
    sc, results = _sign_results(b, dom, budget)
    if sc is None:
        return _combine(results, constants=constants)
    constants["delta"] = sc.delta
    forms = sss_forms(K1, K2, sc.delta)
    constants["forms"] = forms
    pending = forms
    if fast_path and all(l1 * l2 <= 0 for l1, l2 in forms):
        pre = corollary8_precheck(b, dom, budget)
        if pre.certified:
            results += list(pre.conditions)
            pending = []
    for l1, l2 in pending:
        results.append(prove_nonneg(quadform(l1, l2, b), dom, budget, condition=f"quadform({l1},{l2})"))
    if lo > hi:
        w = Witness("ratio_bounds", (0.0, 1.0, 0.0, 1.0), (float(lo), float(hi)))
        results.append(ConditionResult("ratio_bounds", "empty bound interval", VIOLATED, w, Stats()))
    else:
        results += _ratio_results(lo, hi, sc, b, dom, budget)
    return _combine(results, sign_case=sc, conclusion=_conclusion(dom), constants=constants)


def certify_sandwich(b: PartialBundle, K: GeneralIFS, Kp: HomogeneousIFS, words: Sequence,
                     budget: int = DEFAULT_BUDGET) -> Verdict:
    """f(K, K) equals the hull image when a certified homogeneous sub-system spans [0, 1]."""
    from .image import hull_image

    if not verify_subifs_witness(K, Kp, words):
        raise WitnessError(f"words {list(words)} do not generate the given sub-system")
    inner = certify_sss(b, Kp, Kp, DomainSpec.unit_square(), budget)
    if not inner.certified:
        return inner
    H = hull_image(b, inner.sign_case)
    constants = dict(inner.constants)
    constants["words"] = [str(w) if isinstance(w, str) else "".join(map(str, w)) for w in words]
    return Verdict(CERTIFIED, None, inner.stats, inner.conditions, inner.sign_case,
                   f"f(K, K) = [{H.lo!r}, {H.hi!r}]", constants, H)


@dataclass(frozen=True)
class CantorConstants:
    ratio_bounds: tuple[Fraction, Fraction]
    forms: tuple[tuple[Fraction, Fraction], ...]
    coefficients: tuple[tuple[Fraction, Fraction, Fraction], ...]


def form_coefficients(l1: Fraction, l2: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """(fxx, fxy, fyy) coefficients scaled so the first nonzero one is 1."""
    raw = (l1 * l1, 2 * l1 * l2, l2 * l2)
    lead = next(v for v in raw if v != 0)
    return tuple(v / lead for v in raw)


def cantor_corollary_constants(delta: int = 1) -> CantorConstants:
    C = HomogeneousIFS.cantor()
    g = gap_profile(C)
    forms = tuple(sss_forms(C, C, delta))
    return CantorConstants((g.tau, C.lam / g.tau), forms, tuple(form_coefficients(*f) for f in forms))
