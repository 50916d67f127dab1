"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run ``python3 -m pytest tests/test_acceptance.py -v`` or
``python3 tests/test_acceptance.py`` for the summary alone.
"""

import math
import time
from fractions import Fraction as F

import numpy as np
import pytest

from moranimg.certifier import (
    cantor_corollary_constants,
    certify_linear,
    certify_moran,
    certify_nonneg_quadform,
    certify_sss,
    corollary8_precheck,
    DomainSpec,
    sss_forms,
)
from moranimg.demos import run_demo
from moranimg.expr import parse, partial_bundle
from moranimg.fractal import HomogeneousIFS, MoranClass, PeriodicSequence, cylinders, realize
from moranimg.image import extreme_pairs, level_image, sss_extreme_pairs, stabilization_report
from moranimg.oracle import brute_force_image
from moranimg.signs import NN, NP, PN, PP

CANTOR = MoranClass.cantor()
CIFS = HomogeneousIFS.cantor()
EX9 = "x^2 + y^2 + 6*x + 3*y + 0.5*x*y"
EX10 = "sin(-0.5*x*y) + 12*x + 6*y"
# n alternates 3, 2 so random placements differ while k = 8 stays tractable
ALTERNATING = MoranClass(PeriodicSequence((), (F(3, 10), F(2, 5))), PeriodicSequence((), (3, 2)), F(1, 2))


def _report(capsys, n: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def _demo(name: str) -> tuple[bool, float, str]:
    t = time.perf_counter()
    res = run_demo(name)
    dt = time.perf_counter() - t
    failed = [c.description + (f" ({c.detail})" if c.detail else "") for c in res.checks if not c.passed]
    return res.passed, dt, "; ".join(failed)


# -- criteria -----------------------------------------------------------------------


def criterion_1():
    ok, dt, why = _demo("steinhaus-sum")
    return ok and dt < 10, f"steinhaus-sum in {dt:.2f}s {why}".rstrip()


def criterion_2():
    ok, dt, why = _demo("steinhaus-diff")
    return ok and dt < 10, f"steinhaus-diff in {dt:.2f}s {why}".rstrip()


def criterion_3():
    ok, dt, why = _demo("cantor-product")
    return ok, f"cantor-product in {dt:.2f}s {why}".rstrip()


def criterion_4():
    ok, dt, why = _demo("cantor-quotient-truncation")
    return ok, f"quotient truncation in {dt:.2f}s {why}".rstrip()


def criterion_5():
    ok, dt, why = _demo("example9")
    return ok, f"example9 in {dt:.2f}s {why}".rstrip()


def criterion_6():
    ok, dt, why = _demo("example10")
    return ok, f"example10 in {dt:.2f}s {why}".rstrip()


def _random_polynomial(rng: np.random.Generator) -> str:
    # convex in x and y separately with a nonpositive cross term
    a, b = rng.uniform(1, 3), rng.uniform(0.5, 1.5)
    p, q, r = rng.uniform(0, 2, 3)
    s, t = rng.uniform(0, 1, 2)
    u = rng.uniform(0, 0.5)
    return (f"{a:.4f}*x + {b:.4f}*y + {p:.4f}*x^2 + {q:.4f}*y^2 - {r:.4f}*x*y"
            f" + {s:.4f}*x^3 + {t:.4f}*y^3 + {u:.4f}*x^4")


def criterion_7():
    k = cantor_corollary_constants()
    constants_ok = (k.ratio_bounds == (F(1, 3), F(1))
                    and set(k.coefficients) == {(1, -6, 9), (1, -2, 1)})
    rng = np.random.default_rng(2024)
    dom = DomainSpec.unit_square()
    forms = sss_forms(CIFS, CIFS, 1)
    bad = []
    for _ in range(50):
        src = _random_polynomial(rng)
        b = partial_bundle(parse(src))
        pre = corollary8_precheck(b, dom)
        direct = [certify_nonneg_quadform(l1, l2, b, dom) for l1, l2 in forms]
        if not (pre.certified and all(v.certified for v in direct)):
            bad.append(src)
    ok = constants_ok and not bad
    return ok, f"constants {'ok' if constants_ok else 'WRONG'}, fast path implied forms on {50 - len(bad)}/50"


def _fixture_gain_failures() -> list[str]:
    failures = []
    demos = [("x + y", PP), ("x - y", PN), ("x + 0.5*y", PP), (EX9, PP), (EX10, PP),
             ("-x - 0.5*y", NN), ("-x + 0.5*y", NP)]
    for src, sc in demos:
        b = partial_bundle(parse(src))
        if not (certify_moran(b, CANTOR).certified and certify_sss(b, CIFS, CIFS).certified):
            failures.append(f"{src} not certified")
            continue
        for k in range(1, 6):
            for p in list(extreme_pairs(CANTOR, k, sc)) + list(sss_extreme_pairs(CIFS, CIFS, k, sc)):
                if p.gain(b) < -1e-9:
                    failures.append(f"{src} {p.name} k={k}")
    return failures


def criterion_8():
    from tests import test_expr

    parts = {}
    try:
        test_expr.test_inclusion_isotonicity()
        parts["isotonicity"] = True
    except AssertionError:
        parts["isotonicity"] = False
    try:
        for src in test_expr.DEMO_FUNCTIONS:
            test_expr.test_derivatives_match_finite_differences(src)
        parts["derivatives"] = True
    except AssertionError:
        parts["derivatives"] = False

    nest = True
    for src, sc in (("x*y", None), ("x + y", PP), (EX9, PP), (EX10, PP)):
        nest &= stabilization_report(parse(src), sc, (CIFS, CIFS), 6).nested
    parts["nesting"] = nest

    stab = True
    for cls in (ALTERNATING, CANTOR):
        for src in ("x + y", "x + 0.5*y", EX9):
            b = partial_bundle(parse(src))
            v = certify_moran(b, cls)
            stab &= v.certified
            pairs = [(realize(cls, 8, s), realize(cls, 8, s)) for s in ("uniform", "extreme_left_packed")]
            pairs += [(realize(cls, 8, "random", seed=s), realize(cls, 8, "random", seed=s + 100))
                      for s in range(1, 21)]
            for r1, r2 in pairs:
                stab &= stabilization_report(b, v.sign_case, (r1, r2), 8).stabilized
    parts["stabilization"] = stab

    disp = True
    count = 0
    for cls in (CANTOR, ALTERNATING):
        for k in range(1, 5):
            for sc in (PP, NN, NP, PN):
                for p in extreme_pairs(cls, k, sc):
                    disp &= p.displacement() == (p.l1, p.l2)
                    count += 1
    K = HomogeneousIFS("0.3", ("0", "0.35", "0.7"))
    for K1, K2 in ((CIFS, CIFS), (K, K)):
        for k in range(1, 5):
            for sc in (PP, NN, NP, PN):
                for p in sss_extreme_pairs(K1, K2, k, sc):
                    disp &= p.displacement() == (p.l1, p.l2)
                    count += 1
    parts["displacements"] = disp and count > 0

    gains = _fixture_gain_failures()
    parts["fixture gains"] = not gains
    ok = all(parts.values())
    return ok, ", ".join(f"{k} {'ok' if v else 'FAIL'}" for k, v in parts.items()) + f" ({count} fixtures)"


def criterion_9():
    t = time.perf_counter()
    wrong = []
    single = True
    C8 = cylinders(CIFS, 8)
    for i in range(1, 21):
        for s in (F(i, 10), -F(i, 10)):
            v = certify_linear(CANTOR, s)
            expected = F(1, 3) <= abs(s) <= 1
            if v.certified != expected:
                wrong.append(str(s))
            if v.certified:
                f = parse(f"x + ({s.numerator}/{s.denominator})*y")
                img = level_image(f, v.sign_case, C8, C8)
                # sample spacing is at most the variation of f over one level-8 square
                tol = (1 + abs(float(s))) * 3.0 ** -8
                oracle = brute_force_image(f, CIFS, CIFS, 8, tol)
                single &= len(img) == 1 and len(oracle) == 1
    dt = time.perf_counter() - t
    ok = not wrong and single and dt < 60
    detail = f"{dt:.2f}s, certified set {'exact' if not wrong else 'wrong at ' + ','.join(wrong)}"
    return ok, detail + (", single components" if single else ", extra components")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9]


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    _report(capsys, n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for n, crit in enumerate(CRITERIA, 1):
        ok, detail = crit()
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
