import math
from fractions import Fraction

import numpy as np
import pytest

from moranimg.certifier import certify_moran, certify_sss
from moranimg.expr import parse, partial_bundle
from moranimg.fractal import HomogeneousIFS, MoranClass, cylinders, realize, xi
from moranimg.image import (
    box_image,
    extreme_pairs,
    hull_image,
    level_image,
    sss_extreme_pairs,
    stabilization_report,
)
from moranimg.interval import Interval, normalize, set_equal
from moranimg.signs import ALL_CASES, NN, NP, PN, PP

F = Fraction
CANTOR = MoranClass.cantor()
CIFS = HomogeneousIFS.cantor()
EX9 = "x^2+y^2+6*x+3*y+0.5*x*y"
EX10 = "sin(-0.5*x*y)+12*x+6*y"
UNIT = (Interval(0, 1), Interval(0, 1))
CLASSES = [CANTOR, MoranClass.constant("0.2", 3, "0.5"), MoranClass.constant("0.3", 3, "0.5"),
           MoranClass.from_levels([("0.25", 3)], [("0.2", 4), ("0.3", 2)], "0.25")]


def bundle(src):
    return partial_bundle(parse(src))


def test_box_image_examples():
    assert box_image(parse("x+y"), PP, (Interval(0, 1 / 3), Interval(2 / 3, 1))) == Interval(2 / 3, 4 / 3)
    assert box_image(parse("x-y"), PN, UNIT) == Interval(-1, 1)
    assert box_image(parse(EX9), PP, UNIT) == Interval(0, 11.5)


def test_hull_examples():
    assert hull_image(parse(EX9), PP) == Interval(0, 11.5)
    assert hull_image(parse("x+y"), PP) == Interval(0, 2)
    assert hull_image(parse("x-y"), PN) == Interval(-1, 1)


def test_level_image_examples():
    C1 = cylinders(CIFS, 1)
    assert level_image(parse("x+y"), PP, C1, C1).to_list() == [[0.0, 2.0]]
    img = level_image(parse("x*y"), None, C1, C1)
    assert set_equal(img, normalize([(0, 1 / 3), (4 / 9, 1)]), 1e-15)
    C2 = cylinders(CIFS, 2)
    img = level_image(parse("x+0.5*y"), PP, C2, C2)
    assert set_equal(img, normalize([(0, 1.5)]), 1e-12)


def test_stabilization_examples():
    r = stabilization_report(parse("x+y"), PP, (CIFS, CIFS), 8)
    assert r.stabilized and all(e.image.to_list() == [[0.0, pytest.approx(2.0)]] for e in r.levels)
    r = stabilization_report(parse("x*y"), None, (CIFS, CIFS), 4)
    assert all(e.components > 1 for e in r.levels[1:]) and not r.stabilized and not r.rigorous
    r = stabilization_report(parse("x+0.5*y"), PP, (CIFS, CIFS), 8)
    assert all(e.components == 1 for e in r.levels) and r.final.hull.hi == pytest.approx(1.5)


@pytest.mark.parametrize("src", ["x*y", "x+y", "x^2*y + y", "exp(x)*y + x"])
def test_images_nest(src):
    sc = None if src == "x*y" else PP
    r = stabilization_report(parse(src), sc, (CIFS, CIFS), 6)
    assert r.nested
    r = stabilization_report(parse(src), sc, (realize(CLASSES[2], 4, "random", seed=2),
                                                 realize(CLASSES[2], 4, "random", seed=3)), 4)
    assert r.nested


def test_level_image_exact_against_dense_sampling():
    # monotone f: the image of each box is reached, so a dense sample stays inside
    C2 = cylinders(CIFS, 2)
    img = level_image(parse(EX10), PP, C2, C2)
    g = np.concatenate([np.linspace(iv.lo, iv.hi, 30) for iv in C2])
    vals = np.sin(-0.5 * g[:, None] * g[None, :]) + 12 * g[:, None] + 6 * g[None, :]
    assert all(img.contains(v, 1e-12) for v in vals.ravel()[::7])


@pytest.mark.parametrize("src", ["x+y", "x+0.5*y", EX9])
def test_certified_moran_functions_stabilize_on_every_realization(src):
    b = bundle(src)
    cls = MoranClass.constant("0.3", 3, "0.5")
    v = certify_moran(b, cls)
    assert v.certified
    pairs = [(realize(cls, 5, "uniform"), realize(cls, 5, "uniform")),
             (realize(cls, 5, "extreme_left_packed"), realize(cls, 5, "extreme_left_packed"))]
    pairs += [(realize(cls, 5, "random", seed=s), realize(cls, 5, "random", seed=s + 100)) for s in range(1, 21)]
    for r1, r2 in pairs:
        rep = stabilization_report(b, v.sign_case, (r1, r2), 5)
        assert rep.stabilized, (r1.strategy, [e.components for e in rep.levels])


# -- fixtures -----------------------------------------------------------------------


def _parallel(u, v):
    return u[0] * v[1] - u[1] * v[0] == 0


@pytest.mark.parametrize("cls", CLASSES)
@pytest.mark.parametrize("sc", ALL_CASES)
def test_moran_fixture_displacements_exact(cls, sc):
    for k in range(1, 5):
        for p in extreme_pairs(cls, k, sc, x0_samples=9):
            assert p.displacement() == (p.l1, p.l2)
            for pt in (p.P_hi, p.P_lo):
                assert 0 <= pt[0] <= 1 and 0 <= pt[1] <= 1


@pytest.mark.parametrize("cls", CLASSES)
@pytest.mark.parametrize("sc", ALL_CASES)
def test_moran_displacements_are_parallel_to_certified_forms(cls, sc):
    # each fixture displacement is parallel to one of the certified directions
    for k in range(1, 5):
        c, _ = cls.level(k)
        m = sc.delta * (xi(cls, k) - 1)
        forms = [(c, m), (m, F(1))]
        for p in extreme_pairs(cls, k, sc):
            assert any(_parallel((p.l1, p.l2), f) for f in forms), (p.name, p.l1, p.l2)


def test_moran_fixture_cantor_level_one():
    p = extreme_pairs(CANTOR, 1, PP, x0_samples=2)
    assert p[0].P_hi == (F(1, 3), F(1, 3)) and p[0].P_lo == (F(0), F(2, 3))
    assert (p[0].l1, p[0].l2) == (F(1, 3), F(-1, 3))
    assert p[-1].P_hi == (F(1, 3), F(1)) and p[-1].P_lo == (F(2, 3), F(0))
    assert (p[-1].l1, p[-1].l2) == (F(-1, 3), F(1))


IFS_PAIRS = [(CIFS, CIFS), (HomogeneousIFS("0.3", ("0", "0.35", "0.7")), HomogeneousIFS("0.3", ("0", "0.2", "0.7"))),
             (HomogeneousIFS("1/4", ("0", "1/8", "3/4")), CIFS.__class__("1/4", ("0", "3/4")))]


@pytest.mark.parametrize("K1, K2", IFS_PAIRS)
@pytest.mark.parametrize("sc", ALL_CASES)
def test_sss_fixture_displacements_exact(K1, K2, sc):
    for k in range(1, 5):
        pairs = sss_extreme_pairs(K1, K2, k, sc)
        assert pairs
        for p in pairs:
            assert p.displacement() == (p.l1, p.l2)
            for pt in (p.P_hi, p.P_lo):
                assert 0 <= pt[0] <= 1 and 0 <= pt[1] <= 1


def test_sss_fixture_cantor_level_one():
    p = sss_extreme_pairs(CIFS, CIFS, 1, PP)
    assert p[0].P_hi == (F(1, 3), F(1, 3)) and p[0].P_lo == (F(0), F(2, 3))
    assert (p[0].l1, p[0].l2) == (F(1, 3), F(-1, 3))
    assert p[0].gain(parse("x+0.5*y")) == pytest.approx(1 / 6)
    nn = sss_extreme_pairs(CIFS, CIFS, 2, NN)
    assert all(q.l1 == -F(1, 9) for q in nn if q.name == "P21/P22")


def test_sss_word_pairs_capped():
    K = HomogeneousIFS("0.3", ("0", "0.35", "0.7"))
    pairs = sss_extreme_pairs(K, K, 5, PP)
    assert len(pairs) <= 200 * 2 * 2 * 2


CERTIFIED_DEMOS = [("x+y", PP), ("x-y", PN), ("x+0.5*y", PP), (EX9, PP), (EX10, PP), ("-x-0.5*y", NN),
                   ("-x+0.5*y", NP)]


@pytest.mark.parametrize("src, sc", CERTIFIED_DEMOS)
def test_fixture_gains_nonnegative_for_certified_functions(src, sc):
    b = bundle(src)
    v = certify_sss(b, CIFS, CIFS)
    assert v.certified and v.sign_case == sc
    for k in range(1, 6):
        for p in sss_extreme_pairs(CIFS, CIFS, k, sc):
            assert p.gain(b) >= -1e-9, p
    w = certify_moran(b, CANTOR)
    assert w.certified
    for k in range(1, 6):
        for p in extreme_pairs(CANTOR, k, sc):
            assert p.gain(b) >= -1e-9, p


def test_example10_image_at_level_eight():
    r = stabilization_report(bundle(EX10), PP, (CIFS, CIFS), 8)
    assert set_equal(r.final, normalize([(0, math.sin(-0.5) + 18)]), 1e-6)
