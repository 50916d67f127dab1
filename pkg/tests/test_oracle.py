import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from moranimg.expr import parse
from moranimg.expr.evaluate import DomainError
from moranimg.fractal import HomogeneousIFS, MoranClass, cylinders, realize
from moranimg.image import level_image
from moranimg.interval import normalize, points_inside, set_equal
from moranimg.oracle import (
    OracleCapError,
    brute_force_image,
    compare_to_level_image,
    max_gap,
    sample_points,
)
from moranimg.signs import PP

CIFS = HomogeneousIFS.cantor()


def test_sample_points_cantor():
    np.testing.assert_allclose(sample_points(CIFS, 1), [0, 1 / 3, 2 / 3, 1])
    assert sample_points(CIFS, 5).size == 2 ** 6


def test_sample_points_moran_realization():
    r = realize(MoranClass.constant("0.3", 3, "0.5"), 3, "uniform")
    pts = sample_points(r, 2)
    assert pts.size <= 2 * 9 and pts[0] == 0 and pts[-1] == pytest.approx(1)
    with pytest.raises(ValueError):
        sample_points(r, 4)


def test_cap():
    with pytest.raises(OracleCapError):
        sample_points(CIFS, 24)
    with pytest.raises(OracleCapError):
        brute_force_image(parse("x+y"), CIFS, CIFS, 12, 0.0)


def test_brute_force_sum_level_one():
    img = brute_force_image(parse("x+y"), CIFS, CIFS, 1, 1e-12)
    vals = sorted({a + b for a in (0, 1 / 3, 2 / 3, 1) for b in (0, 1 / 3, 2 / 3, 1)})
    assert set_equal(img, normalize((np.array(vals), np.array(vals)), 1e-12), 1e-12)


def test_brute_force_domain_error():
    with pytest.raises(DomainError):
        brute_force_image(parse("x/y"), CIFS, CIFS, 2, 0.0)


@settings(max_examples=10)
@given(st.integers(1, 6))
def test_refinement_adds_points(depth):
    # deeper samples contain shallower ones, so every old value survives
    f = parse("x^2 + y")
    shallow = brute_force_image(f, CIFS, CIFS, depth, 0.0)
    deep = brute_force_image(f, CIFS, CIFS, depth + 1, 0.0)
    assert points_inside(deep, shallow.lows, 1e-12).all()


def test_max_gap():
    s = normalize([(0, 0.2), (0.5, 1)])
    assert max_gap(s, 0, 1) == pytest.approx(0.3)
    assert max_gap(s, 0, 1.4) == pytest.approx(0.4)
    assert max_gap(normalize([(0, 1)]), 0, 1) == 0


def test_compare_to_level_image_and_negative_control():
    f = parse("x + 0.5*y")
    C = cylinders(CIFS, 4)
    exact = level_image(f, PP, C, C)
    oracle = brute_force_image(f, CIFS, CIFS, 4, 1e-12)
    cmp = compare_to_level_image(oracle, exact, 1e-12)
    assert cmp.passed and cmp.distance < 0.02
    # the same values shifted outside the exact image must be rejected
    shifted = normalize((oracle.lows + 2.0, oracle.highs + 2.0))
    assert not compare_to_level_image(shifted, exact, 1e-12).passed


@pytest.mark.parametrize("s", [0.1, 0.2, 0.3])
def test_linear_below_ratio_bound_shows_gaps(s):
    # the single-component check at depth 8 is not vacuous
    img = brute_force_image(parse(f"x + {s}*y"), CIFS, CIFS, 8, (1 + s) * 3.0 ** -8)
    assert len(img) > 1
