import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moranimg.expr import (
    Binary,
    Const,
    DomainError,
    ExprSyntaxError,
    Pow,
    Unary,
    Var,
    differentiate,
    eval_array,
    eval_interval,
    eval_real,
    parse,
    partial_bundle,
    to_source,
)
from moranimg.expr.calculus import simplify
from moranimg.interval import Interval

EX9 = "x^2+y^2+6*x+3*y+0.5*x*y"
EX10 = "sin(-0.5*x*y)+12*x+6*y"
DEMO_FUNCTIONS = ["x+y", "x-y", "x*y", "x/y", "x+0.5*y", EX9, EX10]


def const(v):
    return Const(Fraction(v))


# -- parsing and printing -------------------------------------------------------


def test_parse_builds_expected_tree():
    assert parse("x + 2*y") == Binary("+", Var("x"), Binary("*", const(2), Var("y")))


def test_parse_example_functions():
    e9 = parse(EX9)
    assert eval_real(e9, 1, 1) == 11.5
    e10 = parse(EX10)
    assert isinstance(e10, Binary) and isinstance(e10.left.left, Unary)


def test_precedence_and_associativity():
    assert parse("-x^2") == Unary("neg", Pow(Var("x"), Fraction(2)))
    assert parse("2^3^2") == Pow(const(2), Fraction(9))
    assert eval_real(parse("1-2-3"), 0, 0) == -4
    assert eval_real(parse("8/4/2"), 0, 0) == 1


def test_decimal_literal_is_exact():
    assert parse("0.1") == Const(Fraction(1, 10))


@pytest.mark.parametrize("src, msg", [("x^y", "variable exponent"), ("z+1", "unknown identifier"),
                                      ("x+", "expected"), ("(x", "expected"), ("x $ y", "unexpected")])
def test_syntax_errors(src, msg):
    with pytest.raises(ExprSyntaxError, match=msg) as info:
        parse(src)
    assert info.value.position >= 0


@pytest.mark.parametrize("src", DEMO_FUNCTIONS + ["-x^2", "2^(-1)", "x^(1/3)", "(x+y)*(x-y)", "x-(y-1)",
                                                  "x/(y/2)", "-(x+y)", "exp(log(x+1))", "-2*x", "x^-2"])
def test_print_parse_round_trip(src):
    e = parse(src)
    assert parse(to_source(e)) == e


# -- evaluation ------------------------------------------------------------------


def test_eval_real_examples():
    assert eval_real(parse("x+2*y"), 0.5, 0.25) == 1.0
    with pytest.raises(DomainError):
        eval_real(parse("x/y"), 1, 0)
    with pytest.raises(DomainError):
        eval_real(parse("log(x)"), 0, 0)


def test_eval_interval_examples():
    r = eval_interval(parse("x*y"), Interval(0, 1), Interval(0, 1))
    assert r.lo <= 0 and r.hi >= 1
    r = eval_interval(parse("x-y"), Interval(0, 1), Interval(0, 1))
    assert r.lo <= -1 and r.hi >= 1
    with pytest.raises(DomainError):
        eval_interval(parse("x/y"), Interval(0, 1), Interval(-1, 1))


def test_eval_array_matches_eval_real():
    e = parse(EX10)
    xs = np.linspace(0, 1, 7)
    np.testing.assert_allclose(eval_array(e, xs, 0.3), [eval_real(e, x, 0.3) for x in xs], rtol=1e-15)


# -- differentiation ---------------------------------------------------------------


def test_derivative_examples():
    assert differentiate(parse("x^2+y^2"), "x") == Binary("*", const(2), Var("x"))
    assert differentiate(parse("x + 3*y"), "x") == const(1)
    d = differentiate(parse("sin(-0.5*x*y)"), "y")
    for x, y in [(0.3, 0.7), (1.0, 1.0)]:
        assert eval_real(d, x, y) == pytest.approx(-0.5 * x * math.cos(-0.5 * x * y))


def test_bundle_examples():
    b = partial_bundle(parse("x+0.5*y"))
    assert (b.fx, b.fy) == (const(1), const(Fraction(1, 2)))
    assert b.is_linear
    b = partial_bundle(parse(EX9))
    assert (b.fxx, b.fxy, b.fyy) == (const(2), const(Fraction(1, 2)), const(2))
    b = partial_bundle(parse("x*y"))
    assert (b.fx, b.fy, b.fxy) == (Var("y"), Var("x"), const(1))


def test_simplification_keeps_domain():
    e = simplify(parse("0*log(x)"))
    with pytest.raises(DomainError):
        eval_real(e, -1, 0)
    assert simplify(parse("0*sin(x) + 1*y")) == Var("y")


def _fd(e, v, x, y, h=1e-5):
    if v == "x":
        return (eval_real(e, x + h, y) - eval_real(e, x - h, y)) / (2 * h)
    return (eval_real(e, x, y + h) - eval_real(e, x, y - h)) / (2 * h)


@pytest.mark.parametrize("src", DEMO_FUNCTIONS)
def test_derivatives_match_finite_differences(src):
    e = parse(src)
    b = partial_bundle(e)
    rng = np.random.default_rng(11)
    pts = rng.uniform(0.05, 0.95, (100, 2))
    for d, base, v in ((b.fx, b.f, "x"), (b.fy, b.f, "y"), (b.fxx, b.fx, "x"), (b.fxy, b.fx, "y"),
                       (b.fyy, b.fy, "y")):
        for x, y in pts:
            sym = eval_real(d, x, y)
            assert abs(sym - _fd(base, v, x, y)) / (1 + abs(sym)) < 1e-6


@pytest.mark.parametrize("src", DEMO_FUNCTIONS + ["exp(x*y^2)/(1+x)", "log(1+x*y)*cos(x-y)"])
def test_mixed_partials_agree(src):
    e = parse(src)
    dxy = differentiate(differentiate(e, "x"), "y")
    dyx = differentiate(differentiate(e, "y"), "x")
    rng = np.random.default_rng(5)
    for x, y in rng.uniform(0.1, 0.9, (50, 2)):
        assert eval_real(dxy, x, y) == pytest.approx(eval_real(dyx, x, y), rel=1e-9, abs=1e-9)


# -- enclosure properties -------------------------------------------------------------


def _exprs():
    leaves = st.one_of(
        st.sampled_from([Var("x"), Var("y")]),
        st.sampled_from(["-2", "-0.5", "0", "0.25", "1", "3"]).map(lambda s: const(Fraction(s))),
    )

    def extend(children):
        one = children
        two = st.tuples(children, children)
        return st.one_of(
            two.map(lambda p: Binary("+", *p)),
            two.map(lambda p: Binary("-", *p)),
            two.map(lambda p: Binary("*", *p)),
            # divisor and log argument kept positive by construction
            two.map(lambda p: Binary("/", p[0], Binary("+", const(1), Pow(p[1], Fraction(2))))),
            one.map(lambda u: Unary("log", Binary("+", const(1), Pow(u, Fraction(2))))),
            one.map(lambda u: Unary("neg", u)),
            one.map(lambda u: Unary("sin", u)),
            one.map(lambda u: Unary("cos", u)),
            one.map(lambda u: Unary("exp", Binary("*", const(Fraction(1, 4)), u))),
            st.tuples(one, st.sampled_from([2, 3, -1])).map(
                lambda p: Pow(Binary("+", const(2), Pow(p[0], Fraction(2))), Fraction(p[1]))),
            one.map(lambda u: Pow(Binary("+", const(1), Pow(u, Fraction(2))), Fraction(1, 2))),
        )

    return st.recursive(leaves, extend, max_leaves=8)


coord = st.floats(-2, 2, allow_nan=False)
box = st.tuples(coord, coord).map(sorted)


@settings(max_examples=1000)
@given(_exprs(), box, box, st.floats(0, 1), st.floats(0, 1))
def test_inclusion_isotonicity(e, xb, yb, tx, ty):
    x = xb[0] + tx * (xb[1] - xb[0])
    y = yb[0] + ty * (yb[1] - yb[0])
    try:
        v = eval_real(e, x, y)
    except (DomainError, OverflowError):
        return
    try:
        r = eval_interval(e, Interval(*xb), Interval(*yb))
    except DomainError:
        # an enclosure too wide for floats is refused, never returned unsound
        return
    assert r.lo <= v <= r.hi


@settings(max_examples=300)
@given(_exprs(), box, box, st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_monotone_refinement(e, xb, yb, a, b, c, d):
    sx = sorted((xb[0] + a * (xb[1] - xb[0]), xb[0] + b * (xb[1] - xb[0])))
    sy = sorted((yb[0] + c * (yb[1] - yb[0]), yb[0] + d * (yb[1] - yb[0])))
    try:
        outer = eval_interval(e, Interval(*xb), Interval(*yb))
    except DomainError:
        return
    inner = eval_interval(e, Interval(*sx), Interval(*sy))
    slack = 1e-12 * (1 + abs(outer.lo) + abs(outer.hi))
    assert outer.lo - slack <= inner.lo and inner.hi <= outer.hi + slack
