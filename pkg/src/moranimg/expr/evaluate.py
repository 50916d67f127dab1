"""Point, array and interval evaluation of expression trees."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .. import kernels
from ..interval import Interval
from .nodes import Binary, Const, Expr, Pow, Unary, Var


class DomainError(ArithmeticError):
    """Evaluation left the natural domain (log of a non-positive number,
    division by zero, or a power outside its domain)."""


def _scalar_pow(base: float, p: Fraction) -> float:
    if p.denominator == 1:
        n = int(p)
        if base == 0 and n < 0:
            raise DomainError("zero raised to a negative power")
        return base**n
    if base < 0 or (base == 0 and p < 0):
        raise DomainError(f"{base!r} raised to non-integer power {p}")
    return base ** float(p)


def eval_real(e: Expr, x: float, y: float) -> float:
    """Evaluate at one point in double precision."""
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Var):
        return float(x) if e.name == "x" else float(y)
    if isinstance(e, Unary):
        a = eval_real(e.arg, x, y)
        if e.op == "neg":
            return -a
        if e.op == "log":
            if a <= 0:
                raise DomainError(f"log of non-positive value {a!r}")
            return math.log(a)
        try:
            return getattr(math, e.op)(a)
        except OverflowError as exc:
            raise DomainError(f"{e.op} overflow at {a!r}") from exc
    if isinstance(e, Pow):
        return _scalar_pow(eval_real(e.base, x, y), e.exponent)
    a = eval_real(e.left, x, y)
    b = eval_real(e.right, x, y)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if b == 0:
        raise DomainError("division by zero")
    return a / b


def eval_array(e: Expr, x, y) -> np.ndarray:
    """Vectorized :func:`eval_real` with numpy broadcasting."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast(x, y).shape
    with np.errstate(all="ignore"):
        out = _eval_array(e, x, y)
    return np.broadcast_to(out, shape).astype(float, copy=True)


def _eval_array(e: Expr, x, y):
    if isinstance(e, Const):
        return np.float64(float(e.value))
    if isinstance(e, Var):
        return x if e.name == "x" else y
    if isinstance(e, Unary):
        a = _eval_array(e.arg, x, y)
        if e.op == "neg":
            return -a
        if e.op == "log":
            if np.any(a <= 0):
                raise DomainError("log of non-positive value")
            return np.log(a)
        return getattr(np, e.op)(a)
    if isinstance(e, Pow):
        a = _eval_array(e.base, x, y)
        p = e.exponent
        if p.denominator == 1:
            if p < 0 and np.any(a == 0):
                raise DomainError("zero raised to a negative power")
            return np.power(a, float(p))
        if np.any(a < 0) or (p < 0 and np.any(a == 0)):
            raise DomainError("power outside its domain")
        return np.power(a, float(p))
    a = _eval_array(e.left, x, y)
    b = _eval_array(e.right, x, y)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if np.any(b == 0):
        raise DomainError("division by zero")
    return a / b


def const_bounds(v: Fraction) -> tuple[float, float]:
    """Tightest double interval containing the rational ``v``."""
    f = float(v)
    exact = Fraction(f)
    if exact == v:
        return f, f
    if exact < v:
        return f, math.nextafter(f, math.inf)
    return math.nextafter(f, -math.inf), f


def enclose(e: Expr, xlo, xhi, ylo, yhi) -> tuple[np.ndarray, np.ndarray]:
    """Rigorous enclosures of ``e`` over a batch of boxes.

    Arguments are equal-length float arrays.  Lanes where the box reaches
    outside the domain of some subexpression come back as NaN.
    """
    xlo = np.ascontiguousarray(xlo, dtype=float)
    n = xlo.size
    boxes = (xlo, np.ascontiguousarray(xhi, dtype=float),
             np.ascontiguousarray(ylo, dtype=float), np.ascontiguousarray(yhi, dtype=float))
    return _enclose(e, boxes, n)


def _full(v: float, n: int) -> np.ndarray:
    return np.full(n, v, dtype=float)


def _enclose(e: Expr, boxes, n):
    if isinstance(e, Const):
        lo, hi = const_bounds(e.value)
        return _full(lo, n), _full(hi, n)
    if isinstance(e, Var):
        return (boxes[0], boxes[1]) if e.name == "x" else (boxes[2], boxes[3])
    if isinstance(e, Unary):
        lo, hi = _enclose(e.arg, boxes, n)
        if e.op == "neg":
            return -hi, -lo
        return getattr(kernels, e.op)(lo, hi)
    if isinstance(e, Pow):
        lo, hi = _enclose(e.base, boxes, n)
        p = e.exponent
        if p.denominator == 1:
            return kernels.pow_int(lo, hi, int(p))
        plo, phi = const_bounds(p)
        a_lo, a_hi = kernels.pow_real(lo, hi, plo)
        if plo == phi:
            return a_lo, a_hi
        # exponent not representable: hull over the two bracketing doubles
        b_lo, b_hi = kernels.pow_real(lo, hi, phi)
        return np.minimum(a_lo, b_lo), np.maximum(a_hi, b_hi)
    alo, ahi = _enclose(e.left, boxes, n)
    blo, bhi = _enclose(e.right, boxes, n)
    if e.op == "+":
        return kernels.add(alo, ahi, blo, bhi)
    if e.op == "-":
        return kernels.sub(alo, ahi, blo, bhi)
    if e.op == "*":
        return kernels.mul(alo, ahi, blo, bhi)
    return kernels.div(alo, ahi, blo, bhi)


def eval_interval(e: Expr, xs: Interval, ys: Interval) -> Interval:
    """Enclosure of ``e`` over the box ``xs`` x ``ys``.

    Raises DomainError if the box may leave the domain of ``e`` (for
    instance a divisor enclosure that contains zero).
    """
    lo, hi = enclose(e, np.array([xs.lo]), np.array([xs.hi]), np.array([ys.lo]), np.array([ys.hi]))
    if np.isnan(lo[0]) or np.isnan(hi[0]):
        raise DomainError(f"{e} may be undefined on [{xs.lo}, {xs.hi}] x [{ys.lo}, {ys.hi}]")
    if not (np.isfinite(lo[0]) and np.isfinite(hi[0])):
        raise DomainError("enclosure overflowed")
    return Interval(lo[0], hi[0])
