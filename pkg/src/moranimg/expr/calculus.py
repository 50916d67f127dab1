"""Symbolic differentiation with conservative simplification.

The smart constructors fold constants in exact rational arithmetic and
absorb 0/1, but never drop a subtree that could raise a domain error
(``0 * log(x)`` stays as it is), so simplification preserves domains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .nodes import ONE, ZERO, Binary, Const, Expr, Number, Pow, Unary, Var


def const(v: Number) -> Const:
    return Const(Fraction(v))


def is_total(e: Expr) -> bool:
    """True when ``e`` is defined at every point of the plane."""
    if isinstance(e, (Const, Var)):
        return True
    if isinstance(e, Unary):
        return e.op != "log" and is_total(e.arg)
    if isinstance(e, Pow):
        p = e.exponent
        return p.denominator == 1 and p >= 0 and is_total(e.base)
    if e.op == "/":
        return False
    return is_total(e.left) and is_total(e.right)


def _val(e: Expr) -> Fraction | None:
    return e.value if isinstance(e, Const) else None


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Unary) and a.op == "neg":
        return a.arg
    return Unary("neg", a)


def add(a: Expr, b: Expr) -> Expr:
    va, vb = _val(a), _val(b)
    if va is not None and vb is not None:
        return Const(va + vb)
    if va == 0:
        return b
    if vb == 0:
        return a
    return Binary("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    va, vb = _val(a), _val(b)
    if va is not None and vb is not None:
        return Const(va - vb)
    if vb == 0:
        return a
    if va == 0:
        return neg(b)
    return Binary("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    va, vb = _val(a), _val(b)
    if va is not None and vb is not None:
        return Const(va * vb)
    if va == 0 and is_total(b):
        return ZERO
    if vb == 0 and is_total(a):
        return ZERO
    if va == 1:
        return b
    if vb == 1:
        return a
    if va == -1:
        return neg(b)
    if vb == -1:
        return neg(a)
    return Binary("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    va, vb = _val(a), _val(b)
    if va is not None and vb is not None and vb != 0:
        return Const(va / vb)
    if vb == 1:
        return a
    if vb is not None and vb != 0:
        return mul(Const(1 / vb), a)
    return Binary("/", a, b)


def power(a: Expr, p: Number) -> Expr:
    p = Fraction(p)
    if p == 0:
        # x^0 is 1 wherever x is defined
        return ONE if is_total(a) else Pow(a, p)
    if p == 1:
        return a
    va = _val(a)
    if va is not None and p.denominator == 1 and (va != 0 or p > 0):
        return Const(va ** int(p))
    return Pow(a, p)


_UNARY_FOLD = {
    ("sin", 0): ZERO,
    ("cos", 0): ONE,
    ("exp", 0): ONE,
    ("log", 1): ZERO,
}


def func(op: str, a: Expr) -> Expr:
    if op == "neg":
        return neg(a)
    va = _val(a)
    if va is not None and (op, va) in _UNARY_FOLD:
        return _UNARY_FOLD[(op, va)]
    return Unary(op, a)


def simplify(e: Expr) -> Expr:
    """Rebuild ``e`` bottom-up through the smart constructors."""
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Unary):
        return func(e.op, simplify(e.arg))
    if isinstance(e, Pow):
        return power(simplify(e.base), e.exponent)
    a, b = simplify(e.left), simplify(e.right)
    return {"+": add, "-": sub, "*": mul, "/": div}[e.op](a, b)


def differentiate(e: Expr, v: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to ``v`` ('x' or 'y')."""
    if v not in ("x", "y"):
        raise ValueError(f"can only differentiate with respect to x or y, not {v!r}")
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == v else ZERO
    if isinstance(e, Unary):
        u = e.arg
        du = differentiate(u, v)
        if e.op == "neg":
            return neg(du)
        if e.op == "sin":
            return mul(func("cos", u), du)
        if e.op == "cos":
            return neg(mul(func("sin", u), du))
        if e.op == "exp":
            return mul(func("exp", u), du)
        return div(du, u)  # log
    if isinstance(e, Pow):
        du = differentiate(e.base, v)
        p = e.exponent
        return mul(mul(Const(p), power(e.base, p - 1)), du)
    a, b = e.left, e.right
    da, db = differentiate(a, v), differentiate(b, v)
    if e.op == "+":
        return add(da, db)
    if e.op == "-":
        return sub(da, db)
    if e.op == "*":
        return add(mul(da, b), mul(a, db))
    return div(sub(mul(da, b), mul(a, db)), power(b, 2))


@dataclass(frozen=True)
class PartialBundle:
    """``f`` with its first and second partials; ``fxy`` is d/dy of ``fx``."""

    f: Expr
    fx: Expr
    fy: Expr
    fxx: Expr
    fxy: Expr
    fyy: Expr

    def items(self):
        return {"f": self.f, "fx": self.fx, "fy": self.fy,
                "fxx": self.fxx, "fxy": self.fxy, "fyy": self.fyy}.items()

    @property
    def is_linear(self) -> bool:
        return all(isinstance(d, Const) and d.value == 0 for d in (self.fxx, self.fxy, self.fyy))


def partial_bundle(e: Expr) -> PartialBundle:
    # fold constant subtrees such as 1/3 first so exact zeros stay exact
    s = simplify(e)
    fx = differentiate(s, "x")
    fy = differentiate(s, "y")
    return PartialBundle(
        f=e,
        fx=fx,
        fy=fy,
        fxx=differentiate(fx, "x"),
        fxy=differentiate(fx, "y"),
        fyy=differentiate(fy, "y"),
    )
