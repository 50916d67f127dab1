"""Expression tree for functions of ``x`` and ``y``.

Nodes are frozen dataclasses, so equal trees compare and hash equal.
Constants hold exact ``Fraction`` values: a literal ``0.1`` means one tenth,
not the nearest double.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

UNARY_OPS = ("neg", "sin", "cos", "exp", "log")
FUNCTIONS = ("sin", "cos", "exp", "log")
BINARY_OPS = ("+", "-", "*", "/")
VARIABLES = ("x", "y")

Number = Union[int, float, Fraction]


class Expr:
    """Base class; see :class:`Const`, :class:`Var`, :class:`Unary`,
    :class:`Binary` and :class:`Pow`."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        v = self.value
        if not isinstance(v, Fraction):
            object.__setattr__(self, "value", Fraction(v))


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def __post_init__(self):
        if self.name not in VARIABLES:
            raise ValueError(f"unknown variable {self.name!r}")


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    arg: Expr

    def __post_init__(self):
        if self.op not in UNARY_OPS:
            raise ValueError(f"unknown unary operator {self.op!r}")


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown binary operator {self.op!r}")


@dataclass(frozen=True)
class Pow(Expr):
    """``base ** exponent`` with a constant rational exponent."""

    base: Expr
    exponent: Fraction

    def __post_init__(self):
        e = self.exponent
        if isinstance(e, Expr):
            raise TypeError("pow exponent must be a constant, not an expression")
        if not isinstance(e, Fraction):
            object.__setattr__(self, "exponent", Fraction(e))


X = Var("x")
Y = Var("y")
ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def is_const(e: Expr, value: Number | None = None) -> bool:
    if not isinstance(e, Const):
        return False
    return value is None or e.value == value


def variables(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Unary):
        return variables(e.arg)
    if isinstance(e, Pow):
        return variables(e.base)
    return variables(e.left) | variables(e.right)


def node_count(e: Expr) -> int:
    if isinstance(e, (Const, Var)):
        return 1
    if isinstance(e, Unary):
        return 1 + node_count(e.arg)
    if isinstance(e, Pow):
        return 1 + node_count(e.base)
    return 1 + node_count(e.left) + node_count(e.right)


# -- printing ---------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_NEG_PREC = 3
_POW_PREC = 4
_ATOM_PREC = 5


def _prec(e: Expr) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary) and e.op == "neg":
        return _NEG_PREC
    if isinstance(e, Pow):
        return _POW_PREC
    if isinstance(e, Const) and e.value < 0:
        return _NEG_PREC
    return _ATOM_PREC


def format_number(v: Fraction) -> str:
    """Shortest exact decimal for ``v`` if it has one, else ``(p/q)``."""
    if v.denominator == 1:
        return str(v.numerator)
    d = v.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"({v.numerator}/{v.denominator})"
    digits = max(twos, fives)
    scaled = v * 10**digits
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def _wrap(e: Expr, needs: bool) -> str:
    s = to_source(e)
    return f"({s})" if needs else s


def to_source(e: Expr) -> str:
    """Render ``e`` in the surface syntax accepted by ``parse``."""
    if isinstance(e, Const):
        return format_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            return "-" + _wrap(e.arg, _prec(e.arg) <= _NEG_PREC)
        return f"{e.op}({to_source(e.arg)})"
    if isinstance(e, Pow):
        base = _wrap(e.base, _prec(e.base) <= _POW_PREC)
        exp = format_number(e.exponent)
        if e.exponent < 0 and not exp.startswith("("):
            exp = f"({exp})"
        return f"{base}^{exp}"
    p = _PREC[e.op]
    left = _wrap(e.left, _prec(e.left) < p)
    right = _wrap(e.right, _prec(e.right) <= p)
    return f"{left} {e.op} {right}"
