"""Expressions in ``x`` and ``y``: parsing, evaluation, differentiation."""

from .calculus import PartialBundle, differentiate, is_total, partial_bundle, simplify
from .evaluate import DomainError, enclose, eval_array, eval_interval, eval_real
from .nodes import Binary, Const, Expr, Pow, Unary, Var, to_source, variables
from .parser import ExprSyntaxError, parse

__all__ = [
    "Binary", "Const", "Expr", "Pow", "Unary", "Var",
    "DomainError", "ExprSyntaxError", "PartialBundle",
    "differentiate", "enclose", "eval_array", "eval_interval", "eval_real",
    "is_total", "parse", "partial_bundle", "simplify", "to_source", "variables",
]
