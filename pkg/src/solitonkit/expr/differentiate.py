"""Exact symbolic partial derivatives."""

from __future__ import annotations

from functools import lru_cache

from solitonkit.expr.nodes import (
    ONE,
    ZERO,
    Add,
    Antiderivative,
    Call,
    Const,
    Div,
    Expression,
    Mul,
    Neg,
    Pow,
    Sub,
    Symbol,
    cos,
    cosh,
    exp,
    sin,
    sinh,
    sqrt,
)
from solitonkit.expr.simplify import simplify


def differentiate(e: Expression, coordinate: str) -> Expression:
    """Partial derivative of ``e`` with respect to ``coordinate``, simplified.

    Symbols other than ``coordinate`` (other coordinates and parameters)
    are treated as independent of it.
    """
    return simplify(_d(simplify(e), coordinate))


def derivative(e: Expression, *coordinates: str) -> Expression:
    """Iterated partial derivative, e.g. ``derivative(e, "u", "u")``."""
    for c in coordinates:
        e = differentiate(e, c)
    return e


@lru_cache(maxsize=1 << 16)
def _d(e: Expression, x: str) -> Expression:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Symbol):
        return ONE if e.name == x else ZERO
    if isinstance(e, Neg):
        return Neg(_d(e.arg, x))
    if isinstance(e, Add):
        return Add(_d(e.left, x), _d(e.right, x))
    if isinstance(e, Sub):
        return Sub(_d(e.left, x), _d(e.right, x))
    if isinstance(e, Mul):
        a, b = e.left, e.right
        return Add(Mul(_d(a, x), b), Mul(a, _d(b, x)))
    if isinstance(e, Div):
        a, b = e.left, e.right
        return Div(Sub(Mul(_d(a, x), b), Mul(a, _d(b, x))), Pow(b, 2))
    if isinstance(e, Pow):
        n = e.exponent
        if n == 0:
            return ZERO
        return Mul(Mul(Const(n), Pow(e.base, n - 1)), _d(e.base, x))
    if isinstance(e, Call):
        return Mul(_outer(e), _d(e.arg, x))
    if isinstance(e, Antiderivative):
        if e.variable == x:
            return e.integrand
        return Antiderivative(_d(e.integrand, x), e.variable, e.base)
    raise TypeError(f"not an expression node: {e!r}")


def _outer(e: Call) -> Expression:
    a = e.arg
    fn = e.function
    if fn == "exp":
        return exp(a)
    if fn == "ln":
        return Div(ONE, a)
    if fn == "sin":
        return cos(a)
    if fn == "cos":
        return Neg(sin(a))
    if fn == "sinh":
        return cosh(a)
    if fn == "cosh":
        return sinh(a)
    if fn == "sqrt":
        return Div(ONE, Mul(Const(2), sqrt(a)))
    if fn == "atan":
        return Div(ONE, Add(ONE, Pow(a, 2)))
    raise ValueError(f"unknown function {fn!r}")
