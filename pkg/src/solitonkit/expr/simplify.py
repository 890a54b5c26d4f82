"""Conservative simplification.

Only local rewrites are applied: constant folding, additive and
multiplicative identities, ``x^0``/``x^1`` and double negation. Nothing is
expanded or factored, so repeated differentiation cannot blow up through
this pass. One bottom-up sweep reaches a fixed point.
"""

from __future__ import annotations

import math
from functools import lru_cache

from solitonkit.expr.errors import EvaluationError
from solitonkit.expr.evaluate import _FUNCTIONS
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
)


def _is(e: Expression, value: float) -> bool:
    return isinstance(e, Const) and e.value == value


def _fold(value: float) -> Expression | None:
    return Const(value) if math.isfinite(value) else None


@lru_cache(maxsize=1 << 16)
def simplify(e: Expression) -> Expression:
    if isinstance(e, Neg):
        a = simplify(e.arg)
        if isinstance(a, Const):
            return Const(-a.value)
        if isinstance(a, Neg):
            return a.arg
        return Neg(a)
    if isinstance(e, (Add, Sub, Mul, Div)):
        return _binary(type(e), simplify(e.left), simplify(e.right))
    if isinstance(e, Pow):
        base = simplify(e.base)
        if e.exponent == 0:
            return ONE
        if e.exponent == 1:
            return base
        if isinstance(base, Const) and not (base.value == 0.0 and e.exponent < 0):
            try:
                folded = _fold(base.value**e.exponent)
            except OverflowError:
                folded = None
            if folded is not None:
                return folded
        return Pow(base, e.exponent)
    if isinstance(e, Call):
        a = simplify(e.arg)
        if isinstance(a, Const):
            try:
                folded = _fold(_FUNCTIONS[e.function](a.value))
            except EvaluationError:
                folded = None
            if folded is not None:
                return folded
        return Call(e.function, a)
    if isinstance(e, Antiderivative):
        integrand = simplify(e.integrand)
        if _is(integrand, 0.0):
            return ZERO
        return Antiderivative(integrand, e.variable, e.base)
    return e


def _binary(kind, a: Expression, b: Expression) -> Expression:
    if isinstance(a, Const) and isinstance(b, Const):
        x, y = a.value, b.value
        folded = None
        if kind is Add:
            folded = _fold(x + y)
        elif kind is Sub:
            folded = _fold(x - y)
        elif kind is Mul:
            folded = _fold(x * y)
        elif y != 0.0:
            folded = _fold(x / y)
        if folded is not None:
            return folded
    if kind is Add:
        if _is(a, 0.0):
            return b
        if _is(b, 0.0):
            return a
    elif kind is Sub:
        if _is(b, 0.0):
            return a
    elif kind is Mul:
        if _is(a, 0.0) or _is(b, 0.0):
            return ZERO
        if _is(a, 1.0):
            return b
        if _is(b, 1.0):
            return a
    elif kind is Div:
        if _is(a, 0.0) and isinstance(b, Const) and b.value != 0.0:
            return ZERO
        if _is(b, 1.0):
            return a
    return kind(a, b)
