"""Numeric evaluation.

Expressions are compiled once into nested closures (cached per node), which
keeps repeated evaluation at many points and inside quadrature loops cheap.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from solitonkit.expr.chart import Chart
from solitonkit.expr.errors import DomainError, UnboundSymbolError
from solitonkit.expr.nodes import (
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
)
from solitonkit.expr.quadrature import DEFAULT_MAX_DEPTH, DEFAULT_TOL, adaptive_simpson

Env = Mapping[str, float]
Compiled = Callable[[Env], float]


def _ln(x: float) -> float:
    if x <= 0.0:
        raise DomainError(f"ln of non-positive value {x!r}")
    return math.log(x)


def _sqrt(x: float) -> float:
    if x <= 0.0:
        raise DomainError(f"sqrt of non-positive value {x!r}")
    return math.sqrt(x)


def _guard(fn: Callable[[float], float], name: str) -> Callable[[float], float]:
    def wrapped(x: float) -> float:
        try:
            return fn(x)
        except (OverflowError, ValueError) as exc:
            raise DomainError(f"{name}({x!r}): {exc}") from None

    return wrapped


_FUNCTIONS: dict[str, Callable[[float], float]] = {
    "exp": _guard(math.exp, "exp"),
    "ln": _ln,
    "sin": _guard(math.sin, "sin"),
    "cos": _guard(math.cos, "cos"),
    "sinh": _guard(math.sinh, "sinh"),
    "cosh": _guard(math.cosh, "cosh"),
    "sqrt": _sqrt,
    "atan": math.atan,
}


def _divide(a: float, b: float) -> float:
    if b == 0.0:
        raise DomainError("division by zero")
    return a / b


def _power(x: float, n: int) -> float:
    if n < 0 and x == 0.0:
        raise DomainError("zero raised to a negative power")
    try:
        return x**n
    except OverflowError:
        raise DomainError(f"{x!r}^{n} overflows") from None


@lru_cache(maxsize=1 << 16)
def compile_expression(e: Expression) -> Compiled:
    """Return a function ``env -> float`` evaluating ``e``."""
    if isinstance(e, Const):
        value = e.value
        return lambda env: value
    if isinstance(e, Symbol):
        name = e.name

        def lookup(env):
            try:
                return env[name]
            except KeyError:
                raise UnboundSymbolError(f"symbol {name!r} is not bound") from None

        return lookup
    if isinstance(e, Neg):
        a = compile_expression(e.arg)
        return lambda env: -a(env)
    if isinstance(e, Add):
        a, b = compile_expression(e.left), compile_expression(e.right)
        return lambda env: a(env) + b(env)
    if isinstance(e, Sub):
        a, b = compile_expression(e.left), compile_expression(e.right)
        return lambda env: a(env) - b(env)
    if isinstance(e, Mul):
        a, b = compile_expression(e.left), compile_expression(e.right)
        return lambda env: a(env) * b(env)
    if isinstance(e, Div):
        a, b = compile_expression(e.left), compile_expression(e.right)
        return lambda env: _divide(a(env), b(env))
    if isinstance(e, Pow):
        a, n = compile_expression(e.base), e.exponent
        return lambda env: _power(a(env), n)
    if isinstance(e, Call):
        fn, a = _FUNCTIONS[e.function], compile_expression(e.arg)
        return lambda env: fn(a(env))
    if isinstance(e, Antiderivative):
        return _compile_antiderivative(e)
    raise TypeError(f"not an expression node: {e!r}")


def _compile_antiderivative(e: Antiderivative) -> Compiled:
    integrand = compile_expression(e.integrand)
    var, base = e.variable, e.base

    def integrate(env):
        try:
            upper = env[var]
        except KeyError:
            raise UnboundSymbolError(f"symbol {var!r} is not bound") from None
        local = dict(env)

        def f(t):
            local[var] = t
            return integrand(local)

        return adaptive_simpson(f, base, upper, DEFAULT_TOL, DEFAULT_MAX_DEPTH)

    return integrate


def evaluate_env(e: Expression, env: Env) -> float:
    return compile_expression(e)(env)


def evaluate(
    e: Expression,
    point: Sequence[float] | Mapping[str, float],
    params: Mapping[str, float] | None = None,
    chart: Chart | None = None,
) -> float:
    """Evaluate ``e`` at a point.

    ``point`` is either a name->value mapping or a sequence ordered like
    ``chart``. Raises DomainError, QuadratureError or UnboundSymbolError.
    """
    if isinstance(point, Mapping):
        env = dict(params or {})
        env.update({k: float(v) for k, v in point.items()})
    else:
        if chart is None:
            raise ValueError("a chart is needed to evaluate at a positional point")
        env = chart.environment(chart.point(point), params)
    return evaluate_env(e, env)
