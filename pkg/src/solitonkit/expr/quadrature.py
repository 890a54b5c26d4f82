"""Adaptive Simpson quadrature."""

from __future__ import annotations

import math
from typing import Callable

from solitonkit.expr.errors import QuadratureError

DEFAULT_TOL = 1e-10
DEFAULT_MAX_DEPTH = 40


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> float:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    Uses the classical Simpson bisection with the ``|S2 - S1| <= 15 tol``
    acceptance test and a Richardson correction. Reversed limits give the
    negated integral. Raises QuadratureError if some panel still fails the
    test at ``max_depth``.
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, tol, max_depth)
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _refine(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _refine(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol or not math.isfinite(delta):
        if not math.isfinite(delta):
            raise QuadratureError(f"non-finite integrand on [{a}, {b}]")
        return left + right + delta / 15.0
    if depth <= 0:
        raise QuadratureError(
            f"adaptive Simpson did not converge on [{a}, {b}] (error estimate {abs(delta) / 15.0:.3g})"
        )
    return _refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + _refine(
        f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
    )
