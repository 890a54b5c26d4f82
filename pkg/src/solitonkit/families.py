"""Egorov, Cahen-Wallach and epsilon-space metrics with their soliton fields.

All metrics live on the chart ``(u, v, x1, ..., xn)`` with ``g(d_u, d_v) = 1``.
Integrals of ``Ric_uu`` and of ``k_i / f`` that have no closed form are
represented by antiderivative nodes based at the midpoint of the Egorov
u-domain; the free additive constants of the general solutions absorb the
choice of base point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from solitonkit.expr import (
    ZERO,
    Const,
    Expression,
    antiderivative,
    as_expression,
    compile_expression,
    cos,
    differentiate,
    exp,
    lorentz_chart,
    parse,
    simplify,
    sin,
    sym,
    total,
)
from solitonkit.expr.errors import EvaluationError
from solitonkit.geometry import MetricSpec, ScalarFieldSpec, VectorFieldSpec
from solitonkit.soliton import SolitonCandidate

MAX_N = 12
N_PROBES = 1000
POSITIVITY_FLOOR = 1e-9
CONSTRAINT_TOL = 1e-8
SKEW_TOL = 1e-12

U = sym("u")
V = sym("v")


class FamilyError(ValueError):
    pass


class ConstraintError(FamilyError):
    def __init__(self, message: str, max_violation: float | None = None, location: float | None = None):
        self.max_violation = max_violation
        self.location = location
        super().__init__(message)


def _check_n(n: int):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise FamilyError(f"n must be a positive integer, got {n!r}")
    if n > MAX_N:
        raise FamilyError(f"n = {n} exceeds the supported maximum {MAX_N}")


def xs(n: int) -> list[Expression]:
    return [sym(f"x{i}") for i in range(1, n + 1)]


def _probes(domain: tuple[float, float]) -> np.ndarray:
    a, b = domain
    return a + (b - a) * (np.arange(N_PROBES) + 0.5) / N_PROBES


def _probe_values(e: Expression, domain, params: Mapping[str, float]) -> tuple[np.ndarray, np.ndarray]:
    fn = compile_expression(e)
    ts = _probes(domain)
    env = dict(params)
    out = np.empty_like(ts)
    for k, t in enumerate(ts):
        env["u"] = float(t)
        out[k] = fn(env)
    return ts, out


# ---------------------------------------------------------------- Egorov


@dataclass(frozen=True)
class EgorovParams:
    n: int
    f: Expression
    u_domain: tuple[float, float]
    parameters: Mapping[str, float] = field(default_factory=dict)

    def __init__(self, n: int, f: Expression | str, u_domain: Sequence[float] = (-1.0, 1.0),
                 parameters: Mapping[str, float] | None = None):
        _check_n(n)
        parameters = dict(parameters or {})
        if isinstance(f, str):
            f = parse(f, ["u", "v"], parameters.keys())
        f = simplify(as_expression(f))
        stray = f.symbols() - {"u"} - set(parameters)
        if stray:
            raise FamilyError(f"f must depend on u only; found {sorted(stray)}")
        a, b = (float(x) for x in u_domain)
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise FamilyError(f"u_domain must be a nonempty finite interval, got {u_domain!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "u_domain", (a, b))
        object.__setattr__(self, "parameters", parameters)
        try:
            ts, values = _probe_values(f, self.u_domain, parameters)
        except EvaluationError as exc:
            raise FamilyError(f"f cannot be evaluated on u_domain: {exc}") from None
        k = int(np.argmin(values))
        if not values[k] > POSITIVITY_FLOOR:
            raise FamilyError(
                f"f must be positive on u_domain {self.u_domain}; f({ts[k]:.6g}) = {values[k]:.6g}"
            )

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.u_domain[0] + self.u_domain[1])

    @property
    def fp(self) -> Expression:
        return differentiate(self.f, "u")

    @property
    def fpp(self) -> Expression:
        return differentiate(self.fp, "u")

    def f_at(self, u: float) -> float:
        return compile_expression(self.f)({**self.parameters, "u": float(u)})


def egorov_ricci_uu(params: EgorovParams) -> Expression:
    """``Ric_uu = n ((f')^2 - 2 f f'') / (4 f^2)``."""
    f, fp, fpp = params.f, params.fp, params.fpp
    return simplify(Const(params.n) * (fp**2 - Const(2) * f * fpp) / (Const(4) * f**2))


def egorov_metric(params: EgorovParams) -> MetricSpec:
    n = params.n
    d = n + 2
    comps: list[list[Expression]] = [[ZERO] * d for _ in range(d)]
    comps[0][1] = comps[1][0] = Const(1)
    for i in range(2, d):
        comps[i][i] = params.f
    return MetricSpec(lorentz_chart(n), comps, params.parameters)


def _primitive(params: EgorovParams, integrand: Expression) -> Expression:
    return simplify(antiderivative(integrand, "u", params.midpoint))


def egorov_particular_soliton(params: EgorovParams, lam: float,
                              primitive: Expression | str | None = None) -> SolitonCandidate:
    """``X = (-1/2 P(u) + lambda v) d_v + sum (lambda/2) x_i d_i`` with ``P' = Ric_uu``.

    When ``primitive`` is omitted, ``P`` is an antiderivative node.
    """
    ric = egorov_ricci_uu(params)
    if primitive is None:
        P = _primitive(params, ric)
    else:
        if isinstance(primitive, str):
            primitive = parse(primitive, ["u", "v"], params.parameters.keys())
        P = simplify(as_expression(primitive))
        ts, dp = _probe_values(differentiate(P, "u"), params.u_domain, params.parameters)
        _, rv = _probe_values(ric, params.u_domain, params.parameters)
        err = np.abs(dp - rv)
        k = int(np.argmax(err))
        if err[k] > CONSTRAINT_TOL * (1.0 + abs(rv[k])):
            raise ConstraintError(
                f"supplied primitive does not differentiate to Ric_uu (off by {err[k]:.3g} at u={ts[k]:.6g})",
                float(err[k]), float(ts[k]),
            )
    lam = float(lam)
    comps = [ZERO, Const(-0.5) * P + Const(lam) * V] + [Const(lam / 2) * x for x in xs(params.n)]
    field_ = VectorFieldSpec(lorentz_chart(params.n), comps, params.parameters)
    return SolitonCandidate.vector(field_, lam, label="egorov-particular")


@dataclass(frozen=True)
class EgorovGeneralConstants:
    a: float = 0.0
    b: float = 0.0
    K: float = 0.0
    c0: float = 0.0
    c: Sequence[float] | None = None
    k: Sequence[float] | None = None
    A: Sequence[Sequence[float]] | None = None

    def arrays(self, n: int):
        c = np.zeros(n) if self.c is None else np.asarray(self.c, dtype=float)
        k = np.zeros(n) if self.k is None else np.asarray(self.k, dtype=float)
        A = np.zeros((n, n)) if self.A is None else np.asarray(self.A, dtype=float)
        if c.shape != (n,) or k.shape != (n,) or A.shape != (n, n):
            raise FamilyError(f"constants c, k must have length {n} and A shape ({n}, {n})")
        return c, k, A


def egorov_constraint(params: EgorovParams, a: float, b: float, K: float) -> Expression:
    """``b f' + (a + b u)(f'' - f'^2 / f) - 4 K``; must vanish identically."""
    f, fp, fpp = params.f, params.fp, params.fpp
    return simplify(
        Const(b) * fp + (Const(a) + Const(b) * U) * (fpp - fp**2 / f) - Const(4 * K)
    )


def check_egorov_constants(params: EgorovParams, constants: EgorovGeneralConstants):
    _, _, A = constants.arrays(params.n)
    skew = float(np.max(np.abs(A + A.T))) if A.size else 0.0
    if skew > SKEW_TOL:
        raise ConstraintError(f"A must be skew-symmetric (|A + A^T| = {skew:.3g})", skew)
    expr = egorov_constraint(params, constants.a, constants.b, constants.K)
    ts, values = _probe_values(expr, params.u_domain, params.parameters)
    err = np.abs(values)
    k = int(np.argmax(err))
    if err[k] > CONSTRAINT_TOL:
        raise ConstraintError(
            f"b f' + (a + b u)(f'' - f'^2/f) = 4K violated by {err[k]:.3g} at u = {ts[k]:.6g}",
            float(err[k]), float(ts[k]),
        )


def egorov_general_soliton(params: EgorovParams, lam: float,
                           constants: EgorovGeneralConstants) -> SolitonCandidate:
    check_egorov_constants(params, constants)
    n = params.n
    c, k, A = constants.arrays(n)
    a, b, K, c0 = constants.a, constants.b, constants.K, constants.c0
    lam = float(lam)
    x = xs(n)
    f, fp = params.f, params.fp
    au = Const(a) + Const(b) * U
    ric_int = _primitive(params, egorov_ricci_uu(params))
    Xu = au
    Xv = total(
        [Const(c0), Const(lam - b) * V, Const(-0.5) * ric_int]
        + [Const(k[i]) * x[i] for i in range(n)]
        + [Const(K) * total(xi**2 for xi in x)]
    )
    Xi = []
    for i in range(n):
        terms = [Const(c[i])]
        if k[i] != 0.0:
            terms.append(-_primitive(params, Const(k[i]) / f))
        terms.append((Const(lam / 2) - au * fp / (Const(2) * f)) * x[i])
        terms += [Const(A[i, j]) * x[j] for j in range(n) if j != i]
        Xi.append(total(terms))
    field_ = VectorFieldSpec(lorentz_chart(n), [Xu, Xv, *Xi], params.parameters)
    return SolitonCandidate.vector(field_, lam, label="egorov-general")


def egorov_gradient_potential(params: EgorovParams, lam: float = 0.0,
                              alpha: float = 0.0, beta: float = 0.0) -> SolitonCandidate:
    """Steady potential ``h(u)`` with ``h'' = -Ric_uu / 2``.

    The second antiderivative is written as ``u I(F) - I(u F)`` with
    ``I`` a single antiderivative, so no antiderivative is nested.
    Non-steady requests are rejected: non-flat Egorov spaces admit only
    steady gradient solitons.
    """
    if lam != 0.0:
        raise FamilyError("Egorov gradient solitons are steady: lambda must be 0")
    F = simplify(Const(-0.5) * egorov_ricci_uu(params))
    double = U * _primitive(params, F) - _primitive(params, U * F)
    h = simplify(Const(alpha) + Const(beta) * U + double)
    potential = ScalarFieldSpec(lorentz_chart(params.n), h, params.parameters)
    return SolitonCandidate.gradient(potential, 0.0, label="egorov-gradient")


# ---------------------------------------------------------- Cahen-Wallach


@dataclass(frozen=True)
class CWParams:
    n: int
    kappa: tuple[float, ...]

    def __init__(self, n: int, kappa: Sequence[float]):
        _check_n(n)
        kappa = tuple(float(k) for k in kappa)
        if len(kappa) != n:
            raise FamilyError(f"expected {n} kappa values, got {len(kappa)}")
        if any(not math.isfinite(k) for k in kappa):
            raise FamilyError("kappa values must be finite")
        if any(k == 0.0 for k in kappa):
            raise FamilyError("kappa_i must be non-zero real numbers")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "kappa", kappa)

    @property
    def kappa_sum(self) -> float:
        return math.fsum(self.kappa)


def cw_metric(params: CWParams) -> MetricSpec:
    n = params.n
    d = n + 2
    comps: list[list[Expression]] = [[ZERO] * d for _ in range(d)]
    comps[0][0] = total(Const(k) * x**2 for k, x in zip(params.kappa, xs(n)))
    comps[0][1] = comps[1][0] = Const(1)
    for i in range(2, d):
        comps[i][i] = Const(1)
    return MetricSpec(lorentz_chart(n), comps)


def cw_particular_soliton(params: CWParams, lam: float) -> SolitonCandidate:
    """``X = (0, (sum kappa) u / 2 + lambda v, lambda x_1 / 2, ...)``."""
    lam = float(lam)
    comps = [ZERO, Const(params.kappa_sum / 2) * U + Const(lam) * V]
    comps += [Const(lam / 2) * x for x in xs(params.n)]
    field_ = VectorFieldSpec(lorentz_chart(params.n), comps)
    return SolitonCandidate.vector(field_, lam, label="cw-particular")


@dataclass(frozen=True)
class CWGeneralConstants:
    a: float = 0.0
    b: float = 0.0
    c: Sequence[Sequence[float]] | None = None
    d1: Sequence[float] | None = None
    d2: Sequence[float] | None = None

    def arrays(self, n: int):
        c = np.zeros((n, n)) if self.c is None else np.asarray(self.c, dtype=float)
        d1 = np.zeros(n) if self.d1 is None else np.asarray(self.d1, dtype=float)
        d2 = np.zeros(n) if self.d2 is None else np.asarray(self.d2, dtype=float)
        if c.shape != (n, n) or d1.shape != (n,) or d2.shape != (n,):
            raise FamilyError(f"constants c must have shape ({n}, {n}) and d1, d2 length {n}")
        return c, d1, d2


def cw_transverse_solution(kappa: float, d1: float, d2: float) -> Expression:
    """Solution of ``h'' = kappa h`` in the exponential or trigonometric basis."""
    r = math.sqrt(abs(kappa))
    if kappa > 0:
        return simplify(Const(d1) * exp(Const(-r) * U) + Const(d2) * exp(Const(r) * U))
    return simplify(Const(d1) * sin(Const(r) * U) + Const(d2) * cos(Const(r) * U))


def check_cw_constants(params: CWParams, constants: CWGeneralConstants):
    c, _, _ = constants.arrays(params.n)
    skew = float(np.max(np.abs(c + c.T)))
    if skew > SKEW_TOL:
        raise ConstraintError(f"c must be skew-symmetric (|c + c^T| = {skew:.3g})", skew)
    kappa = np.asarray(params.kappa)
    coupling = np.abs(c * (kappa[:, None] - kappa[None, :]))
    i, j = np.unravel_index(int(np.argmax(coupling)), coupling.shape)
    if coupling[i, j] > SKEW_TOL:
        raise ConstraintError(
            f"c_ij (kappa_i - kappa_j) must vanish; entry ({i + 1}, {j + 1}) gives "
            f"{c[i, j] * (kappa[i] - kappa[j]):.6g}",
            float(coupling[i, j]),
        )


def cw_general_soliton(params: CWParams, lam: float, constants: CWGeneralConstants) -> SolitonCandidate:
    check_cw_constants(params, constants)
    n = params.n
    c, d1, d2 = constants.arrays(n)
    lam = float(lam)
    x = xs(n)
    hs = [cw_transverse_solution(k, d1[i], d2[i]) for i, k in enumerate(params.kappa)]
    Xv = total(
        [Const(constants.b), Const(lam) * V, Const(params.kappa_sum / 2) * U]
        + [-(x[i] * differentiate(hs[i], "u")) for i in range(n)]
    )
    Xj = [
        total([Const(lam / 2) * x[j], hs[j]] + [Const(c[i, j]) * x[i] for i in range(n) if i != j])
        for j in range(n)
    ]
    field_ = VectorFieldSpec(lorentz_chart(n), [Const(constants.a), Xv, *Xj])
    return SolitonCandidate.vector(field_, lam, label="cw-general")


def cw_gradient_potential(params: CWParams, alpha: float = 0.0, beta: float = 0.0,
                          lam: float = 0.0) -> SolitonCandidate:
    """``h(u) = alpha + beta u + (sum kappa) u^2 / 4``; only the steady case exists."""
    if lam != 0.0:
        raise FamilyError("Cahen-Wallach gradient solitons are steady: lambda must be 0")
    h = simplify(Const(alpha) + Const(beta) * U + Const(params.kappa_sum / 4) * U**2)
    return SolitonCandidate.gradient(ScalarFieldSpec(lorentz_chart(params.n), h), 0.0, label="cw-gradient")


# ------------------------------------------------------------ epsilon


def epsilon_params(n: int, eps: float) -> CWParams:
    if not eps:
        raise FamilyError("epsilon must be non-zero")
    return CWParams(n, [eps] * n)


def epsilon_metric(n: int, eps: float) -> MetricSpec:
    return cw_metric(epsilon_params(n, eps))


def epsilon_particular_soliton(n: int, eps: float, lam: float) -> SolitonCandidate:
    return cw_particular_soliton(epsilon_params(n, eps), lam)


def epsilon_general_soliton(n: int, eps: float, lam: float, constants: CWGeneralConstants) -> SolitonCandidate:
    return cw_general_soliton(epsilon_params(n, eps), lam, constants)


def epsilon_gradient_potential(n: int, eps: float, alpha: float = 0.0, beta: float = 0.0,
                               lam: float = 0.0) -> SolitonCandidate:
    return cw_gradient_potential(epsilon_params(n, eps), alpha, beta, lam)


# ------------------------------------------------------------ helpers


def rotation_field(n: int, c: Sequence[Sequence[float]]) -> VectorFieldSpec:
    """``X_j = sum_{i != j} c_ij x_i`` for skew ``c``: a Killing field of every
    epsilon-space and of every Egorov space."""
    c = np.asarray(c, dtype=float)
    if c.shape != (n, n) or np.max(np.abs(c + c.T)) > SKEW_TOL:
        raise FamilyError("rotation coefficients must form a skew-symmetric n x n matrix")
    x = xs(n)
    comps = [ZERO, ZERO] + [total(Const(c[i, j]) * x[i] for i in range(n) if i != j) for j in range(n)]
    return VectorFieldSpec(lorentz_chart(n), comps)


FAMILIES = {
    "egorov": "g = du dv + f(u) sum dx_i^2; keys: n, f, u_domain, parameters",
    "cahen_wallach": "g = (sum kappa_i x_i^2) du^2 + du dv + sum dx_i^2; keys: n, kappa",
    "epsilon": "Cahen-Wallach with kappa_1 = ... = kappa_n = epsilon; keys: n, epsilon",
    "custom": "explicit metric components; keys: coordinates, g.<a>.<b>, parameters",
}

CONSTRUCTORS = {
    "egorov": {
        "particular": "egorov_particular_soliton(params, lambda, primitive=None)",
        "general": "egorov_general_soliton(params, lambda, EgorovGeneralConstants(a, b, K, c0, c, k, A))",
        "gradient": "egorov_gradient_potential(params)  [steady only]",
    },
    "cahen_wallach": {
        "particular": "cw_particular_soliton(params, lambda)",
        "general": "cw_general_soliton(params, lambda, CWGeneralConstants(a, b, c, d1, d2))",
        "gradient": "cw_gradient_potential(params, alpha, beta)  [steady only]",
    },
    "epsilon": {
        "particular": "epsilon_particular_soliton(n, epsilon, lambda)",
        "general": "epsilon_general_soliton(n, epsilon, lambda, CWGeneralConstants(a, b, c, d1, d2))",
        "gradient": "epsilon_gradient_potential(n, epsilon, alpha, beta)  [steady only]",
    },
    "custom": {
        "vector": "VectorFieldSpec from X.<coordinate> expressions",
        "scalar": "ScalarFieldSpec from an h expression (gradient candidate)",
    },
}
