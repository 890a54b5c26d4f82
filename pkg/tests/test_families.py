import math

import numpy as np
import pytest

from conftest import random_points
from solitonkit import families as fam
from solitonkit.expr import Antiderivative, derivative, evaluate
from solitonkit.geometry import (
    VectorFieldSpec,
    causal_character_at,
    covariant_derivative_at,
    frame_at,
    gradient_at,
    weyl_at,
)
from solitonkit.soliton import (
    Classification,
    Kind,
    classify,
    gradient_diagnostics_at,
    hamilton_value_at,
    residual_at,
)

U, V, X1, X2 = 0, 1, 2, 3


def max_residual(M, c, points):
    return max(float(np.max(np.abs(residual_at(M, c, p)))) for p in points)


def field_values(c, p, params=None):
    env = c.field.chart.environment(p, params)
    return np.array([evaluate(e, env) for e in c.field.components])


# ------------------------------------------------------------ parameters


@pytest.mark.parametrize("n", [0, -1, 13])
def test_dimension_bounds(n):
    with pytest.raises(fam.FamilyError):
        fam.EgorovParams(n, "1")
    with pytest.raises(fam.FamilyError):
        fam.CWParams(n, [1.0] * max(n, 0))


def test_egorov_positivity_guard():
    with pytest.raises(fam.FamilyError, match="positive"):
        fam.EgorovParams(1, "u", (-1.0, 1.0))
    fam.EgorovParams(1, "u", (0.5, 1.0))


def test_egorov_f_must_depend_on_u_only():
    with pytest.raises(fam.FamilyError):
        fam.EgorovParams(1, "1 + v^2")
    with pytest.raises(fam.FamilyError):
        fam.EgorovParams(1, "1", (1.0, 1.0))


def test_egorov_f_domain_error_is_rejected():
    with pytest.raises(fam.FamilyError):
        fam.EgorovParams(1, "ln(u)", (-1.0, 1.0))


def test_cw_kappa_validation():
    with pytest.raises(fam.FamilyError, match="non-zero"):
        fam.CWParams(2, [2.0, 0.0])
    with pytest.raises(fam.FamilyError):
        fam.CWParams(2, [1.0])
    with pytest.raises(fam.FamilyError):
        fam.epsilon_params(2, 0.0)


# ---------------------------------------------------------------- Egorov


def test_egorov_flat(rng):
    M = fam.egorov_metric(fam.EgorovParams(2, "1"))
    for p in random_points(rng, 4, 10):
        F = frame_at(M, p)
        assert not np.any(F.riemann)
        np.testing.assert_array_equal(F.g, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_egorov_ricci_examples(rng):
    M = fam.egorov_metric(fam.EgorovParams(2, "exp(2*u)"))
    N = fam.egorov_metric(fam.EgorovParams(1, "1 + u^2"))
    for p in random_points(rng, 4, 20):
        assert frame_at(M, p).ricci[U, U] == pytest.approx(-2.0, abs=1e-12)
        u = p[0]
        assert frame_at(N, p[:3]).ricci[U, U] == pytest.approx(-1.0 / (1 + u * u) ** 2, abs=1e-12)


def test_egorov_parameterized_f(rng):
    params = fam.EgorovParams(3, "exp(a*u)", parameters={"a": 1.5})
    M = fam.egorov_metric(params)
    for p in random_points(rng, 5, 10):
        assert frame_at(M, p).ricci[U, U] == pytest.approx(-3 * 1.5**2 / 4, abs=1e-12)


def test_egorov_particular_with_primitive(rng):
    params = fam.EgorovParams(2, "exp(2*u)")
    M = fam.egorov_metric(params)
    for lam in (-1.0, 0.0, 1.0):
        c = fam.egorov_particular_soliton(params, lam, "-2*u")
        assert not c.has_antiderivative
        for p in random_points(rng, 4, 20):
            u, v, x1, x2 = p
            np.testing.assert_allclose(field_values(c, p), [0, u + lam * v, lam / 2 * x1, lam / 2 * x2], atol=1e-14)
            assert np.max(np.abs(residual_at(M, c, p))) <= 1e-12


def test_egorov_particular_rejects_wrong_primitive():
    params = fam.EgorovParams(2, "exp(2*u)")
    with pytest.raises(fam.ConstraintError) as info:
        fam.egorov_particular_soliton(params, 1.0, "-u")
    assert info.value.max_violation == pytest.approx(1.0)


def test_egorov_particular_flat(rng):
    params = fam.EgorovParams(2, "1")
    M = fam.egorov_metric(params)
    c = fam.egorov_particular_soliton(params, 0.7)
    for p in random_points(rng, 4, 10):
        np.testing.assert_allclose(field_values(c, p), [0, 0.7 * p[1], 0.35 * p[2], 0.35 * p[3]], atol=1e-15)
        assert not np.any(residual_at(M, c, p))


def test_egorov_particular_quadrature_backed(rng):
    params = fam.EgorovParams(1, "1 + u^2")
    M = fam.egorov_metric(params)
    c = fam.egorov_particular_soliton(params, 1.0)
    assert c.has_antiderivative
    prim = [n for n in c.field.components[V].walk() if isinstance(n, Antiderivative)][0]
    for p in random_points(rng, 3, 100):
        u = p[0]
        closed = lambda t: -(t / (2 * (1 + t * t)) + 0.5 * math.atan(t))  # noqa: E731
        assert evaluate(prim, {"u": u}) == pytest.approx(closed(u) - closed(prim.base), abs=1e-9)
        assert np.max(np.abs(residual_at(M, c, p))) <= 1e-6


def test_egorov_general_collapses_to_particular(rng):
    params = fam.EgorovParams(2, "1 + u^2")
    zero = fam.EgorovGeneralConstants()
    for lam in (-1.0, 1.0):
        general = fam.egorov_general_soliton(params, lam, zero)
        particular = fam.egorov_particular_soliton(params, lam)
        for p in random_points(rng, 4, 10):
            np.testing.assert_allclose(field_values(general, p), field_values(particular, p), atol=1e-14)


def test_egorov_general_exponential_branch(rng):
    params = fam.EgorovParams(2, "exp(2*u)")
    M = fam.egorov_metric(params)
    consts = fam.EgorovGeneralConstants(a=3.0, k=[1.0, 1.0])
    for lam in (-1.0, 0.0, 1.0):
        c = fam.egorov_general_soliton(params, lam, consts)
        assert max_residual(M, c, random_points(rng, 4, 100)) <= 1e-6


def test_egorov_general_system_componentwise(rng):
    # oracle: the uu, ui, ii and ij soliton equations written out for X_u = a + b u
    params = fam.EgorovParams(2, "exp(2*u)")
    M = fam.egorov_metric(params)
    lam = 0.5
    c = fam.egorov_general_soliton(params, lam, fam.EgorovGeneralConstants(a=3.0, c0=1.0, c=[0.5, -1.0], k=[1.0, 2.0],
                                                                           A=[[0, 0.7], [-0.7, 0]]))
    for p in random_points(rng, 4, 20):
        u = p[0]
        f = math.exp(2 * u)
        F = frame_at(M, p)
        lie = residual_at(M, c, p) - F.ricci + lam * F.g
        assert lie[U, V] == pytest.approx(lam, abs=1e-9)  # d_u X_u + d_v X_v = lambda
        assert lie[X1, X1] == pytest.approx(lam * f, abs=1e-6)  # (a + b u) f' + 2 f d_i X_i
        assert lie[X1, X2] == pytest.approx(0.0, abs=1e-9)


def test_egorov_general_rejects_violated_constraint():
    params = fam.EgorovParams(1, "1 + u^2")
    expr = fam.egorov_constraint(params, 0.0, 1.0, 0.0)
    # probe oracle: b f' + (a + b u)(f'' - f'^2/f) differs between u = 0 and u = 1
    assert evaluate(expr, {"u": 0.0}) != pytest.approx(evaluate(expr, {"u": 1.0}))
    with pytest.raises(fam.ConstraintError) as info:
        fam.egorov_general_soliton(params, 1.0, fam.EgorovGeneralConstants(a=0.0, b=1.0))
    assert info.value.location is not None and -1.0 <= info.value.location <= 1.0
    with pytest.raises(fam.ConstraintError):
        fam.egorov_general_soliton(fam.EgorovParams(2, "exp(2*u)"), 1.0, fam.EgorovGeneralConstants(b=1.0))


def test_egorov_general_rejects_non_skew_A():
    with pytest.raises(fam.ConstraintError):
        fam.egorov_general_soliton(fam.EgorovParams(2, "exp(2*u)"), 1.0,
                                   fam.EgorovGeneralConstants(A=[[0, 1], [1, 0]]))


def test_egorov_general_nonzero_b_where_allowed(rng):
    # f = u^2 on (0.5, 2): f'' - f'^2/f = -2, so with a = 0, b = 1 the constraint reads 2u - 2u = 4K = 0
    params = fam.EgorovParams(1, "u^2", (0.5, 2.0))
    M = fam.egorov_metric(params)
    c = fam.egorov_general_soliton(params, 1.0, fam.EgorovGeneralConstants(b=1.0, K=0.0))
    pts = [np.array([0.5 + 1.5 * rng.random(), *(2 * rng.random(2) - 1)]) for _ in range(50)]
    assert max_residual(M, c, pts) <= 1e-6


def test_egorov_gradient_examples(rng):
    params = fam.EgorovParams(2, "exp(2*u)")
    M = fam.egorov_metric(params)
    c = fam.egorov_gradient_potential(params)
    assert c.kind is Kind.GRADIENT and c.lam == 0.0
    for p in random_points(rng, 4, 100):
        _, dh, d2h = c.potential.jet(p)
        assert d2h[U, U] == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(residual_at(M, c, p))) <= 1e-9
    flat = fam.egorov_gradient_potential(fam.EgorovParams(2, "1"), alpha=1.0, beta=2.0)
    assert flat.potential.value == fam.egorov_gradient_potential(fam.EgorovParams(1, "1"), 0, 1, 2).potential.value


@pytest.mark.parametrize("a, n", [(1.0, 1), (2.0, 2), (-0.7, 4)])
def test_egorov_gradient_exponential(a, n, rng):
    params = fam.EgorovParams(n, "exp(a*u)", parameters={"a": a})
    M = fam.egorov_metric(params)
    c = fam.egorov_gradient_potential(params)
    for p in random_points(rng, n + 2, 30):
        # oracle: Ric_uu = -n a^2 / 4, so h = n a^2 u^2 / 16 up to affine terms
        _, _, d2h = c.potential.jet(p, M.params)
        assert d2h[U, U] == pytest.approx(n * a * a / 8, abs=1e-9)
        assert np.max(np.abs(residual_at(M, c, p))) <= 1e-9


def test_egorov_gradient_rejects_non_steady():
    with pytest.raises(fam.FamilyError):
        fam.egorov_gradient_potential(fam.EgorovParams(2, "exp(2*u)"), lam=1.0)


@pytest.mark.parametrize("c1, c2", [(1.0, 2.0), (0.5, -3.0), (0.0, 1.0)])
def test_egorov_flat_case(c1, c2, rng):
    params = fam.EgorovParams(2, f"({c1}*u + {c2})^2")
    M = fam.egorov_metric(params)
    for p in random_points(rng, 4, 30):
        assert np.max(np.abs(frame_at(M, p).riemann)) <= 1e-12


# ---------------------------------------------------------- Cahen-Wallach


def test_cw_metric_examples(rng):
    M = fam.cw_metric(fam.CWParams(2, [1.0, -1.0]))
    N = fam.cw_metric(fam.CWParams(2, [2.0, 3.0]))
    E = fam.epsilon_metric(2, 1.0)
    C = fam.cw_metric(fam.CWParams(2, [1.0, 1.0]))
    assert E.components == C.components
    for p in random_points(rng, 4, 10):
        F = frame_at(M, p)
        assert abs(F.ricci[U, U]) <= 1e-12
        assert F.curvature_form[U, X1, U, X1] == pytest.approx(-1.0, abs=1e-12)
        G = frame_at(N, p)
        assert G.ricci[U, U] == pytest.approx(-5.0, abs=1e-12)
        assert abs(G.scalar) <= 1e-12
        # oracle: det of the (u, v) block [[g_uu, 1], [1, 0]] is -1
        assert np.linalg.det(N.matrix_at(p)[:2, :2]) == pytest.approx(-1.0)


def test_cw_particular_examples(rng):
    params = fam.CWParams(2, [2.0, 3.0])
    M = fam.cw_metric(params)
    c = fam.cw_particular_soliton(params, 1.0)
    for p in random_points(rng, 4, 100):
        u, v, x1, x2 = p
        np.testing.assert_allclose(field_values(c, p), [0, 2.5 * u + v, x1 / 2, x2 / 2], atol=1e-15)
        assert np.max(np.abs(residual_at(M, c, p))) <= 1e-9
    zero = fam.cw_particular_soliton(fam.CWParams(2, [1.0, -1.0]), 0.0)
    assert all(evaluate(e, {}) == 0.0 for e in zero.field.components)
    params3 = fam.CWParams(3, [1.0, 1.0, 1.0])
    exp_ = fam.cw_particular_soliton(params3, -2.0)
    assert classify(exp_.lam) is Classification.EXPANDING
    assert causal_character_at(fam.cw_metric(params3), exp_.field, [0.1, 0.2, 0.3, 0, -0.1]).value == "spacelike"


def test_cw_general_collapses_to_particular(rng):
    params = fam.CWParams(2, [2.0, 3.0])
    g = fam.cw_general_soliton(params, 1.0, fam.CWGeneralConstants())
    c = fam.cw_particular_soliton(params, 1.0)
    for p in random_points(rng, 4, 10):
        np.testing.assert_allclose(field_values(g, p), field_values(c, p), atol=1e-15)


def test_cw_general_equal_kappa_rotation(rng):
    params = fam.CWParams(2, [1.0, 1.0])
    M = fam.cw_metric(params)
    consts = fam.CWGeneralConstants(a=0.5, b=-1.0, c=[[0, 1], [-1, 0]], d1=[0.3, -0.7], d2=[1.2, 0.4])
    for lam in (-1.0, 0.0, 1.0):
        c = fam.cw_general_soliton(params, lam, consts)
        assert max_residual(M, c, random_points(rng, 4, 100)) <= 1e-9


def test_cw_general_rejects_coupling():
    with pytest.raises(fam.ConstraintError, match=r"\(1, 2\)"):
        fam.cw_general_soliton(fam.CWParams(2, [1.0, 2.0]), 1.0, fam.CWGeneralConstants(c=[[0, 1], [-1, 0]]))
    with pytest.raises(fam.ConstraintError):
        fam.cw_general_soliton(fam.CWParams(2, [1.0, 1.0]), 1.0, fam.CWGeneralConstants(c=[[0, 1], [1, 0]]))


def test_cw_transverse_solutions():
    for kappa, d1, d2 in ((2.0, 0.5, -1.0), (-3.0, 1.0, 2.0)):
        h = fam.cw_transverse_solution(kappa, d1, d2)
        for u in (-0.8, 0.1, 0.9):
            # oracle: kappa h - h'' = 0
            assert kappa * evaluate(h, {"u": u}) - evaluate(derivative(h, "u", "u"), {"u": u}) == pytest.approx(0, abs=1e-12)
    assert evaluate(fam.cw_transverse_solution(-1.0, 1.0, 0.0), {"u": 0.3}) == pytest.approx(math.sin(0.3))


def test_cw_general_mixed_branches(rng):
    params = fam.CWParams(3, [-1.0, -1.0, 2.0])
    M = fam.cw_metric(params)
    consts = fam.CWGeneralConstants(a=1.0, b=0.5, c=[[0, 1, 0], [-1, 0, 0], [0, 0, 0]], d1=[1, 2, 3], d2=[-1, 0.5, 0.25])
    c = fam.cw_general_soliton(params, 1.0, consts)
    assert max_residual(M, c, random_points(rng, 5, 100)) <= 1e-9


def test_cw_gradient_examples(rng):
    params = fam.CWParams(2, [2.0, 3.0])
    M = fam.cw_metric(params)
    c = fam.cw_gradient_potential(params)
    assert evaluate(c.potential.value, {"u": 2.0}) == pytest.approx(5.0)
    assert max_residual(M, c, random_points(rng, 4, 100)) <= 1e-10

    ricci_flat = fam.CWParams(2, [1.0, -1.0])
    Mf = fam.cw_metric(ricci_flat)
    cf = fam.cw_gradient_potential(ricci_flat, 1.0, -2.0)
    for p in random_points(rng, 4, 10):
        r = gradient_diagnostics_at(Mf, cf.potential, p)
        assert abs(r.norm_sq_grad) <= 1e-12 and r.recurrence_defect == 0.0
        assert not np.any(covariant_derivative_at(Mf, VectorFieldSpec(Mf.chart, ["0", "-2", "0", "0"]), p))
        np.testing.assert_allclose(gradient_at(Mf, cf.potential, p), [0, -2.0, 0, 0], atol=1e-15)

    p4 = fam.CWParams(4, [1.0] * 4)
    M4 = fam.cw_metric(p4)
    c4 = fam.cw_gradient_potential(p4, 7.0, -2.0)
    for p in random_points(rng, 6, 50):
        _, _, d2h = c4.potential.jet(p)
        assert d2h[U, U] == pytest.approx(2.0)
        assert np.max(np.abs(residual_at(M4, c4, p))) <= 1e-10
        assert abs(hamilton_value_at(M4, c4, p)) <= 1e-12


def test_cw_gradient_rejects_non_steady():
    with pytest.raises(fam.FamilyError):
        fam.cw_gradient_potential(fam.CWParams(1, [1.0]), lam=-1.0)


# --------------------------------------------------------------- epsilon


def test_epsilon_examples(rng):
    M = fam.epsilon_metric(2, 1.0)
    for p in random_points(rng, 4, 20):
        assert np.max(np.abs(weyl_at(M, p))) <= 1e-9
    h = fam.epsilon_gradient_potential(2, 1.0, 0.5, 2.0).potential
    for u in (-0.5, 0.7):
        assert evaluate(h.value, {"u": u}) == pytest.approx(0.5 + 2.0 * u + u * u / 2)
    params = fam.epsilon_params(1, -1.0)
    c = fam.epsilon_general_soliton(1, -1.0, 0.5, fam.CWGeneralConstants(d1=[1.0]))
    assert max_residual(fam.cw_metric(params), c, random_points(rng, 3, 100)) <= 1e-9
    # the transverse field picks up sin(u)
    assert field_values(c, [0.3, 0.0, 0.0])[2] == pytest.approx(math.sin(0.3))


def test_epsilon_accepts_any_nonzero_value(rng):
    M = fam.epsilon_metric(2, 0.37)
    c = fam.epsilon_particular_soliton(2, 0.37, 1.0)
    assert max_residual(M, c, random_points(rng, 4, 20)) <= 1e-9


@pytest.mark.parametrize("eps", [1.0, -1.0, 2.5])
def test_epsilon_matches_cw_structurally(eps):
    p = fam.CWParams(3, [eps] * 3)
    consts = fam.CWGeneralConstants(a=1.0, c=[[0, 1, 0], [-1, 0, 2], [0, -2, 0]], d1=[1, 0, 2], d2=[0, 1, 1])
    assert fam.epsilon_metric(3, eps).components == fam.cw_metric(p).components
    assert fam.epsilon_particular_soliton(3, eps, 1.0).field.components == fam.cw_particular_soliton(p, 1.0).field.components
    assert (fam.epsilon_general_soliton(3, eps, -1.0, consts).field.components
            == fam.cw_general_soliton(p, -1.0, consts).field.components)
    assert fam.epsilon_gradient_potential(3, eps, 1, 2).potential.value == fam.cw_gradient_potential(p, 1, 2).potential.value


# ----------------------------------------------------------- invariants


def _constructor_cases():
    cases = []
    for f in ("exp(2*u)", "1 + u^2", "exp(-u)"):
        params = fam.EgorovParams(2, f)
        for lam in (-1.0, 0.0, 1.0):
            cases.append((f"egorov {f} particular {lam}", fam.egorov_metric(params),
                          lambda params=params, lam=lam: fam.egorov_particular_soliton(params, lam)))
        cases.append((f"egorov {f} gradient", fam.egorov_metric(params),
                      lambda params=params: fam.egorov_gradient_potential(params, alpha=0.5, beta=1.0)))
    params = fam.EgorovParams(2, "exp(2*u)")
    for lam in (-1.0, 0.0, 1.0):
        cases.append((f"egorov general {lam}", fam.egorov_metric(params),
                      lambda lam=lam: fam.egorov_general_soliton(
                          params, lam, fam.EgorovGeneralConstants(a=-1.0, c0=2.0, c=[1, 0], k=[0.5, -1], A=[[0, 1], [-1, 0]]))))
    for kappa in ((2.0, 3.0), (1.0, -1.0), (1.0, 1.0, 1.0)):
        cp = fam.CWParams(len(kappa), kappa)
        n = len(kappa)
        for lam in (-1.0, 0.0, 1.0):
            cases.append((f"cw {kappa} particular {lam}", fam.cw_metric(cp),
                          lambda cp=cp, lam=lam: fam.cw_particular_soliton(cp, lam)))
            cases.append((f"cw {kappa} general {lam}", fam.cw_metric(cp),
                          lambda cp=cp, lam=lam, n=n: fam.cw_general_soliton(
                              cp, lam, fam.CWGeneralConstants(a=1.0, b=2.0, d1=[0.5] * n, d2=[-1.0] * n))))
        cases.append((f"cw {kappa} gradient", fam.cw_metric(cp), lambda cp=cp: fam.cw_gradient_potential(cp, 1.0, -1.0)))
    return cases


CASES = _constructor_cases()


@pytest.mark.parametrize("name, M, build", CASES, ids=[c[0] for c in CASES])
def test_every_constructor_solves_its_equation(name, M, build, rng):
    c = build()
    tol = 1e-6 if c.has_antiderivative else 1e-8
    assert max_residual(M, c, random_points(rng, M.dim, 100)) <= tol
    if c.kind is Kind.GRADIENT:
        assert classify(c.lam) is Classification.STEADY


def test_list_metadata():
    assert set(fam.FAMILIES) == set(fam.CONSTRUCTORS) == {"egorov", "cahen_wallach", "epsilon", "custom"}


def test_rotation_field_validation():
    with pytest.raises(fam.FamilyError):
        fam.rotation_field(2, [[0, 1], [1, 0]])
