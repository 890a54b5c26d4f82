"""Pointwise connection and curvature.

Index conventions (all arrays are plain numpy):

* derivative axes come last: ``dg[i, j, a] = d_a g_ij``;
* ``christoffel[k, i, j] = Gamma^k_ij``;
* ``riemann[l, i, j, k] = R^l_ijk`` is the ``l`` component of
  ``R(d_i, d_j) d_k`` for ``R(X, Y) = nabla_[X,Y] - [nabla_X, nabla_Y]``,
  i.e. minus the usual ``[nabla_X, nabla_Y] - nabla_[X,Y]``;
* ``riemann_down[l, i, j, k] = g_lm R^m_ijk``;
* ``ricci[i, j] = R^k_ikj``, the trace of ``Z -> R(d_i, Z) d_j``.

With this sign the Ricci tensor and scalar curvature agree with the usual
ones (a round sphere has positive Ricci curvature).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from solitonkit.geometry.specs import MetricSpec

DET_THRESHOLD = 1e-12


class SingularMetricError(ValueError):
    pass


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class PointFrame:
    point: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    dg: np.ndarray
    d2g: np.ndarray
    dg_inv: np.ndarray
    christoffel: np.ndarray
    dchristoffel: np.ndarray
    riemann: np.ndarray
    riemann_down: np.ndarray
    ricci: np.ndarray
    ricci_operator: np.ndarray
    scalar: float
    # only present for derivative_order=3
    d3g: np.ndarray | None = None
    d2christoffel: np.ndarray | None = None
    driemann: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @property
    def curvature_form(self) -> np.ndarray:
        """``Rm[a, b, c, e] = g(R(d_a, d_b) d_c, d_e)``."""
        return np.einsum("eabc->abce", self.riemann_down)


def _riemann(gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    # standard R^l_{k i j} = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik,
    # then stored as [l, i, j, k] with the opposite sign
    std = (
        np.einsum("ljki->lijk", dgamma)
        - np.einsum("likj->lijk", dgamma)
        + np.einsum("lim,mjk->lijk", gamma, gamma)
        - np.einsum("ljm,mik->lijk", gamma, gamma)
    )
    return -std


def frame_at(M: MetricSpec, p: Sequence[float], derivative_order: int = 2) -> PointFrame:
    """Evaluate metric, connection and curvature of ``M`` at ``p``.

    ``derivative_order=3`` additionally computes third metric partials and
    the partial derivatives of the Riemann tensor (needed by the
    differential Bianchi checks).
    """
    if derivative_order not in (2, 3):
        raise ValueError("derivative_order must be 2 or 3")
    p = M.chart.point(p)
    arrays = M.derivative_arrays(p, derivative_order)
    g, dg, d2g = arrays[0], arrays[1], arrays[2]
    det = np.linalg.det(g)
    if not abs(det) > DET_THRESHOLD:
        raise SingularMetricError(f"|det g| = {abs(det):.3g} at {p}")
    g_inv = np.linalg.inv(g)
    dg_inv = -np.einsum("ka,abm,bl->klm", g_inv, dg, g_inv)

    # Gamma_{l i j} = (d_i g_lj + d_j g_il - d_l g_ij) / 2
    gamma_low = 0.5 * (
        np.einsum("lji->lij", dg) + np.einsum("ilj->lij", dg) - np.einsum("ijl->lij", dg)
    )
    gamma = np.einsum("kl,lij->kij", g_inv, gamma_low)

    dgamma_low = 0.5 * (
        np.einsum("ljim->lijm", d2g) + np.einsum("iljm->lijm", d2g) - np.einsum("ijlm->lijm", d2g)
    )
    dgamma = np.einsum("klm,lij->kijm", dg_inv, gamma_low) + np.einsum("kl,lijm->kijm", g_inv, dgamma_low)

    riemann = _riemann(gamma, dgamma)
    riemann_down = np.einsum("lm,mijk->lijk", g, riemann)
    ricci = np.einsum("kikj->ij", riemann)
    scalar = float(np.einsum("ij,ij->", g_inv, ricci))
    extra = {}
    if derivative_order == 3:
        d3g = arrays[3]
        d2g_inv = -(
            np.einsum("kaA,abB,bl->klAB", dg_inv, dg, g_inv)
            + np.einsum("ka,abAB,bl->klAB", g_inv, d2g, g_inv)
            + np.einsum("ka,abB,blA->klAB", g_inv, dg, dg_inv)
        )
        d2gamma_low = 0.5 * (
            np.einsum("ljimn->lijmn", d3g) + np.einsum("iljmn->lijmn", d3g) - np.einsum("ijlmn->lijmn", d3g)
        )
        d2gamma = (
            np.einsum("klmn,lij->kijmn", d2g_inv, gamma_low)
            + np.einsum("klm,lijn->kijmn", dg_inv, dgamma_low)
            + np.einsum("kln,lijm->kijmn", dg_inv, dgamma_low)
            + np.einsum("kl,lijmn->kijmn", g_inv, d2gamma_low)
        )
        # d_n of the standard-sign expression used in _riemann
        dstd = (
            np.einsum("ljkin->lijkn", d2gamma)
            - np.einsum("likjn->lijkn", d2gamma)
            + np.einsum("limn,mjk->lijkn", dgamma, gamma)
            + np.einsum("lim,mjkn->lijkn", gamma, dgamma)
            - np.einsum("ljmn,mik->lijkn", dgamma, gamma)
            - np.einsum("ljm,mikn->lijkn", gamma, dgamma)
        )
        extra = dict(d3g=d3g, d2christoffel=d2gamma, driemann=-dstd)

    return PointFrame(
        point=p,
        g=g,
        g_inv=g_inv,
        dg=dg,
        d2g=d2g,
        dg_inv=dg_inv,
        christoffel=gamma,
        dchristoffel=dgamma,
        riemann=riemann,
        riemann_down=riemann_down,
        ricci=ricci,
        ricci_operator=g_inv @ ricci,
        scalar=scalar,
        **extra,
    )


def signature(frame_or_g: PointFrame | np.ndarray, tol: float = 0.0) -> tuple[int, int]:
    """``(negative, positive)`` eigenvalue counts of the metric matrix."""
    g = frame_or_g.g if isinstance(frame_or_g, PointFrame) else frame_or_g
    eig = np.linalg.eigvalsh(g)
    return int(np.sum(eig < -tol)), int(np.sum(eig > tol))


def kulkarni_nomizu(h: np.ndarray, k: np.ndarray) -> np.ndarray:
    """``(h o k)(a, b, c, e) = h_ac k_be + h_be k_ac - h_ae k_bc - h_bc k_ae``."""
    return (
        np.einsum("ac,be->abce", h, k)
        + np.einsum("be,ac->abce", h, k)
        - np.einsum("ae,bc->abce", h, k)
        - np.einsum("bc,ae->abce", h, k)
    )


def schouten(frame: PointFrame) -> np.ndarray:
    d = frame.dim
    return (frame.ricci - frame.scalar * frame.g / (2 * (d - 1))) / (d - 2)


def weyl_tensor(frame: PointFrame) -> np.ndarray:
    """Lowered Weyl tensor in the ``curvature_form`` layout.

    Zero for ``d == 3``; ``d < 3`` raises DimensionError.
    """
    d = frame.dim
    if d < 3:
        raise DimensionError("the Weyl tensor needs dimension at least 3")
    if d == 3:
        return np.zeros((3, 3, 3, 3))
    return frame.curvature_form - kulkarni_nomizu(frame.g, schouten(frame))


def weyl_at(M: MetricSpec, p: Sequence[float]) -> np.ndarray:
    if M.dim < 3:
        raise DimensionError("the Weyl tensor needs dimension at least 3")
    return weyl_tensor(frame_at(M, p))


def riemann_symmetry_defects(frame: PointFrame) -> dict[str, float]:
    """Largest violations of the algebraic Riemann symmetries."""
    rm = frame.curvature_form
    R = frame.riemann
    return {
        "antisymmetry_first_pair": float(np.max(np.abs(rm + np.einsum("abce->bace", rm)))),
        "antisymmetry_second_pair": float(np.max(np.abs(rm + np.einsum("abce->abec", rm)))),
        "pair_symmetry": float(np.max(np.abs(rm - np.einsum("abce->ceab", rm)))),
        "first_bianchi": float(
            np.max(np.abs(R + np.einsum("ljki->lijk", R) + np.einsum("lkij->lijk", R)))
        ),
    }


def _require_order3(frame: PointFrame):
    if frame.driemann is None:
        raise ValueError("frame was computed without third derivatives (use derivative_order=3)")


def covariant_riemann(frame: PointFrame) -> np.ndarray:
    """``nabla_m R^l_ijk`` stored as ``[l, i, j, k, m]``."""
    _require_order3(frame)
    G, R = frame.christoffel, frame.riemann
    return (
        frame.driemann
        + np.einsum("lmp,pijk->lijkm", G, R)
        - np.einsum("pmi,lpjk->lijkm", G, R)
        - np.einsum("pmj,lipk->lijkm", G, R)
        - np.einsum("pmk,lijp->lijkm", G, R)
    )


def second_bianchi_defect(frame: PointFrame) -> float:
    """Max of ``nabla_m R^l_ijk + nabla_i R^l_jmk + nabla_j R^l_mik``."""
    nR = covariant_riemann(frame)
    cyc = nR + np.einsum("ljmki->lijkm", nR) + np.einsum("lmikj->lijkm", nR)
    return float(np.max(np.abs(cyc)))


def contracted_bianchi_defect(frame: PointFrame) -> float:
    """Max over ``i`` of ``|d_i Sc - 2 g^jk nabla_j Ric_ki|``."""
    _require_order3(frame)
    G, Ric = frame.christoffel, frame.ricci
    dric = np.einsum("kikjm->ijm", frame.driemann)
    nric = dric - np.einsum("pmi,pj->ijm", G, Ric) - np.einsum("pmj,ip->ijm", G, Ric)
    dsc = np.einsum("ijm,ij->m", frame.dg_inv, Ric) + np.einsum("ij,ijm->m", frame.g_inv, dric)
    div = np.einsum("jk,kij->i", frame.g_inv, nric)
    return float(np.max(np.abs(dsc - 2.0 * div)))
