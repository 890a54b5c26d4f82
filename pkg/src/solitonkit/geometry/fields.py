"""Pointwise operators acting on vector and scalar fields.

All ``*_at`` functions accept an optional precomputed ``frame`` so callers
evaluating several quantities at one point compute the curvature once.
"""

from __future__ import annotations

from enum import Enum
from typing import Sequence

import numpy as np

from solitonkit.geometry.frame import PointFrame, frame_at
from solitonkit.geometry.specs import MetricSpec, ScalarFieldSpec, VectorFieldSpec

ZERO_TOL = 1e-12
NULL_TOL = 1e-10


class Causal(str, Enum):
    TIMELIKE = "timelike"
    NULL = "null"
    SPACELIKE = "spacelike"
    ZERO = "zero"


def _frame(M, p, frame):
    return frame if frame is not None else frame_at(M, p)


def _check_chart(M: MetricSpec, field):
    if field.chart != M.chart:
        raise ValueError(f"field chart {field.chart.coordinates} differs from metric chart {M.chart.coordinates}")


def lie_derivative_from_jet(frame: PointFrame, X: np.ndarray, dX: np.ndarray) -> np.ndarray:
    """``(L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k``."""
    half = 0.5 * np.einsum("k,ijk->ij", X, frame.dg) + np.einsum("kj,ki->ij", frame.g, dX)
    # exact symmetry regardless of summation order
    return half + half.T


def covariant_from_jet(frame: PointFrame, X: np.ndarray, dX: np.ndarray) -> np.ndarray:
    """``nabla_i X^k`` stored as ``[i, k]``."""
    return dX.T + np.einsum("kim,m->ik", frame.christoffel, X)


def field_jet(M: MetricSpec, X: VectorFieldSpec, p: Sequence[float]):
    _check_chart(M, X)
    return X.jet(M.chart.point(p), M.params)


def gradient_jet(M: MetricSpec, h: ScalarFieldSpec, p: Sequence[float], frame: PointFrame | None = None):
    """``(grad h, d grad h)`` at ``p``, with ``[k, i] = d_i (grad h)^k``."""
    _check_chart(M, h)
    frame = _frame(M, p, frame)
    _, dh, d2h = h.jet(frame.point, M.params)
    X = frame.g_inv @ dh
    dX = np.einsum("kji,j->ki", frame.dg_inv, dh) + frame.g_inv @ d2h
    return X, dX


def lie_derivative_metric_at(M, X: VectorFieldSpec, p, frame: PointFrame | None = None) -> np.ndarray:
    frame = _frame(M, p, frame)
    return lie_derivative_from_jet(frame, *field_jet(M, X, frame.point))


def gradient_at(M, h: ScalarFieldSpec, p, frame: PointFrame | None = None) -> np.ndarray:
    """Contravariant gradient ``g^ij d_j h``."""
    _check_chart(M, h)
    frame = _frame(M, p, frame)
    _, dh, _ = h.jet(frame.point, M.params)
    return frame.g_inv @ dh


def hessian_at(M, h: ScalarFieldSpec, p, frame: PointFrame | None = None) -> np.ndarray:
    """``Hes_ij = d_i d_j h - Gamma^k_ij d_k h``."""
    _check_chart(M, h)
    frame = _frame(M, p, frame)
    _, dh, d2h = h.jet(frame.point, M.params)
    return d2h - np.einsum("kij,k->ij", frame.christoffel, dh)


def divergence_from_jet(frame: PointFrame, X: np.ndarray, dX: np.ndarray) -> float:
    return float(np.trace(dX) + np.einsum("iik,k->", frame.christoffel, X))


def divergence_at(M, X: VectorFieldSpec, p, frame: PointFrame | None = None) -> float:
    """``div X = d_i X^i + Gamma^i_ik X^k``."""
    frame = _frame(M, p, frame)
    return divergence_from_jet(frame, *field_jet(M, X, frame.point))


def covariant_derivative_at(M, X: VectorFieldSpec, p, frame: PointFrame | None = None) -> np.ndarray:
    """``nabla_i X^k = d_i X^k + Gamma^k_im X^m`` as a ``[i, k]`` array."""
    frame = _frame(M, p, frame)
    return covariant_from_jet(frame, *field_jet(M, X, frame.point))


def causal_character(g: np.ndarray, X: np.ndarray) -> Causal:
    size = float(np.max(np.abs(X))) if X.size else 0.0
    if size <= ZERO_TOL:
        return Causal.ZERO
    s = float(X @ g @ X)
    if abs(s) <= NULL_TOL * (1.0 + size**2):
        return Causal.NULL
    return Causal.TIMELIKE if s < 0 else Causal.SPACELIKE


def causal_character_at(M, X: VectorFieldSpec, p, frame: PointFrame | None = None) -> Causal:
    p = M.chart.point(p)
    g = frame.g if frame is not None else M.matrix_at(p)
    values, _ = field_jet(M, X, p)
    return causal_character(g, values)
