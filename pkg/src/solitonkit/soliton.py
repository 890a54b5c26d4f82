"""Ricci soliton residuals and the diagnostics attached to them.

A candidate is either a vector field ``X`` (checked against
``L_X g + Ric = lambda g``) or a potential ``h`` (checked against
``2 Hes h + Ric = lambda g``). For potentials the gradient is always
recomputed from ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from solitonkit.geometry import (
    MetricSpec,
    PointFrame,
    ScalarFieldSpec,
    VectorFieldSpec,
    covariant_from_jet,
    divergence_from_jet,
    field_jet,
    frame_at,
    gradient_jet,
    hessian_at,
    lie_derivative_from_jet,
)


class Kind(str, Enum):
    VECTOR = "vector"
    GRADIENT = "gradient"


class Classification(str, Enum):
    SHRINKING = "shrinking"
    STEADY = "steady"
    EXPANDING = "expanding"


@dataclass(frozen=True)
class SolitonCandidate:
    kind: Kind
    lam: float
    field: VectorFieldSpec | None = None
    potential: ScalarFieldSpec | None = None
    label: str = ""

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise ValueError(f"lambda must be finite, got {self.lam!r}")
        object.__setattr__(self, "lam", float(self.lam))
        if self.kind is Kind.VECTOR and (self.field is None or self.potential is not None):
            raise ValueError("a vector candidate carries exactly a vector field")
        if self.kind is Kind.GRADIENT and (self.potential is None or self.field is not None):
            raise ValueError("a gradient candidate carries exactly a potential")

    @classmethod
    def vector(cls, field: VectorFieldSpec, lam: float, label: str = "") -> SolitonCandidate:
        return cls(Kind.VECTOR, lam, field=field, label=label)

    @classmethod
    def gradient(cls, potential: ScalarFieldSpec, lam: float, label: str = "") -> SolitonCandidate:
        return cls(Kind.GRADIENT, lam, potential=potential, label=label)

    @property
    def has_antiderivative(self) -> bool:
        spec = self.field if self.kind is Kind.VECTOR else self.potential
        return spec.has_antiderivative

    def with_lambda(self, lam: float) -> SolitonCandidate:
        return SolitonCandidate(self.kind, lam, self.field, self.potential, self.label)


@dataclass(frozen=True)
class DiagnosticsResult:
    norm_sq_grad: float
    geodesic_defect: float
    recurrence_defect: float
    hamilton_value: float
    nilpotency_defect: float
    ricci_grad_defect: float


def _frame(M, p, frame):
    return frame if frame is not None else frame_at(M, p)


def candidate_jet(M: MetricSpec, c: SolitonCandidate, frame: PointFrame):
    """Values and first partials of the candidate's vector field at the frame point."""
    if c.kind is Kind.VECTOR:
        return field_jet(M, c.field, frame.point)
    return gradient_jet(M, c.potential, frame.point, frame)


def soliton_residual_at(M: MetricSpec, c: SolitonCandidate, p: Sequence[float], frame: PointFrame | None = None):
    """``L_X g + Ric - lambda g`` (for gradient candidates ``X = grad h``)."""
    frame = _frame(M, p, frame)
    lie = lie_derivative_from_jet(frame, *candidate_jet(M, c, frame))
    return lie + frame.ricci - c.lam * frame.g


def gradient_residual_at(M: MetricSpec, c: SolitonCandidate, p: Sequence[float], frame: PointFrame | None = None):
    """``2 Hes h + Ric - lambda g``."""
    if c.kind is not Kind.GRADIENT:
        raise ValueError("gradient_residual_at needs a gradient candidate")
    frame = _frame(M, p, frame)
    return 2.0 * hessian_at(M, c.potential, p, frame) + frame.ricci - c.lam * frame.g


def residual_at(M, c: SolitonCandidate, p, frame: PointFrame | None = None):
    """The defining equation appropriate to the candidate's kind."""
    if c.kind is Kind.GRADIENT:
        return gradient_residual_at(M, c, p, frame)
    return soliton_residual_at(M, c, p, frame)


def classify(lam: float) -> Classification:
    if not math.isfinite(lam):
        raise ValueError(f"lambda must be finite, got {lam!r}")
    if lam > 0:
        return Classification.SHRINKING
    if lam < 0:
        return Classification.EXPANDING
    return Classification.STEADY


def lambda_consistency_at(M, c: SolitonCandidate, p, frame: PointFrame | None = None) -> float:
    """``lambda - (2 div X + Sc) / dim``; zero for a genuine soliton."""
    frame = _frame(M, p, frame)
    div = divergence_from_jet(frame, *candidate_jet(M, c, frame))
    return c.lam - (2.0 * div + frame.scalar) / frame.dim


def hamilton_value_at(M, c: SolitonCandidate, p, frame: PointFrame | None = None) -> float:
    """``Sc + 2 |grad h|^2 - 2 lambda h``, constant on a gradient soliton."""
    if c.kind is not Kind.GRADIENT:
        raise ValueError("the Hamilton identity applies to gradient candidates")
    frame = _frame(M, p, frame)
    h, dh, _ = c.potential.jet(frame.point, M.params)
    grad = frame.g_inv @ dh
    return frame.scalar + 2.0 * float(grad @ frame.g @ grad) - 2.0 * c.lam * h


def homothety_defect_at(M, X: VectorFieldSpec, c: float, p, frame: PointFrame | None = None) -> float:
    """Max entry of ``|L_X g - c g|``; ``c = 0`` measures the Killing defect."""
    frame = _frame(M, p, frame)
    lie = lie_derivative_from_jet(frame, *field_jet(M, X, frame.point))
    return float(np.max(np.abs(lie - c * frame.g)))


def nilpotency_defect_at(M, p, frame: PointFrame | None = None) -> tuple[float, float]:
    """``(max |Q^2|, |Sc|)`` for the Ricci operator ``Q``."""
    frame = _frame(M, p, frame)
    Q = frame.ricci_operator
    return float(np.max(np.abs(Q @ Q))), abs(frame.scalar)


def recurrence_defect(nabla: np.ndarray, X: np.ndarray) -> float:
    """Normalized parallelism defect between each ``nabla_i X`` and ``X``.

    For every direction ``i`` the 2x2 minors of ``[nabla_i X; X]`` vanish
    exactly when ``nabla_i X`` is a multiple of ``X``.
    """
    xs = float(np.max(np.abs(X)))
    if xs == 0.0:
        return 0.0
    worst = 0.0
    for row in nabla:
        minors = np.outer(row, X) - np.outer(X, row)
        scale = 1.0 + xs * float(np.max(np.abs(row)))
        worst = max(worst, float(np.max(np.abs(minors))) / scale)
    return worst


def gradient_diagnostics_at(M, h: ScalarFieldSpec, p, lam: float = 0.0, frame: PointFrame | None = None) -> DiagnosticsResult:
    frame = _frame(M, p, frame)
    X, dX = gradient_jet(M, h, frame.point, frame)
    nabla = covariant_from_jet(frame, X, dX)
    hval, _, _ = h.jet(frame.point, M.params)
    norm_sq = float(X @ frame.g @ X)
    Q = frame.ricci_operator
    return DiagnosticsResult(
        norm_sq_grad=norm_sq,
        geodesic_defect=float(np.max(np.abs(X @ nabla))),
        recurrence_defect=recurrence_defect(nabla, X),
        hamilton_value=frame.scalar + 2.0 * norm_sq - 2.0 * lam * hval,
        nilpotency_defect=float(np.max(np.abs(Q @ Q))),
        ricci_grad_defect=float(np.max(np.abs(frame.ricci @ X))),
    )
