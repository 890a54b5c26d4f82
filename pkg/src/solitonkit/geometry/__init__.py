"""Pointwise pseudo-Riemannian tensor calculus."""

from solitonkit.geometry.fields import (
    Causal,
    causal_character,
    causal_character_at,
    covariant_derivative_at,
    covariant_from_jet,
    divergence_at,
    divergence_from_jet,
    field_jet,
    gradient_at,
    gradient_jet,
    hessian_at,
    lie_derivative_from_jet,
    lie_derivative_metric_at,
)
from solitonkit.geometry.frame import (
    DET_THRESHOLD,
    DimensionError,
    PointFrame,
    SingularMetricError,
    contracted_bianchi_defect,
    covariant_riemann,
    frame_at,
    kulkarni_nomizu,
    riemann_symmetry_defects,
    schouten,
    second_bianchi_defect,
    signature,
    weyl_at,
    weyl_tensor,
)
from solitonkit.geometry.specs import MetricSpec, ScalarFieldSpec, VectorFieldSpec

__all__ = [
    "Causal",
    "DET_THRESHOLD",
    "DimensionError",
    "MetricSpec",
    "PointFrame",
    "ScalarFieldSpec",
    "SingularMetricError",
    "VectorFieldSpec",
    "causal_character",
    "causal_character_at",
    "contracted_bianchi_defect",
    "covariant_derivative_at",
    "covariant_from_jet",
    "covariant_riemann",
    "divergence_at",
    "divergence_from_jet",
    "field_jet",
    "frame_at",
    "gradient_at",
    "gradient_jet",
    "hessian_at",
    "kulkarni_nomizu",
    "lie_derivative_from_jet",
    "lie_derivative_metric_at",
    "riemann_symmetry_defects",
    "schouten",
    "second_bianchi_defect",
    "signature",
    "weyl_at",
    "weyl_tensor",
]
