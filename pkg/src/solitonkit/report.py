"""Run a scenario over its sample and render the verdict."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, TextIO

import numpy as np

from solitonkit.expr import ExpressionError
from solitonkit.geometry import (
    Causal,
    PointFrame,
    SingularMetricError,
    causal_character,
    contracted_bianchi_defect,
    frame_at,
    riemann_symmetry_defects,
    second_bianchi_defect,
    signature,
    weyl_tensor,
)
from solitonkit.scenario import Scenario, sample_points
from solitonkit.soliton import (
    candidate_jet,
    classify,
    gradient_diagnostics_at,
    hamilton_value_at,
    lambda_consistency_at,
    lie_derivative_from_jet,
    nilpotency_defect_at,
    residual_at,
)

POINT_ERRORS = (ExpressionError, SingularMetricError, ArithmeticError, np.linalg.LinAlgError)


@dataclass
class CheckRecord:
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    errors: int = 0
    details: dict[str, float] = field(default_factory=dict)


@dataclass
class Report:
    scenario: str
    seed: int
    family: str
    points_evaluated: int
    points_rejected: int
    lam: float | None
    classification: str | None
    tolerance: float
    checks: list[CheckRecord]
    causal: dict[str, int]

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "family": self.family,
            "points_evaluated": self.points_evaluated,
            "points_rejected": self.points_rejected,
            "lambda": self.lam,
            "classification": self.classification,
            "tolerance": self.tolerance,
            "checks": [
                {
                    "name": c.name,
                    "max_residual": _finite(c.max_residual),
                    "tolerance": c.tolerance,
                    "pass": c.passed,
                    "errors": c.errors,
                    "details": {k: _finite(v) for k, v in c.details.items()},
                }
                for c in self.checks
            ],
            "causal_character": dict(self.causal),
            "overall_pass": self.overall_pass,
        }


def _finite(x: float) -> float | None:
    return float(x) if math.isfinite(x) else None


class _Accumulator:
    """Order-independent max/min reduction for one check."""

    def __init__(self):
        self.values: dict[str, list[float]] = {}
        self.errors = 0

    def add(self, **values: float):
        for k, v in values.items():
            self.values.setdefault(k, []).append(float(v))


def _evaluate_point(s: Scenario, frame: PointFrame, acc: dict[str, _Accumulator]):
    M, c = s.metric, s.candidate
    for name in s.checks:
        try:
            _CHECKS[name](s, M, c, frame, acc[name])
        except POINT_ERRORS:
            acc[name].errors += 1


def _residual(s, M, c, frame, acc):
    acc.add(value=np.max(np.abs(residual_at(M, c, frame.point, frame))))


def _lambda(s, M, c, frame, acc):
    acc.add(value=abs(lambda_consistency_at(M, c, frame.point, frame)))


def _hamilton(s, M, c, frame, acc):
    acc.add(hamilton=hamilton_value_at(M, c, frame.point, frame))


def _diagnostics(s, M, c, frame, acc):
    r = gradient_diagnostics_at(M, c.potential, frame.point, c.lam, frame)
    acc.add(
        norm_sq_grad=abs(r.norm_sq_grad),
        geodesic_defect=r.geodesic_defect,
        recurrence_defect=r.recurrence_defect,
        ricci_grad_defect=r.ricci_grad_defect,
    )


def _nilpotency(s, M, c, frame, acc):
    q2, sc = nilpotency_defect_at(M, frame.point, frame)
    acc.add(ricci_operator_square=q2, scalar_curvature=sc)


def _weyl(s, M, c, frame, acc):
    acc.add(value=np.max(np.abs(weyl_tensor(frame))))


def _bianchi(s, M, c, frame, acc):
    acc.add(
        **riemann_symmetry_defects(frame),
        second_bianchi=second_bianchi_defect(frame),
        contracted_bianchi=contracted_bianchi_defect(frame),
    )


def _signature(s, M, c, frame, acc):
    neg, pos = signature(frame)
    acc.add(value=0.0 if (neg, pos) == (1, frame.dim - 1) else 1.0)


def _killing(s, M, c, frame, acc):
    X, dX = candidate_jet(M, c, frame)
    lie = lie_derivative_from_jet(frame, X, dX)
    acc.add(value=np.max(np.abs(lie - s.homothety_constant * frame.g)))


_CHECKS: dict[str, Callable] = {
    "residual": _residual,
    "lambda_consistency": _lambda,
    "hamilton": _hamilton,
    "diagnostics": _diagnostics,
    "nilpotency": _nilpotency,
    "weyl": _weyl,
    "bianchi": _bianchi,
    "signature": _signature,
    "killing_defect": _killing,
}


def _record(name: str, acc: _Accumulator, tol: float) -> CheckRecord:
    if name == "signature":
        tol = 0.0
    if name == "hamilton":
        vals = acc.values.get("hamilton", [])
        spread = (max(vals) - min(vals)) if vals else 0.0
        details = {"min": min(vals), "max": max(vals)} if vals else {}
        worst = spread
    else:
        details = {k: max(v) for k, v in sorted(acc.values.items())}
        worst = max(details.values()) if details else 0.0
        if list(details) == ["value"]:
            details = {}
    passed = acc.errors == 0 and math.isfinite(worst) and worst <= tol
    return CheckRecord(name, worst, tol, passed, acc.errors, details)


def run(s: Scenario) -> Report:
    """Evaluate every requested check at every sampled point."""
    points, rejected = sample_points(s)
    order = 3 if "bianchi" in s.checks else 2
    acc = {name: _Accumulator() for name in s.checks}
    causal: Counter[str] = Counter({c.value: 0 for c in Causal})
    frame_errors = 0
    for p in points:
        try:
            frame = frame_at(s.metric, p, order)
        except POINT_ERRORS:
            frame_errors += 1
            continue
        _evaluate_point(s, frame, acc)
        if s.candidate is not None:
            try:
                X, _ = candidate_jet(s.metric, s.candidate, frame)
                causal[causal_character(frame.g, X).value] += 1
            except POINT_ERRORS:
                pass
    for a in acc.values():
        a.errors += frame_errors
    tol = s.effective_tolerance
    lam = s.candidate.lam if s.candidate is not None else None
    return Report(
        scenario=s.name,
        seed=s.seed,
        family=s.family,
        points_evaluated=len(points),
        points_rejected=rejected,
        lam=lam,
        classification=classify(lam).value if lam is not None else None,
        tolerance=tol,
        checks=[_record(name, acc[name], tol) for name in s.checks],
        causal={c.value: causal[c.value] for c in Causal},
    )


def render_json(r: Report) -> str:
    return json.dumps(r.to_dict(), indent=2) + "\n"


def render_text(r: Report) -> str:
    lines = [
        f"scenario: {r.scenario}",
        f"family: {r.family}    seed: {r.seed}    points: {r.points_evaluated} (rejected {r.points_rejected})",
    ]
    if r.lam is not None:
        lines.append(f"lambda: {r.lam:g} ({r.classification})")
    lines.append(f"tolerance: {r.tolerance:g}")
    lines.append("")
    lines.append(f"{'check':<26} {'max residual':>14} {'tolerance':>10} {'errors':>7}  result")
    for c in r.checks:
        lines.append(
            f"{c.name:<26} {c.max_residual:>14.3e} {c.tolerance:>10.1e} {c.errors:>7d}  {'PASS' if c.passed else 'FAIL'}"
        )
        for k, v in c.details.items():
            lines.append(f"  {k:<24} {v:>14.3e}")
    if r.lam is not None:
        tally = ", ".join(f"{k} {v}" for k, v in r.causal.items())
        lines.append("")
        lines.append(f"causal character of candidate: {tally}")
    lines.append("")
    lines.append(f"overall: {'PASS' if r.overall_pass else 'FAIL'}")
    return "\n".join(lines) + "\n"


def render_report(r: Report, fmt: str = "text", out: TextIO | None = None) -> str:
    text = render_json(r) if fmt == "json" else render_text(r)
    if out is not None:
        out.write(text)
    return text
