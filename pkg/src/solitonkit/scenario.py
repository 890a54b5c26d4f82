"""Scenario files: parsing, validation and point sampling.

A scenario is an INI-style file with ``[metric]``, ``[candidate]``,
``[sampling]`` and ``[checks]`` sections (plus an optional
``[scenario] name = ...``). Keys are case sensitive. See the README for
the full key reference.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from solitonkit import families as fam
from solitonkit.expr import ExpressionError, lorentz_chart
from solitonkit.expr.errors import EvaluationError
from solitonkit.geometry import DET_THRESHOLD, MetricSpec, ScalarFieldSpec, VectorFieldSpec
from solitonkit.soliton import SolitonCandidate

CHECKS = (
    "residual",
    "lambda_consistency",
    "hamilton",
    "diagnostics",
    "nilpotency",
    "weyl",
    "bianchi",
    "signature",
    "killing_defect",
)
CANDIDATE_CHECKS = {"residual", "lambda_consistency", "hamilton", "diagnostics", "killing_defect"}
GRADIENT_CHECKS = {"hamilton", "diagnostics"}
FAMILY_NAMES = ("egorov", "cahen_wallach", "epsilon", "custom")
DEFAULT_TOL = 1e-8
QUADRATURE_TOL = 1e-6
DEFAULT_BOX = (-1.0, 1.0)
MAX_ATTEMPTS_FACTOR = 100


class ScenarioError(ValueError):
    """Malformed or invalid scenario input (CLI exit code 2)."""


class SamplingError(ScenarioError):
    pass


@dataclass
class Scenario:
    name: str
    family: str
    metric: MetricSpec
    candidate: SolitonCandidate | None
    box: dict[str, tuple[float, float]]
    count: int
    seed: int
    checks: tuple[str, ...]
    tolerance: float | None = None
    homothety_constant: float = 0.0
    egorov: fam.EgorovParams | None = None

    @property
    def effective_tolerance(self) -> float:
        if self.tolerance is not None:
            return self.tolerance
        quadrature = self.metric.has_antiderivative or (
            self.candidate is not None and self.candidate.has_antiderivative
        )
        return QUADRATURE_TOL if quadrature else DEFAULT_TOL


# ---------------------------------------------------------------- value parsing


def _float(text: str, key: str) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise ScenarioError(f"{key}: expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise ScenarioError(f"{key}: value must be finite")
    return value


def _floats(text: str, key: str) -> list[float]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ScenarioError(f"{key}: expected a comma-separated list of numbers")
    return [_float(p, key) for p in parts]


def _matrix(text: str, key: str) -> list[list[float]]:
    rows = [r for r in text.split(";") if r.strip()]
    matrix = [_floats(r, key) for r in rows]
    if len({len(r) for r in matrix}) > 1:
        raise ScenarioError(f"{key}: matrix rows have different lengths")
    return matrix


def _int(text: str, key: str, minimum: int | None = None) -> int:
    try:
        value = int(text.strip())
    except ValueError:
        raise ScenarioError(f"{key}: expected an integer, got {text!r}") from None
    if minimum is not None and value < minimum:
        raise ScenarioError(f"{key}: must be at least {minimum}")
    return value


def _params(text: str | None) -> dict[str, float]:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ScenarioError(f"parameters: expected name=value, got {item.strip()!r}")
        out[name.strip()] = _float(value, f"parameters.{name.strip()}")
    return out


def _require(section: Mapping[str, str], key: str, where: str) -> str:
    if key not in section:
        raise ScenarioError(f"missing key {key!r} in [{where}]")
    return section[key]


# ---------------------------------------------------------------- builders


def _build_metric(sec: Mapping[str, str]):
    family = _require(sec, "family", "metric").strip()
    if family not in FAMILY_NAMES:
        raise ScenarioError(f"unknown family {family!r}; valid families: {', '.join(FAMILY_NAMES)}")
    if family == "custom":
        coords = [c.strip() for c in _require(sec, "coordinates", "metric").split(",") if c.strip()]
        params = _params(sec.get("parameters"))
        d = len(coords)
        comps: list[list[str]] = [["0"] * d for _ in range(d)]
        for key, value in sec.items():
            if not key.startswith("g."):
                continue
            _, a, b = (key.split(".") + ["", ""])[:3]
            if a not in coords or b not in coords:
                raise ScenarioError(f"{key}: unknown coordinate in component key")
            i, j = coords.index(a), coords.index(b)
            comps[i][j] = comps[j][i] = value
        return family, MetricSpec(coords, comps, params), None
    n = _int(_require(sec, "n", "metric"), "n", minimum=1)
    if family == "egorov":
        return family, None, n  # built once the sampling box is known
    if family == "cahen_wallach":
        params = fam.CWParams(n, _floats(_require(sec, "kappa", "metric"), "kappa"))
        return family, fam.cw_metric(params), params
    eps = _float(_require(sec, "epsilon", "metric"), "epsilon")
    return family, fam.epsilon_metric(n, eps), fam.epsilon_params(n, eps)


def _egorov_params(sec: Mapping[str, str], n: int, u_box: tuple[float, float]) -> fam.EgorovParams:
    f = _require(sec, "f", "metric")
    domain = tuple(_floats(sec["u_domain"], "u_domain")) if "u_domain" in sec else u_box
    if len(domain) != 2:
        raise ScenarioError("u_domain: expected two numbers")
    if not (domain[0] <= u_box[0] and u_box[1] <= domain[1]):
        raise ScenarioError(f"sampling box for u {u_box} is not inside u_domain {domain}")
    return fam.EgorovParams(n, f, domain, _params(sec.get("parameters")))


def _build_candidate(sec: Mapping[str, str], family: str, metric: MetricSpec, params) -> SolitonCandidate | None:
    kind = sec.get("kind", "none").strip()
    if kind == "none":
        return None
    lam = _float(sec.get("lambda", "0"), "lambda")
    build_lam = _float(sec["build_lambda"], "build_lambda") if "build_lambda" in sec else lam

    def get(key, default="0"):
        return _float(sec.get(key, default), key)

    def vec(key):
        return _floats(sec[key], key) if key in sec else None

    def mat(key):
        return _matrix(sec[key], key) if key in sec else None

    # explicit fields are accepted on every family
    if kind == "vector":
        comps = [sec.get(f"X.{c}", "0") for c in metric.chart]
        unknown = [k for k in sec if k.startswith("X.") and k[2:] not in metric.chart]
        if unknown:
            raise ScenarioError(f"unknown coordinates in {unknown}")
        field_ = VectorFieldSpec(metric.chart, comps, metric.params)
        return SolitonCandidate.vector(field_, lam, label="custom-vector")
    if kind == "scalar":
        h = ScalarFieldSpec(metric.chart, _require(sec, "h", "candidate"), metric.params)
        return SolitonCandidate.gradient(h, lam, label="custom-scalar")
    if family == "custom":
        raise ScenarioError(f"custom metrics take candidate kind vector or scalar, not {kind!r}")
    if kind not in ("particular", "general", "gradient"):
        raise ScenarioError(
            f"unknown candidate kind {kind!r}; valid: particular, general, gradient, vector, scalar, none"
        )
    if family == "egorov":
        if kind == "particular":
            cand = fam.egorov_particular_soliton(params, build_lam, sec.get("primitive"))
        elif kind == "general":
            consts = fam.EgorovGeneralConstants(
                a=get("a"), b=get("b"), K=get("K"), c0=get("c0"), c=vec("c"), k=vec("k"), A=mat("A")
            )
            cand = fam.egorov_general_soliton(params, build_lam, consts)
        else:
            cand = fam.egorov_gradient_potential(params, lam, get("alpha"), get("beta"))
    else:
        if kind == "particular":
            cand = fam.cw_particular_soliton(params, build_lam)
        elif kind == "general":
            consts = fam.CWGeneralConstants(a=get("a"), b=get("b"), c=mat("c"), d1=vec("d1"), d2=vec("d2"))
            cand = fam.cw_general_soliton(params, build_lam, consts)
        else:
            cand = fam.cw_gradient_potential(params, get("alpha"), get("beta"), lam)
    return cand.with_lambda(lam)


def _box(sec: Mapping[str, str], coords) -> dict[str, tuple[float, float]]:
    box = {c: DEFAULT_BOX for c in coords}
    for key, value in sec.items():
        if not key.startswith("box."):
            continue
        name = key[4:]
        if name not in box:
            raise ScenarioError(f"{key}: {name!r} is not a coordinate ({', '.join(coords)})")
        lo_hi = _floats(value, key)
        if len(lo_hi) != 2 or not lo_hi[0] < lo_hi[1]:
            raise ScenarioError(f"{key}: expected a nonempty interval 'lo, hi'")
        box[name] = (lo_hi[0], lo_hi[1])
    return box


def parse_scenario(text: str, default_name: str = "scenario") -> Scenario:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ScenarioError(f"malformed scenario file: {exc}") from None
    for required in ("metric", "sampling", "checks"):
        if not cp.has_section(required):
            raise ScenarioError(f"missing section [{required}]")
    known = {"scenario", "metric", "candidate", "sampling", "checks"}
    extra = set(cp.sections()) - known
    if extra:
        raise ScenarioError(f"unknown sections {sorted(extra)}")
    try:
        return _parse_sections(cp, default_name)
    except (fam.FamilyError, ExpressionError) as exc:
        raise ScenarioError(str(exc)) from exc
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(str(exc)) from exc


def _parse_sections(cp: configparser.ConfigParser, default_name: str) -> Scenario:
    msec = cp["metric"]
    family, metric, extra = _build_metric(msec)
    n = extra if family == "egorov" else None
    coords = metric.chart.coordinates if metric is not None else lorentz_chart(n).coordinates
    ssec = cp["sampling"]
    box = _box(ssec, coords)
    count = _int(_require(ssec, "count", "sampling"), "count", minimum=1)
    seed = _int(_require(ssec, "seed", "sampling"), "seed", minimum=0)
    if seed >= 2**64:
        raise ScenarioError("seed must fit in an unsigned 64-bit integer")
    egorov = None
    params = extra
    if family == "egorov":
        egorov = _egorov_params(msec, n, box["u"])
        metric = fam.egorov_metric(egorov)
        params = egorov
    csec = cp["candidate"] if cp.has_section("candidate") else {}
    candidate = _build_candidate(csec, family, metric, params)

    chsec = cp["checks"]
    checks = tuple(c.strip() for c in _require(chsec, "enable", "checks").split(",") if c.strip())
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise ScenarioError(f"unknown checks {unknown}; valid checks: {', '.join(CHECKS)}")
    if not checks:
        raise ScenarioError("no checks enabled")
    if candidate is None and CANDIDATE_CHECKS & set(checks):
        raise ScenarioError(f"checks {sorted(CANDIDATE_CHECKS & set(checks))} need a [candidate]")
    if candidate is not None and candidate.kind.value == "vector" and GRADIENT_CHECKS & set(checks):
        raise ScenarioError(f"checks {sorted(GRADIENT_CHECKS & set(checks))} need a gradient candidate")
    tolerance = _float(chsec["tolerance"], "tolerance") if "tolerance" in chsec else None
    if tolerance is not None and tolerance <= 0:
        raise ScenarioError("tolerance must be positive")
    homothety = _float(chsec.get("homothety_constant", "0"), "homothety_constant")
    name = cp["scenario"].get("name", default_name) if cp.has_section("scenario") else default_name
    return Scenario(
        name=name,
        family=family,
        metric=metric,
        candidate=candidate,
        box=box,
        count=count,
        seed=seed,
        checks=checks,
        tolerance=tolerance,
        homothety_constant=homothety,
        egorov=egorov,
    )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from None
    return parse_scenario(text, default_name=path.stem)


# ---------------------------------------------------------------- sampling


def admissible(s: Scenario, p: np.ndarray) -> bool:
    try:
        if s.egorov is not None and not s.egorov.f_at(p[0]) > fam.POSITIVITY_FLOOR:
            return False
        return abs(np.linalg.det(s.metric.matrix_at(p))) > DET_THRESHOLD
    except EvaluationError:
        return False


def sample_points(s: Scenario) -> tuple[list[np.ndarray], int]:
    """Draw ``s.count`` admissible points uniformly from the box.

    Uses numpy's PCG64 generator seeded with ``s.seed``; inadmissible
    draws are discarded and redrawn, up to ``100 * count`` attempts.
    Returns the points and the number of rejected draws.
    """
    rng = np.random.Generator(np.random.PCG64(s.seed))
    coords = s.metric.chart.coordinates
    lo = np.array([s.box[c][0] for c in coords])
    hi = np.array([s.box[c][1] for c in coords])
    points: list[np.ndarray] = []
    rejected = 0
    for _ in range(MAX_ATTEMPTS_FACTOR * s.count):
        p = lo + (hi - lo) * rng.random(len(coords))
        if admissible(s, p):
            points.append(p)
            if len(points) == s.count:
                return points, rejected
        else:
            rejected += 1
    raise SamplingError(
        f"only {len(points)} of {s.count} admissible points after {MAX_ATTEMPTS_FACTOR * s.count} draws"
    )
