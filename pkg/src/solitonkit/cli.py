"""Command line entry point.

Exit codes: 0 all checks passed, 1 some check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from itertools import product
from pathlib import Path

import numpy as np

from solitonkit import families
from solitonkit.expr import ExpressionError
from solitonkit.geometry import SingularMetricError, frame_at
from solitonkit.report import render_report, run
from solitonkit.scenario import ScenarioError, load_scenario

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    s = load_scenario(args.scenario)
    if args.samples is not None:
        if args.samples < 1:
            raise ScenarioError("--samples must be at least 1")
        s = replace(s, count=args.samples)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ScenarioError("--seed must be an unsigned 64-bit integer")
        s = replace(s, seed=args.seed)
    if args.tol is not None:
        if args.tol <= 0:
            raise ScenarioError("--tol must be positive")
        s = replace(s, tolerance=args.tol)
    report = run(s)
    _write(render_report(report, args.format), args.out)
    return EXIT_PASS if report.overall_pass else EXIT_FAIL


def _parse_at(text: str, coords) -> dict[str, float]:
    values = {}
    for item in text.split(","):
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in coords:
            raise ScenarioError(f"--at: expected coordinate=value pairs over {', '.join(coords)}")
        try:
            values[name] = float(value)
        except ValueError:
            raise ScenarioError(f"--at: bad value for {name}: {value!r}") from None
    missing = [c for c in coords if c not in values]
    if missing:
        raise ScenarioError(f"--at: missing coordinates {missing}")
    return values


def _nonzero(arr: np.ndarray, coords, fmt) -> list[str]:
    lines = []
    for idx in product(range(arr.shape[0]), repeat=arr.ndim):
        if abs(arr[idx]) > 1e-14:
            lines.append(f"  {fmt(*(coords[i] for i in idx))} = {arr[idx]:.12g}")
    return lines or ["  (all zero)"]


def cmd_curvature(args) -> int:
    s = load_scenario(args.scenario)
    coords = s.metric.chart.coordinates
    p = s.metric.chart.point(_parse_at(args.at, coords))
    F = frame_at(s.metric, p)
    if args.format == "json":
        data = {
            "coordinates": list(coords),
            "point": p.tolist(),
            "g": F.g.tolist(),
            "g_inv": F.g_inv.tolist(),
            "christoffel": F.christoffel.tolist(),
            "riemann": F.riemann.tolist(),
            "riemann_down": F.riemann_down.tolist(),
            "ricci": F.ricci.tolist(),
            "ricci_operator": F.ricci_operator.tolist(),
            "scalar_curvature": F.scalar,
        }
        _write(json.dumps(data, indent=2) + "\n", args.out)
        return EXIT_PASS
    lines = [f"point: " + ", ".join(f"{c}={x:g}" for c, x in zip(coords, p)), "metric g_ab:"]
    lines += _nonzero(F.g, coords, lambda a, b: f"g_{a}{b}")
    lines.append("Christoffel symbols Gamma^k_ij:")
    lines += _nonzero(F.christoffel, coords, lambda k, i, j: f"Gamma^{k}_{{{i} {j}}}")
    lines.append("Riemann R^l_ijk (l component of R(d_i, d_j) d_k):")
    lines += _nonzero(F.riemann, coords, lambda l, i, j, k: f"R^{l}_{{{i} {j} {k}}}")
    lines.append("Ricci Ric_ab:")
    lines += _nonzero(F.ricci, coords, lambda a, b: f"Ric_{a}{b}")
    lines.append(f"scalar curvature: {F.scalar:.12g}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_PASS


def cmd_list_families(args) -> int:
    lines = []
    for name, desc in families.FAMILIES.items():
        lines.append(f"{name}: {desc}")
        for kind, ctor in families.CONSTRUCTORS[name].items():
            lines.append(f"  {kind:<11} {ctor}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="solitonkit", description="Verify Ricci soliton claims pointwise.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the checks of a scenario file")
    v.add_argument("scenario")
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--tol", type=float)
    v.add_argument("--format", choices=("json", "text"), default="text")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("curvature", help="dump connection and curvature at a point")
    c.add_argument("scenario")
    c.add_argument("--at", required=True, help="e.g. u=0.1,v=0,x1=0.2,x2=-0.3")
    c.add_argument("--format", choices=("json", "text"), default="text")
    c.add_argument("--out")
    c.set_defaults(func=cmd_curvature)

    lf = sub.add_parser("list-families", help="list metric families and their soliton constructors")
    lf.set_defaults(func=cmd_list_families)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (ScenarioError, ExpressionError, SingularMetricError, families.FamilyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
