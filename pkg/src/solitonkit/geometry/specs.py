"""Symbolic inputs to the tensor calculus: metrics, vector fields, scalar fields.

Each spec differentiates its components symbolically once, at construction,
and keeps compiled evaluators for the nonzero derivatives. Specs are
immutable after construction apart from the lazily built third-order
metric cache, which is guarded by a lock.
"""

from __future__ import annotations

import itertools
import threading
from typing import Mapping, Sequence

import numpy as np

from solitonkit.expr import (
    Chart,
    Const,
    Expression,
    as_expression,
    compile_expression,
    differentiate,
    parse,
    simplify,
)

ExprLike = Expression | str | float | int


def _coerce(value: ExprLike, chart: Chart, params: Mapping[str, float]) -> Expression:
    if isinstance(value, str):
        return parse(value, chart, params.keys())
    return simplify(as_expression(value))


def _is_zero(e: Expression) -> bool:
    return isinstance(e, Const) and e.value == 0.0


def _check_symbols(e: Expression, chart: Chart, params: Mapping[str, float], what: str):
    unknown = e.symbols() - set(chart.coordinates) - set(params)
    if unknown:
        raise ValueError(f"{what} uses unknown names {sorted(unknown)}")


class MetricSpec:
    """A chart together with a symmetric matrix of component expressions."""

    def __init__(
        self,
        chart: Chart | Sequence[str],
        components: Sequence[Sequence[ExprLike]],
        params: Mapping[str, float] | None = None,
    ):
        self.chart = chart if isinstance(chart, Chart) else Chart(chart)
        self.params = dict(params or {})
        d = self.chart.dim
        if len(components) != d or any(len(row) != d for row in components):
            raise ValueError(f"metric components must be a {d}x{d} matrix")
        comps = tuple(
            tuple(_coerce(components[i][j], self.chart, self.params) for j in range(d))
            for i in range(d)
        )
        for i, j in itertools.combinations(range(d), 2):
            if comps[i][j] != comps[j][i]:
                raise ValueError(f"metric is not symmetric in entries ({i}, {j})")
        for i, j in itertools.combinations_with_replacement(range(d), 2):
            _check_symbols(comps[i][j], self.chart, self.params, f"g[{i}][{j}]")
        self.components = comps
        self._lock = threading.Lock()
        # (i, j, sorted derivative multi-index) -> expression, upper triangle only
        self._derivs: dict[tuple[int, int, tuple[int, ...]], Expression] = {}
        self._compiled: dict[int, list] = {}
        for i, j in itertools.combinations_with_replacement(range(d), 2):
            self._derivs[(i, j, ())] = comps[i][j]
        self._max_order = -1
        self._extend(2)

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def has_antiderivative(self) -> bool:
        return any(e.has_antiderivative() for row in self.components for e in row)

    def component(self, i: int, j: int) -> Expression:
        return self.components[i][j]

    def derivative_expression(self, i: int, j: int, *directions: int) -> Expression:
        """Cached symbolic partial of ``g_ij`` along coordinate indices ``directions``."""
        if i > j:
            i, j = j, i
        key = (i, j, tuple(sorted(directions)))
        if len(directions) > self._max_order:
            self._extend(len(directions))
        return self._derivs[key]

    def _extend(self, order: int):
        with self._lock:
            coords = self.chart.coordinates
            d = self.dim
            for k in range(self._max_order + 1, order + 1):
                entries = []
                for i, j in itertools.combinations_with_replacement(range(d), 2):
                    for multi in itertools.combinations_with_replacement(range(d), k):
                        key = (i, j, multi)
                        if k > 0 and key not in self._derivs:
                            parent = self._derivs[(i, j, multi[:-1])]
                            self._derivs[key] = (
                                parent if _is_zero(parent) else differentiate(parent, coords[multi[-1]])
                            )
                        e = self._derivs[key]
                        if not _is_zero(e):
                            entries.append((i, j, multi, compile_expression(e)))
                self._compiled[k] = entries
                self._max_order = k

    def environment(self, p: Sequence[float]) -> dict[str, float]:
        return self.chart.environment(p, self.params)

    def derivative_arrays(self, p: Sequence[float], order: int) -> list[np.ndarray]:
        """``[g, dg, d2g, ...]`` at ``p``; derivative axes come last."""
        if order > self._max_order:
            self._extend(order)
        env = self.environment(p)
        d = self.dim
        out = []
        for k in range(order + 1):
            arr = np.zeros((d, d) + (d,) * k)
            for i, j, multi, fn in self._compiled[k]:
                value = fn(env)
                for perm in set(itertools.permutations(multi)):
                    arr[(i, j) + perm] = value
                    arr[(j, i) + perm] = value
            out.append(arr)
        return out

    def matrix_at(self, p: Sequence[float]) -> np.ndarray:
        return self.derivative_arrays(p, 0)[0]

    def __repr__(self):
        return f"MetricSpec(chart={self.chart.coordinates}, params={self.params})"


class VectorFieldSpec:
    """Contravariant components ``X^k`` of a vector field."""

    def __init__(
        self,
        chart: Chart | Sequence[str],
        components: Sequence[ExprLike],
        params: Mapping[str, float] | None = None,
    ):
        self.chart = chart if isinstance(chart, Chart) else Chart(chart)
        self.params = dict(params or {})
        if len(components) != self.chart.dim:
            raise ValueError(f"expected {self.chart.dim} components, got {len(components)}")
        self.components = tuple(_coerce(c, self.chart, self.params) for c in components)
        for k, c in enumerate(self.components):
            _check_symbols(c, self.chart, self.params, f"X[{k}]")
        coords = self.chart.coordinates
        # partials[k][i] = d_i X^k
        self.partials = tuple(tuple(differentiate(c, x) for x in coords) for c in self.components)
        self._values = [compile_expression(c) for c in self.components]
        self._dvalues = [
            (k, i, compile_expression(e))
            for k, row in enumerate(self.partials)
            for i, e in enumerate(row)
            if not _is_zero(e)
        ]

    @property
    def has_antiderivative(self) -> bool:
        return any(c.has_antiderivative() for c in self.components)

    def jet(self, p: Sequence[float], params: Mapping[str, float] | None = None):
        """Return ``(X, dX)`` at ``p`` with ``dX[k, i] = d_i X^k``."""
        env = self.chart.environment(p, {**(params or {}), **self.params})
        d = self.chart.dim
        X = np.array([fn(env) for fn in self._values])
        dX = np.zeros((d, d))
        for k, i, fn in self._dvalues:
            dX[k, i] = fn(env)
        return X, dX

    def __add__(self, other: VectorFieldSpec) -> VectorFieldSpec:
        return self._combine(other, 1.0)

    def __sub__(self, other: VectorFieldSpec) -> VectorFieldSpec:
        return self._combine(other, -1.0)

    def _combine(self, other: VectorFieldSpec, sign: float) -> VectorFieldSpec:
        if other.chart != self.chart:
            raise ValueError("vector fields live on different charts")
        comps = [a + b if sign > 0 else a - b for a, b in zip(self.components, other.components)]
        return VectorFieldSpec(self.chart, comps, {**other.params, **self.params})

    def __repr__(self):
        return f"VectorFieldSpec({[str(c) for c in self.components]})"


class ScalarFieldSpec:
    """A scalar function on a chart, with its first and second partials."""

    def __init__(
        self,
        chart: Chart | Sequence[str],
        value: ExprLike,
        params: Mapping[str, float] | None = None,
    ):
        self.chart = chart if isinstance(chart, Chart) else Chart(chart)
        self.params = dict(params or {})
        self.value = _coerce(value, self.chart, self.params)
        _check_symbols(self.value, self.chart, self.params, "h")
        coords = self.chart.coordinates
        self.first = tuple(differentiate(self.value, x) for x in coords)
        self.second = tuple(
            tuple(differentiate(self.first[i], coords[j]) for j in range(len(coords)))
            for i in range(len(coords))
        )
        self._h = compile_expression(self.value)
        self._dh = [(i, compile_expression(e)) for i, e in enumerate(self.first) if not _is_zero(e)]
        self._d2h = [
            (i, j, compile_expression(e))
            for i, row in enumerate(self.second)
            for j, e in enumerate(row)
            if j >= i and not _is_zero(e)
        ]

    @property
    def has_antiderivative(self) -> bool:
        return self.value.has_antiderivative()

    def jet(self, p: Sequence[float], params: Mapping[str, float] | None = None):
        """Return ``(h, dh, d2h)`` at ``p``."""
        env = self.chart.environment(p, {**(params or {}), **self.params})
        d = self.chart.dim
        dh = np.zeros(d)
        for i, fn in self._dh:
            dh[i] = fn(env)
        d2h = np.zeros((d, d))
        for i, j, fn in self._d2h:
            d2h[i, j] = d2h[j, i] = fn(env)
        return self._h(env), dh, d2h

    def __repr__(self):
        return f"ScalarFieldSpec({self.value})"
