from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate names of a coordinate patch."""

    coordinates: tuple[str, ...]

    def __init__(self, coordinates: Sequence[str]):
        coords = tuple(coordinates)
        if len(coords) < 2:
            raise ValueError("a chart needs at least two coordinates")
        if len(set(coords)) != len(coords):
            raise ValueError(f"duplicate coordinate names in {coords}")
        if any(not name for name in coords):
            raise ValueError("coordinate names must be nonempty")
        object.__setattr__(self, "coordinates", coords)

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    def index(self, name: str) -> int:
        try:
            return self.coordinates.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a coordinate of {self.coordinates}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.coordinates

    def __iter__(self):
        return iter(self.coordinates)

    def __len__(self):
        return len(self.coordinates)

    def point(self, values: Sequence[float] | dict[str, float]) -> np.ndarray:
        """Validate and return a point as a float array in chart order."""
        if isinstance(values, dict):
            missing = [c for c in self.coordinates if c not in values]
            if missing:
                raise ValueError(f"point is missing coordinates {missing}")
            values = [values[c] for c in self.coordinates]
        p = np.asarray(values, dtype=float)
        if p.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} coordinates, got shape {p.shape}")
        if not all(math.isfinite(x) for x in p):
            raise ValueError(f"point has non-finite entries: {p}")
        return p

    def environment(self, p: Sequence[float], params: dict[str, float] | None = None) -> dict[str, float]:
        env = dict(params or {})
        env.update(zip(self.coordinates, (float(x) for x in p)))
        return env


def lorentz_chart(n: int) -> Chart:
    """The ``(u, v, x1, ..., xn)`` chart used by all built-in families."""
    return Chart(("u", "v", *(f"x{i}" for i in range(1, n + 1))))
