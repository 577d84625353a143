"""Coordinate charts and point containers.

Two charts appear throughout the package:

* ``BASE5`` — the five-dimensional chart (theta, phi, y, alpha, psi);
* ``CONE6`` — the six-dimensional radial chart (r, theta, phi, y, alpha, psi).

Angular coordinates are unconstrained reals (the metric is periodic in them);
validity only restricts theta, y and r.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..errors import OutOfChart

__all__ = ["Chart", "ChartPoint", "DEFAULT_MARGIN", "BASE5_NAMES", "CONE6_NAMES"]

#: Default interior margin, in coordinate units, used by samplers and
#: interior-validity checks.
DEFAULT_MARGIN = 1e-3

BASE5_NAMES = ("theta", "phi", "y", "alpha", "psi")
CONE6_NAMES = ("r",) + BASE5_NAMES


class Chart(enum.Enum):
    BASE5 = "base5"
    CONE6 = "cone6"

    @property
    def dim(self) -> int:
        return 5 if self is Chart.BASE5 else 6


@dataclass(frozen=True)
class ChartPoint:
    """A point of one of the two coordinate charts."""

    coords: np.ndarray
    chart: Chart = Chart.BASE5

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.shape != (self.chart.dim,):
            raise OutOfChart(
                f"{self.chart.value} point needs {self.chart.dim} coordinates, "
                f"got shape {coords.shape}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return self.chart.dim

    def base_coords(self) -> np.ndarray:
        """The (theta, phi, y, alpha, psi) part, for either chart."""
        return self.coords if self.chart is Chart.BASE5 else self.coords[1:]

    @property
    def theta(self) -> float:
        return float(self.base_coords()[0])

    @property
    def y(self) -> float:
        return float(self.base_coords()[2])

    @property
    def r(self) -> float:
        if self.chart is not Chart.CONE6:
            raise OutOfChart("base chart point has no radial coordinate")
        return float(self.coords[0])


def base_point(theta, phi, y, alpha, psi) -> ChartPoint:
    return ChartPoint(np.array([theta, phi, y, alpha, psi], dtype=float),
                      Chart.BASE5)


def cone_point(r, theta, phi, y, alpha, psi) -> ChartPoint:
    return ChartPoint(np.array([r, theta, phi, y, alpha, psi], dtype=float),
                      Chart.CONE6)
