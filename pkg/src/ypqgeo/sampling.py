"""Seed-controlled sampling of chart points and phase-space states.

Coordinates are drawn uniformly from the open chart with a relative margin
(compact directions keep ``margin`` times their range away from the
boundary), and momenta are drawn as a random direction rescaled so the
kinetic energy takes a fixed value — the energy normalization makes drift
measurements comparable across states and geometries.
"""

from __future__ import annotations

import math

import numpy as np

from .dynamics import PhaseState, hamiltonian
from .ypq import PQParams

__all__ = ["interior_coordinates", "random_phase_states", "rng_of"]


def rng_of(seed_or_rng) -> np.random.Generator:
    """A Generator from a seed, passing Generators through unchanged."""
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def interior_coordinates(params: PQParams, seed_or_rng, n: int,
                         margin: float = 0.1) -> np.ndarray:
    """``(n, 5)`` coordinates uniform over the margin-shrunk open chart."""
    if not 0.0 < margin < 0.5:
        raise ValueError("margin must lie in (0, 0.5)")
    rng = rng_of(seed_or_rng)
    theta_pad = margin * math.pi
    y_pad = margin * (params.y2 - params.y1)
    out = np.empty((n, 5))
    out[:, 0] = rng.uniform(theta_pad, math.pi - theta_pad, size=n)
    out[:, 1] = rng.uniform(0.0, 2.0 * math.pi, size=n)
    out[:, 2] = rng.uniform(params.y1 + y_pad, params.y2 - y_pad, size=n)
    out[:, 3] = rng.uniform(0.0, 2.0 * math.pi, size=n)
    out[:, 4] = rng.uniform(0.0, 2.0 * math.pi, size=n)
    return out


def random_phase_states(params: PQParams, seed_or_rng, n: int,
                        margin: float = 0.1,
                        energy: float = 0.5) -> list[PhaseState]:
    """``n`` seeded phase states with kinetic energy exactly ``energy``.

    Momentum directions are standard-normal draws rescaled so
    ``H(x, P) = energy``; a zero draw is rejected and redrawn.
    """
    if energy <= 0.0:
        raise ValueError("energy must be positive")
    rng = rng_of(seed_or_rng)
    coords = interior_coordinates(params, rng, n, margin)
    states = []
    for k in range(n):
        direction = rng.standard_normal(5)
        while not np.any(direction):
            direction = rng.standard_normal(5)
        h_raw = hamiltonian(params, np.concatenate([coords[k], direction]))
        scale = math.sqrt(energy / h_raw)
        states.append(PhaseState(coords[k], direction * scale))
    return states
