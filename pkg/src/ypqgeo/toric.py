"""Symplectic-toric description of the six-dimensional cone over the base.

The cone is a toric Kahler manifold: its image under the momentum map is a
polyhedral cone cut out by inward normals, and the Kahler geometry is encoded
in a convex symplectic potential of the moment coordinates. This module holds
the toric data (normals and Reeb covector), the potential in two modes, the
momentum map from chart coordinates, Legendre duality, and the closed-form
complex chart.

Sign convention: the facet pairing of the sixth auxiliary normal is strictly
negative on the image of the chart, so all potential terms use log|.|; the
potential is defined modulo linear functions, which affects neither gradients
used modulo constants nor Hessians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NewtonDivergence, OutOfChart, ToricDomainError
from .geomcore import jets as J
from .ypq import PQParams, require_interior

__all__ = [
    "ToricModel", "ypq_toric_model", "facet_values", "symplectic_potential",
    "hessian_analytic", "momentum_map", "legendre_roundtrip",
    "legendre_hessian_fd", "fit_det_constant", "invert_gradient",
    "complex_coordinates", "complex_coordinate_jets",
    "MODE_CANONICAL", "MODE_SIX_VECTOR",
]

MODE_CANONICAL = "CanonicalPlusReeb"
MODE_SIX_VECTOR = "SixVectorExact"

#: Facets that bound the moment cone; their pairings must stay positive.
POLYTOPE_FACETS = 4


@dataclass(frozen=True)
class ToricModel:
    """Toric data of one cone: inward normals, Reeb covector, potential mode.

    ``normals`` holds six rows: four integer polytope normals (first entry 1,
    the Gorenstein form), then the two auxiliary vectors completing the
    six-term potential. ``mode`` selects how the potential is assembled.
    """

    normals: np.ndarray
    reeb: np.ndarray
    mode: str

    def __post_init__(self):
        object.__setattr__(self, "normals", np.asarray(self.normals, float))
        object.__setattr__(self, "reeb", np.asarray(self.reeb, float))
        if self.normals.shape != (6, 3):
            raise ValueError("expected six 3-component normals")
        if self.mode not in (MODE_CANONICAL, MODE_SIX_VECTOR):
            raise ValueError(f"unknown mode {self.mode!r}")

    def to_json_dict(self) -> dict:
        return {
            "normals": [[float(v) for v in row] for row in self.normals],
            "reeb": [float(v) for v in self.reeb],
            "mode": self.mode,
        }


def ypq_toric_model(params: PQParams, mode: str = MODE_SIX_VECTOR) -> ToricModel:
    """Normals and Reeb covector for the cone over Y(p, q)."""
    p, q, l = params.p, params.q, params.l
    reeb = np.array([3.0, -3.0, -1.5 * (l + 1.0 / (3.0 * params.ell))])
    v1 = np.array([1.0, -1.0, -float(p)])
    v2 = np.array([1.0, 0.0, 0.0])
    v3 = np.array([1.0, -1.0, 0.0])
    v4 = np.array([1.0, -2.0, float(-p + q)])
    v5 = reeb - v1 - v3
    v6 = -v2 - v4
    return ToricModel(normals=np.stack([v1, v2, v3, v4, v5, v6]),
                      reeb=reeb, mode=mode)


def facet_values(model: ToricModel, y) -> np.ndarray:
    """Pairings of each normal with a moment point (plain floats)."""
    y = np.asarray([float(J.value_of(v)) for v in y])
    return model.normals @ y


def _half_t_log_t(t):
    """(1/2) t log|t| for a float or jet pairing value."""
    return 0.5 * t * J.log_abs(t)


def _check_polytope(model: ToricModel, vals: np.ndarray) -> None:
    for a in range(POLYTOPE_FACETS):
        if vals[a] <= 0.0:
            raise ToricDomainError(
                f"facet pairing {a + 1} nonpositive ({vals[a]:.6g}); moment "
                "point outside the polytope cone")
    if np.any(vals == 0.0):
        raise ToricDomainError("auxiliary pairing exactly zero: log singular")


def symplectic_potential(model: ToricModel, y):
    """Potential as a 3-variable jet: value, gradient (the dual coordinates),
    and Hessian (the moment-frame metric).

    Accepts a float 3-vector (seeds its own jets) or a list of jets.
    """
    if isinstance(y[0], J.Jet2):
        yj = list(y)
        vals = facet_values(model, [v.val for v in yj])
    else:
        yj = J.seed(np.asarray(y, dtype=float))
        vals = facet_values(model, y)
    _check_polytope(model, vals)

    pair = lambda row: (row[0] * yj[0] + row[1] * yj[1] + row[2] * yj[2])
    if model.mode == MODE_SIX_VECTOR:
        total = _half_t_log_t(pair(model.normals[0]))
        for row in model.normals[1:]:
            total = total + _half_t_log_t(pair(row))
        return total

    # CanonicalPlusReeb: four polytope terms, a Reeb term, and a correction
    # from the sum of the polytope normals (the degree-one ambiguity h is
    # not resolved in this mode).
    total = _half_t_log_t(pair(model.normals[0]))
    for row in model.normals[1:POLYTOPE_FACETS]:
        total = total + _half_t_log_t(pair(row))
    total = total + _half_t_log_t(pair(model.reeb))
    vsum = model.normals[:POLYTOPE_FACETS].sum(axis=0)
    total = total - _half_t_log_t(pair(vsum))
    return total


def hessian_analytic(model: ToricModel, y) -> np.ndarray:
    """Closed-form Hessian: (1/2) sum of outer(v, v)/pairing, signed."""
    y = np.asarray(y, dtype=float)
    out = np.zeros((3, 3))
    if model.mode == MODE_SIX_VECTOR:
        rows = list(model.normals)
        signs = [1.0] * 6
    else:
        vsum = model.normals[:POLYTOPE_FACETS].sum(axis=0)
        rows = list(model.normals[:POLYTOPE_FACETS]) + [model.reeb, vsum]
        signs = [1.0] * POLYTOPE_FACETS + [1.0, -1.0]
    for sign, row in zip(signs, rows):
        t = float(row @ y)
        out += sign * 0.5 * np.outer(row, row) / t
    return out


def momentum_map(params: PQParams, r: float, pt) -> np.ndarray:
    """Moment coordinates of a cone point (radius r over a base point)."""
    if r <= 0.0:
        raise OutOfChart(f"cone radius must be positive, got {r}")
    coords = np.asarray(pt, dtype=float)
    theta, y = coords[0], coords[2]
    r2 = r * r
    one_my = 1.0 - y
    return np.array([
        r2 / 6.0 * one_my * (1.0 - math.cos(theta)),
        -r2 / 6.0 * one_my * math.cos(theta) + 0.5 * r2 * params.l * params.ell * y,
        -params.ell * r2 * y,
    ])


# ---------------------------------------------------------------------------
# Legendre duality
# ---------------------------------------------------------------------------

def invert_gradient(model: ToricModel, x_target: np.ndarray, y_start,
                    tol: float = 1e-12, max_iter: int = 60) -> np.ndarray:
    """Solve grad(potential)(y) = x_target by damped Newton iteration."""
    y = np.asarray(y_start, dtype=float).copy()
    x_target = np.asarray(x_target, dtype=float)

    def residual(yv):
        return symplectic_potential(model, yv).grad - x_target

    res = residual(y)
    norm = float(np.max(np.abs(res)))
    for _ in range(max_iter):
        if norm < tol:
            return y
        hess = symplectic_potential(model, y).hess
        step = np.linalg.solve(hess, res)
        lam = 1.0
        for _ in range(40):
            trial = y - lam * step
            try:
                trial_res = residual(trial)
            except ToricDomainError:
                lam *= 0.5
                continue
            trial_norm = float(np.max(np.abs(trial_res)))
            if trial_norm < norm:
                y, res, norm = trial, trial_res, trial_norm
                break
            lam *= 0.5
        else:
            raise NewtonDivergence(
                f"line search stalled at residual {norm:.3e}")
    if norm < tol:
        return y
    raise NewtonDivergence(f"no convergence after {max_iter} steps "
                           f"(residual {norm:.3e})")


def legendre_roundtrip(model: ToricModel, y):
    """Dual coordinates, dual potential value, and the Newton-inverted point.

    Returns (x, y_back, dual_value): x = grad(potential), dual_value =
    <y, x> - potential(y), and y_back solves grad(potential)(y_back) = x
    starting from a dilated seed so the inversion is nontrivial.
    """
    y = np.asarray(y, dtype=float)
    jet = symplectic_potential(model, y)
    x = jet.grad.copy()
    dual_value = float(y @ x - jet.val)
    y_back = invert_gradient(model, x, 1.15 * y)
    return x, y_back, dual_value


def legendre_hessian_fd(model: ToricModel, x0: np.ndarray, y_hint,
                        h: float = 1e-5) -> np.ndarray:
    """Hessian of the dual potential at x0: the Jacobian dy/dx of the
    inverse-gradient map, by Richardson-extrapolated central differences."""
    x0 = np.asarray(x0, dtype=float)
    y0 = invert_gradient(model, x0, np.asarray(y_hint, dtype=float))

    def inv(xv):
        return invert_gradient(model, xv, y0)

    out = np.empty((3, 3))
    for j in range(3):
        e = np.zeros(3)
        e[j] = 1.0
        d1 = (inv(x0 + h * e) - inv(x0 - h * e)) / (2.0 * h)
        d2 = (inv(x0 + 0.5 * h * e) - inv(x0 - 0.5 * h * e)) / h
        out[:, j] = (4.0 * d2 - d1) / 3.0
    return 0.5 * (out + out.T)


def fit_det_constant(model: ToricModel, moment_points):
    """Fit c in det(Hess potential) = exp(-2 x^1 - c) over sample points.

    Returns (c, standard deviation of the per-point estimates); a small
    deviation certifies the determinant identity on the sample.
    """
    cs = []
    for ym in moment_points:
        jet = symplectic_potential(model, np.asarray(ym, dtype=float))
        cs.append(-math.log(np.linalg.det(jet.hess)) - 2.0 * float(jet.grad[0]))
    cs = np.asarray(cs)
    return float(cs.mean()), float(cs.std())


# ---------------------------------------------------------------------------
# Complex chart
# ---------------------------------------------------------------------------

def complex_coordinate_jets(params: PQParams, coords6) -> list:
    """The three complex chart functions as jets of the six cone coordinates
    (r, theta, phi, y, alpha, psi)."""
    r, theta, phi, y, alpha, psi = coords6
    half_cubic = y ** 3 - 1.5 * y * y + 0.5 * params.a
    sqrt_hc = J.sqrt(half_cubic)
    log_r = J.log(r)
    cos_half = J.cos(theta * 0.5)

    z1 = 3.0 * log_r + J.log(J.sin(theta)) + J.log(sqrt_hc) + 1j * psi
    z2 = -(3.0 * log_r + 2.0 * J.log(cos_half) + J.log(sqrt_hc)) \
        + 1j * (phi - psi)

    y1, y3, p, l = params.y1, params.y3, params.p, params.l
    kappa = p * (y1 - y3) / (1.0 - y1)
    z3 = (kappa * log_r
          + 0.5 * p * (1.0 - y3) / (1.0 - y1) * J.log_abs(y - y3)
          - l * J.log(cos_half)
          - 0.5 * p * J.log(y - y1)) \
        + 1j * (0.5 * l * phi - 0.5 * l * psi + alpha / params.ell)
    return [z1, z2, z3]


def complex_coordinates(params: PQParams, r: float, pt) -> np.ndarray:
    """Values of the complex chart at radius r over a base point."""
    coords = np.asarray(pt, dtype=float)
    require_interior(params, coords)
    if r <= 0.0:
        raise OutOfChart(f"cone radius must be positive, got {r}")
    six = np.concatenate([[r], coords])
    zs = complex_coordinate_jets(params, list(six))
    return np.array([complex(J.value_of(z)) for z in zs])
