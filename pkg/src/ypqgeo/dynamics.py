"""Geodesic flow in Hamiltonian form and its seven commuting first integrals.

Phase space is the cotangent bundle of the five-dimensional chart: ten
variables ``(theta, phi, y, alpha, psi, P_theta, P_phi, P_y, P_alpha,
P_psi)``.  The flow conserves

* ``H`` — the kinetic energy  ``(1/2) P . g^{-1} P``,
* ``P_phi``, ``P_psi``, ``P_alpha`` — momenta of the three commuting
  isometry circles,
* ``J2`` — the Casimir of the SU(2) isometry acting on the round 2-sphere
  directions,
* ``K1`` — the hidden quadratic charge obtained by squaring either member
  of the transverse Killing-Yano pair,
* ``K4`` — the hidden quadratic charge obtained by squaring the contact
  3-form (the degree-3 special Killing-Yano form).

``K1``/``K4`` are evaluated from closed-form expansions in the velocities;
:func:`make_invariant_functions` exposes all seven as jet-evaluable phase
functions so Poisson brackets and functional-independence ranks come from
exact derivatives rather than finite differences.

Trajectory integration delegates to :mod:`ypqgeo.kernels` (adaptive
Dormand-Prince 8(5,3), optionally numba-compiled) and reports chart exits
and step failures as trajectory statuses, not exceptions, so callers can
treat them as diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import OutOfChart, PoleSingularity
from .geomcore import jets as J
from .geomcore.jets import jet_solve
from .ypq import (PQParams, cubic, fiber_profile, metric_field,
                  radial_profile, require_interior, sigma_profile,
                  twist_profile)

__all__ = [
    "INVARIANT_NAMES", "POLE_EPS", "PHASE_DIM",
    "PhaseState", "InvariantVector", "Trajectory", "RankResult",
    "hamiltonian", "momenta_from_velocities", "velocities_from_momenta",
    "quadratic_charge_transverse", "quadratic_charge_contact",
    "invariants", "invariants_packed", "integrate_geodesic",
    "phase_jets", "poisson_bracket", "make_invariant_functions",
    "jacobian_rank",
]

#: Data labels of the seven conserved quantities, in report order.
INVARIANT_NAMES = ("H", "P_phi", "P_psi", "P_alpha", "J2", "K1", "K4")

#: Below this |sin(theta)| the SU(2) Casimir formula is considered undefined.
POLE_EPS = 1e-9

#: Coordinates plus conjugate momenta.
PHASE_DIM = 10

_STATUS_NAMES = {
    kernels.STATUS_OK: "ok",
    kernels.STATUS_CHART_EXIT: "chart_exit",
    kernels.STATUS_STEP_FAILURE: "step_failure",
}


# ---------------------------------------------------------------------------
# phase-space state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseState:
    """A point of phase space: chart coordinates plus conjugate momenta."""

    coords: np.ndarray
    momenta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords",
                           np.asarray(self.coords, dtype=float).reshape(5))
        object.__setattr__(self, "momenta",
                           np.asarray(self.momenta, dtype=float).reshape(5))

    def packed(self) -> np.ndarray:
        """The ten phase variables as one flat array (coords then momenta)."""
        return np.concatenate([self.coords, self.momenta])

    @staticmethod
    def from_packed(packed) -> "PhaseState":
        arr = np.asarray(packed, dtype=float).reshape(PHASE_DIM)
        return PhaseState(arr[:5].copy(), arr[5:].copy())


class InvariantVector(NamedTuple):
    """The seven conserved quantities of one phase-space state."""

    H: float
    P_phi: float
    P_psi: float
    P_alpha: float
    J2: float
    K1: float
    K4: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


def _packed_of(state) -> np.ndarray:
    if isinstance(state, PhaseState):
        return state.packed()
    return np.asarray(state, dtype=float).reshape(PHASE_DIM)


# ---------------------------------------------------------------------------
# momenta <-> velocities
# ---------------------------------------------------------------------------

def momenta_from_velocities(params: PQParams, coords, velocities) -> np.ndarray:
    """Conjugate momenta of a velocity vector, from the closed-form block.

    Uses the profile functions directly (sphere radius, fiber weight ``w``,
    twist ``f``, squashing ``q``) rather than a generic metric contraction;
    tests pin agreement of the two routes.
    """
    coords = np.asarray(coords, dtype=float).reshape(5)
    velocities = np.asarray(velocities, dtype=float).reshape(5)
    require_interior(params, coords)
    theta, y = coords[0], coords[2]
    theta_dot, phi_dot, y_dot, alpha_dot, psi_dot = velocities
    sphere = (1.0 - y) / 6.0
    c, s = math.cos(theta), math.sin(theta)
    w = fiber_profile(params, y)
    f = twist_profile(params, y)
    squash = sigma_profile(params, y)
    spin = psi_dot - c * phi_dot
    p_theta = sphere * theta_dot
    p_y = y_dot / (6.0 * radial_profile(params, y))
    p_alpha = w * (alpha_dot + f * spin)
    p_psi = w * f * alpha_dot + (squash / 9.0 + w * f * f) * spin
    p_phi = sphere * s * s * phi_dot - c * p_psi
    return np.array([p_theta, p_phi, p_y, p_alpha, p_psi])


def velocities_from_momenta(params: PQParams, coords, momenta) -> np.ndarray:
    """Velocity vector of a momentum covector: solve ``g v = P``."""
    coords = np.asarray(coords, dtype=float).reshape(5)
    momenta = np.asarray(momenta, dtype=float).reshape(5)
    require_interior(params, coords)
    g, _, _ = kernels.metric_blocks(params.a, coords[0], coords[2])
    return np.linalg.solve(g, momenta)


# ---------------------------------------------------------------------------
# the seven conserved quantities
# ---------------------------------------------------------------------------

def hamiltonian(params: PQParams, state) -> float:
    """Kinetic energy ``(1/2) P . g^{-1} P`` of a phase-space state."""
    packed = _packed_of(state)
    require_interior(params, packed[:5])
    return float(kernels.hamiltonian(params.a, packed))


def quadratic_charge_transverse(params: PQParams, coords, velocities):
    """Hidden charge from the transverse Killing-Yano pair, velocity form.

    Quadratic form in the velocities with coefficients rational in ``y`` and
    trigonometric in ``theta``; equals the tensor square of either member of
    the transverse 2-form pair up to one constant factor per geometry.
    Accepts plain floats or jets.
    """
    a = params.a
    theta, y = coords[0], coords[2]
    theta_dot, phi_dot = velocities[0], velocities[1]
    y_dot, alpha_dot, psi_dot = velocities[2], velocities[3], velocities[4]
    cub = a + (-3.0 + 2.0 * y) * y * y
    one = 1.0 - y
    c = J.cos(theta)
    c2 = J.cos(2.0 * theta)
    phi_coeff = (3.0 + a - 6.0 * y + 2.0 * y ** 3
                 + (-3.0 + a + 6.0 * y - 6.0 * y * y + 2.0 * y ** 3) * c2) / one
    return (6.0 * one * theta_dot * theta_dot
            + phi_coeff * phi_dot * phi_dot
            - 24.0 * (cub * c / one) * phi_dot * alpha_dot
            - 4.0 * (cub * c / one) * phi_dot * psi_dot
            + 18.0 * (one / cub) * y_dot * y_dot
            + 72.0 * (cub / one) * alpha_dot * alpha_dot
            + 24.0 * (cub / one) * alpha_dot * psi_dot
            + 2.0 * (cub / one) * psi_dot * psi_dot)


def quadratic_charge_contact(params: PQParams, coords, velocities):
    """Hidden charge from the contact 3-form square, velocity form.

    Same structure as :func:`quadratic_charge_transverse` but with the
    coefficient polynomials of the degree-3 special form's square.  Accepts
    plain floats or jets.
    """
    a = params.a
    theta, y = coords[0], coords[2]
    theta_dot, phi_dot = velocities[0], velocities[1]
    y_dot, alpha_dot, psi_dot = velocities[2], velocities[3], velocities[4]
    cub = a + (-3.0 + 2.0 * y) * y * y
    one = 1.0 - y
    c = J.cos(theta)
    c2 = J.cos(2.0 * theta)
    mix = a + (-4.0 + 5.0 * y - 2.0 * y * y) * y
    spin = a - (2.0 - y) ** 2 * (-1.0 + 2.0 * y)
    fiber = a + (1.0 - 2.0 * y) * y * y
    phi_coeff = (7.0 + a - 18.0 * y + 12.0 * y * y - 2.0 * y ** 3
                 + (1.0 + a - 6.0 * y + 6.0 * y * y - 2.0 * y ** 3) * c2) / one
    return (6.0 * one * theta_dot * theta_dot
            - 24.0 * (mix * c / one) * phi_dot * alpha_dot
            + phi_coeff * phi_dot * phi_dot
            - 4.0 * (spin * c / one) * phi_dot * psi_dot
            + 18.0 * (one / cub) * y_dot * y_dot
            + 72.0 * (fiber / one) * alpha_dot * alpha_dot
            + 24.0 * (mix / one) * alpha_dot * psi_dot
            + 2.0 * (spin / one) * psi_dot * psi_dot)


def _casimir(theta, momenta):
    """SU(2) Casimir in terms of theta and the momenta (jets or floats)."""
    s = J.sin(theta)
    c = J.cos(theta)
    azimuth = (momenta[1] + c * momenta[4]) / s
    return (momenta[0] * momenta[0] + azimuth * azimuth
            + momenta[4] * momenta[4])


def invariants_packed(params: PQParams, packed,
                      pole_eps: float = POLE_EPS) -> np.ndarray:
    """The seven conserved quantities of one packed phase vector.

    Returns them as an array in :data:`INVARIANT_NAMES` order.  Raises
    :class:`PoleSingularity` where ``|sin(theta)| < pole_eps`` (the Casimir
    formula divides by it) and :class:`OutOfChart` outside the chart.
    """
    packed = np.asarray(packed, dtype=float).reshape(PHASE_DIM)
    coords, momenta = packed[:5], packed[5:]
    require_interior(params, coords)
    if abs(math.sin(coords[0])) < pole_eps:
        raise PoleSingularity(
            f"sin(theta) = {math.sin(coords[0]):.3e} below {pole_eps:.1e}")
    g, _, _ = kernels.metric_blocks(params.a, coords[0], coords[2])
    velocities = np.linalg.solve(g, momenta)
    energy = 0.5 * float(momenta @ velocities)
    casimir = float(_casimir(coords[0], momenta))
    charge_pair = float(quadratic_charge_transverse(params, coords, velocities))
    charge_contact = float(quadratic_charge_contact(params, coords, velocities))
    return np.array([energy, momenta[1], momenta[4], momenta[3],
                     casimir, charge_pair, charge_contact])


def invariants(params: PQParams, state,
               pole_eps: float = POLE_EPS) -> InvariantVector:
    """The seven conserved quantities of a phase-space state."""
    values = invariants_packed(params, _packed_of(state), pole_eps)
    return InvariantVector(*values)


# ---------------------------------------------------------------------------
# jet-evaluable phase functions
# ---------------------------------------------------------------------------

def phase_jets(state) -> list:
    """Second-order jets of the ten phase variables, seeded at ``state``."""
    packed = _packed_of(state)
    return [J.variable(packed[i], i, PHASE_DIM) for i in range(PHASE_DIM)]


def _metric_jet_matrix(params: PQParams, coord_vars) -> list:
    """Dense symmetric 5x5 metric matrix over jet (or float) coordinates."""
    entries = metric_field(params).components(coord_vars)
    g = [[0.0] * 5 for _ in range(5)]
    for (i, k), val in entries.items():
        g[i][k] = val
        if i != k:
            g[k][i] = val
    return g


def make_invariant_functions(params: PQParams) -> Mapping[str, Callable]:
    """The seven conserved quantities as jet-evaluable phase functions.

    Returns an ordered mapping ``name -> f`` with names as in
    :data:`INVARIANT_NAMES`; each ``f`` consumes the list of ten phase
    variables (jets from :func:`phase_jets`, or plain floats) and returns the
    corresponding scalar.  These drive :func:`poisson_bracket` and
    :func:`jacobian_rank`.
    """

    def solved_velocities(z):
        g = _metric_jet_matrix(params, z[:5])
        return jet_solve(g, list(z[5:]))

    def energy(z):
        v = solved_velocities(z)
        return 0.5 * (z[5] * v[0] + z[6] * v[1] + z[7] * v[2]
                      + z[8] * v[3] + z[9] * v[4])

    def momentum_phi(z):
        return z[6]

    def momentum_psi(z):
        return z[9]

    def momentum_alpha(z):
        return z[8]

    def casimir(z):
        return _casimir(z[0], z[5:])

    def charge_pair(z):
        return quadratic_charge_transverse(params, z[:5], solved_velocities(z))

    def charge_contact(z):
        return quadratic_charge_contact(params, z[:5], solved_velocities(z))

    return dict(zip(INVARIANT_NAMES,
                    (energy, momentum_phi, momentum_psi, momentum_alpha,
                     casimir, charge_pair, charge_contact)))


def poisson_bracket(params: PQParams, f: Callable, g: Callable, state) -> float:
    """Canonical Poisson bracket ``{f, g}`` evaluated at one state.

    ``f`` and ``g`` consume the list of ten phase-variable jets (coordinates
    first, then momenta) as produced by :func:`phase_jets`.  The bracket is
    assembled from exact jet gradients, so ``{f, f}`` is exactly zero.
    """
    z = phase_jets(state)
    f_grad = J.asjet(f(z), PHASE_DIM).grad
    g_grad = J.asjet(g(z), PHASE_DIM).grad
    total = 0.0
    for i in range(5):
        total += f_grad[i] * g_grad[5 + i] - f_grad[5 + i] * g_grad[i]
    return float(total)


# ---------------------------------------------------------------------------
# functional independence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RankResult:
    """Numeric rank data of the invariant Jacobian at one state."""

    rank: int
    singular_values: np.ndarray
    degenerate: bool

    def to_dict(self) -> dict:
        return {"rank": self.rank,
                "singular_values": [float(s) for s in self.singular_values],
                "degenerate": self.degenerate}


def _is_degenerate(packed: np.ndarray) -> bool:
    """Whether a state sits on a symmetry locus where the rank may drop."""
    momenta = packed[5:]
    scale = max(1.0, float(np.max(np.abs(momenta))))
    if float(np.min(np.abs(momenta))) < 1e-10 * scale:
        return True
    return abs(math.sin(packed[0])) < 1e-6


def jacobian_rank(params: PQParams, states: Sequence,
                  which: Sequence[str] | None = None,
                  sv_rtol: float = 1e-8) -> list[RankResult]:
    """Numeric rank of the invariant Jacobian at each given state.

    Builds, per state, the matrix of exact phase-space gradients of the
    selected conserved quantities (rows) with respect to the ten phase
    variables (columns), and counts singular values above ``sv_rtol`` times
    the largest one.  All singular values are reported so callers can
    re-threshold.  States on a symmetry locus (some momentum component zero,
    or ``theta`` at a pole) are flagged ``degenerate`` rather than rejected.
    """
    funcs = make_invariant_functions(params)
    if which is None:
        which = INVARIANT_NAMES
    unknown = [name for name in which if name not in funcs]
    if unknown:
        raise ValueError(f"unknown invariant names: {unknown}")
    selected = [funcs[name] for name in which]
    results = []
    for state in states:
        packed = _packed_of(state)
        require_interior(params, packed[:5])
        z = phase_jets(packed)
        rows = [np.asarray(J.asjet(fn(z), PHASE_DIM).grad, dtype=float)
                for fn in selected]
        matrix = np.vstack(rows)
        singular = np.linalg.svd(matrix, compute_uv=False)
        top = float(singular[0]) if singular.size else 0.0
        rank = int(np.count_nonzero(singular > sv_rtol * top)) if top > 0 else 0
        results.append(RankResult(rank, singular, _is_degenerate(packed)))
    return results


# ---------------------------------------------------------------------------
# trajectory integration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    """Sampled geodesic with per-sample conserved quantities and drifts.

    ``status`` is ``"ok"`` for a run that reached ``t_end``, ``"chart_exit"``
    when the orbit approached a chart boundary (a diagnostic, not an error),
    and ``"step_failure"`` when the step size collapsed away from any
    boundary.  ``drifts`` holds ``|I(t) - I(0)| / max(|I(0)|, 1)`` per sample
    and invariant.
    """

    status: str
    times: np.ndarray
    states: np.ndarray
    invariant_values: np.ndarray
    drifts: np.ndarray
    baseline: np.ndarray
    t_final: float
    accepted_steps: int
    rejected_steps: int
    final_state: np.ndarray

    @property
    def max_drift(self) -> np.ndarray:
        """Worst drift over the samples, one entry per invariant.

        Samples where an invariant is undefined (pole-adjacent rows of a
        chart-exit trajectory) are skipped; an all-undefined column is NaN.
        """
        out = np.full(len(INVARIANT_NAMES), np.nan)
        for k in range(self.drifts.shape[1]):
            column = self.drifts[:, k]
            finite = column[np.isfinite(column)]
            if finite.size:
                out[k] = float(finite.max())
        return out if self.drifts.shape[0] else np.zeros(len(INVARIANT_NAMES))

    def phase_state(self, row: int) -> PhaseState:
        return PhaseState.from_packed(self.states[row])


def integrate_geodesic(params: PQParams, state0, t_end: float = 50.0, *,
                       rtol: float = 1e-10, atol: float = 1e-12,
                       n_samples: int = 100,
                       sample_times: Sequence | None = None,
                       exit_margin: float = 1e-6,
                       max_steps: int = 1_000_000) -> Trajectory:
    """Integrate the geodesic flow from ``state0`` over ``[0, t_end]``.

    Hamilton's equations are advanced with the adaptive Dormand-Prince
    8(5,3) kernel; steps are clamped to land exactly on the requested sample
    times, where the state and all seven conserved quantities are recorded.
    A chart exit (orbit within ``exit_margin`` of a pole or a ``y`` edge)
    stops the run early with status ``"chart_exit"``, the samples collected
    so far, and a final state bisected onto the collar edge.  The default
    collar is deliberately thin: the flow is regular throughout the open
    chart, and turning points closer than 1e-3 to the ``y`` edges are
    routinely integrated without measurable extra drift, so the collar only
    flags orbits genuinely aimed at a boundary.
    """
    packed0 = _packed_of(state0)
    require_interior(params, packed0[:5])
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    if sample_times is None:
        sample_times = np.linspace(0.0, float(t_end), n_samples + 1)
    sample_times = np.asarray(sample_times, dtype=float)
    if sample_times.ndim != 1 or sample_times.size == 0:
        raise ValueError("sample_times must be a non-empty 1-d array")
    if np.any(np.diff(sample_times) <= 0.0):
        raise ValueError("sample_times must be strictly increasing")
    if sample_times[0] < 0.0 or sample_times[-1] > t_end + 1e-12:
        raise ValueError("sample_times must lie within [0, t_end]")

    status_code, t_final, end_state, samples, filled, accepted, rejected = \
        kernels.integrate_kernel(params.a, params.y1, params.y2, packed0,
                                 sample_times, float(rtol), float(atol),
                                 float(exit_margin), int(max_steps))

    baseline = invariants_packed(params, packed0)
    times = np.array(sample_times[:filled])
    states = np.array(samples[:filled])
    values = np.empty((filled, len(INVARIANT_NAMES)))
    for row in range(filled):
        try:
            values[row] = invariants_packed(params, states[row])
        except PoleSingularity:
            values[row] = np.nan
    denom = np.maximum(np.abs(baseline), 1.0)
    drifts = np.abs(values - baseline) / denom
    return Trajectory(status=_STATUS_NAMES[int(status_code)],
                      times=times, states=states, invariant_values=values,
                      drifts=drifts, baseline=baseline, t_final=float(t_final),
                      accepted_steps=int(accepted), rejected_steps=int(rejected),
                      final_state=np.array(end_state))
