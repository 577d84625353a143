"""Hot numeric kernels: metric with hand-coded gradients, Hamiltonian flow
right-hand side, and an adaptive embedded Runge-Kutta integrator.

Everything here is written to compile under numba's ``@njit`` (selected by
the ``YPQ_NUMBA`` environment flag via :mod:`ypqgeo._accel`) while running
unchanged as plain numpy when acceleration is off. The derivative formulas
are independent re-derivations of what the jet machinery computes
automatically; the test suite pins them against each other.

State layout for the flow: ``(theta, phi, y, alpha, psi, P_theta, P_phi,
P_y, P_alpha, P_psi)`` — five chart coordinates then their conjugate
momenta. Only the theta- and y-momenta evolve: the metric depends on no
other coordinate, so the remaining momenta are conserved exactly.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import njit
from ._rk_coefficients import A as RK_A
from ._rk_coefficients import B as RK_B
from ._rk_coefficients import C as RK_C
from ._rk_coefficients import E3 as RK_E3
from ._rk_coefficients import E5 as RK_E5
from ._rk_coefficients import N_STAGES

__all__ = [
    "STATUS_OK", "STATUS_CHART_EXIT", "STATUS_STEP_FAILURE",
    "metric_blocks", "hamilton_rhs", "hamiltonian", "solve_spd",
    "integrate_kernel",
]

STATUS_OK = 0
STATUS_CHART_EXIT = 1
STATUS_STEP_FAILURE = 2

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_ERROR_EXPONENT = -0.125  # embedded error estimator has order 7


@njit(cache=True)
def metric_blocks(a: float, theta: float, y: float):
    """Metric matrix with its theta- and y-derivatives, all (5, 5).

    Closed-form partials (quotient rule throughout); the cubic
    a - 3y^2 + 2y^3 and its factors recur in every block.
    """
    s = math.sin(theta)
    c = math.cos(theta)
    one_my = 1.0 - y
    cubic = a - 3.0 * y * y + 2.0 * y ** 3
    dcubic = 6.0 * y * (y - 1.0)
    denom = a - y * y

    sphere = one_my / 6.0
    w = 2.0 * denom / one_my
    dw = 2.0 * (a - 2.0 * y + y * y) / (one_my * one_my)
    sig = cubic / denom
    dsig = (dcubic * denom + 2.0 * y * cubic) / (denom * denom)
    f = (a - 2.0 * y + y * y) / (6.0 * denom)
    df = -(a - 2.0 * a * y + y * y) / (3.0 * denom * denom)
    beta = sig / 9.0 + w * f * f
    dbeta = dsig / 9.0 + dw * f * f + 2.0 * w * f * df
    wf = w * f
    dwf = dw * f + w * df

    g = np.zeros((5, 5))
    dth = np.zeros((5, 5))
    dy = np.zeros((5, 5))

    g[0, 0] = sphere
    dy[0, 0] = -1.0 / 6.0

    g[1, 1] = sphere * s * s + beta * c * c
    dth[1, 1] = 2.0 * s * c * (sphere - beta)
    dy[1, 1] = -s * s / 6.0 + dbeta * c * c

    g[2, 2] = one_my / (2.0 * cubic)
    dy[2, 2] = (-cubic - one_my * dcubic) / (2.0 * cubic * cubic)

    g[3, 3] = w
    dy[3, 3] = dw

    g[4, 4] = beta
    dy[4, 4] = dbeta

    g[1, 4] = g[4, 1] = -beta * c
    dth[1, 4] = dth[4, 1] = beta * s
    dy[1, 4] = dy[4, 1] = -dbeta * c

    g[1, 3] = g[3, 1] = -wf * c
    dth[1, 3] = dth[3, 1] = wf * s
    dy[1, 3] = dy[3, 1] = -dwf * c

    g[3, 4] = g[4, 3] = wf
    dy[3, 4] = dy[4, 3] = dwf

    return g, dth, dy


@njit(cache=True)
def solve_spd(mat, rhs):
    """Solve a dense 5x5 system by Gaussian elimination with partial
    pivoting (tiny, allocation-light, and numba-friendly)."""
    a = mat.copy()
    b = rhs.copy()
    for col in range(5):
        piv = col
        best = abs(a[col, col])
        for r in range(col + 1, 5):
            mag = abs(a[r, col])
            if mag > best:
                best = mag
                piv = r
        if piv != col:
            for cc in range(5):
                tmp = a[col, cc]
                a[col, cc] = a[piv, cc]
                a[piv, cc] = tmp
            tmp = b[col]
            b[col] = b[piv]
            b[piv] = tmp
        inv = 1.0 / a[col, col]
        for r in range(col + 1, 5):
            fac = a[r, col] * inv
            if fac != 0.0:
                for cc in range(col, 5):
                    a[r, cc] -= fac * a[col, cc]
                b[r] -= fac * b[col]
    x = np.empty(5)
    for r in range(4, -1, -1):
        acc = b[r]
        for cc in range(r + 1, 5):
            acc -= a[r, cc] * x[cc]
        x[r] = acc / a[r, r]
    return x


@njit(cache=True)
def hamilton_rhs(a: float, state):
    """Time derivative of (coordinates, momenta) under H = P g^{-1} P / 2."""
    g, dth, dy = metric_blocks(a, state[0], state[2])
    v = solve_spd(g, state[5:].copy())
    out = np.empty(10)
    for i in range(5):
        out[i] = v[i]
    acc_th = 0.0
    acc_y = 0.0
    for i in range(5):
        vi = v[i]
        for j in range(5):
            acc_th += vi * dth[i, j] * v[j]
            acc_y += vi * dy[i, j] * v[j]
    out[5] = 0.5 * acc_th
    out[6] = 0.0
    out[7] = 0.5 * acc_y
    out[8] = 0.0
    out[9] = 0.0
    return out


@njit(cache=True)
def hamiltonian(a: float, state) -> float:
    """Kinetic energy P g^{-1} P / 2 of one flow state."""
    g, _, _ = metric_blocks(a, state[0], state[2])
    v = solve_spd(g, state[5:].copy())
    acc = 0.0
    for i in range(5):
        acc += state[5 + i] * v[i]
    return 0.5 * acc


@njit(cache=True)
def _rms(vec) -> float:
    acc = 0.0
    for x in vec:
        acc += x * x
    return math.sqrt(acc / len(vec))


@njit(cache=True)
def _boundary_distance(state, y_lo: float, y_hi: float) -> float:
    d = state[0]
    if math.pi - state[0] < d:
        d = math.pi - state[0]
    if state[2] - y_lo < d:
        d = state[2] - y_lo
    if y_hi - state[2] < d:
        d = y_hi - state[2]
    return d


@njit(cache=True)
def _initial_step(a: float, state, f0, t_end: float, rtol: float,
                  atol: float) -> float:
    """Standard starting-step heuristic for an order-7 error estimator."""
    scale = np.empty(10)
    for i in range(10):
        scale[i] = atol + rtol * abs(state[i])
    d0 = _rms(state / scale)
    d1 = _rms(f0 / scale)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    f1 = hamilton_rhs(a, state + h0 * f0)
    d2 = _rms((f1 - f0) / scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.125
    return min(100.0 * h0, h1, t_end)


@njit(cache=True)
def _step_only(a: float, state, f0, h: float):
    """One full Runge-Kutta step of size ``h`` (solution only, no error)."""
    K = np.empty((N_STAGES, 10))
    for i in range(10):
        K[0, i] = f0[i]
    for s in range(1, N_STAGES):
        stage = np.empty(10)
        for i in range(10):
            acc = 0.0
            for m in range(s):
                acc += RK_A[s, m] * K[m, i]
            stage[i] = state[i] + h * acc
        ks = hamilton_rhs(a, stage)
        for i in range(10):
            K[s, i] = ks[i]
    y_new = np.empty(10)
    for i in range(10):
        acc = 0.0
        for m in range(N_STAGES):
            acc += RK_B[m] * K[m, i]
        y_new[i] = state[i] + h * acc
    return y_new


@njit(cache=True)
def integrate_kernel(a: float, y_lo: float, y_hi: float, state0, sample_ts,
                     rtol: float, atol: float, exit_margin: float,
                     max_steps: int):
    """Integrate the Hamiltonian flow from t = 0, landing on each requested
    sample time exactly (steps are clamped, never interpolated).

    Returns ``(status, t_reached, state, samples, n_filled, n_accepted,
    n_rejected)``; ``state`` is the phase vector at ``t_reached`` and
    ``samples[k]`` is the state at ``sample_ts[k]`` for k < n_filled. A trajectory that leaves the chart collar (theta or y
    within ``exit_margin`` of a boundary) stops with STATUS_CHART_EXIT; an
    unrecoverable step-size collapse away from the boundary reports
    STATUS_STEP_FAILURE.
    """
    nsamp = sample_ts.shape[0]
    samples = np.empty((nsamp, 10))
    state = state0.copy()
    t = 0.0
    filled = 0
    while filled < nsamp and sample_ts[filled] <= 0.0:
        for i in range(10):
            samples[filled, i] = state[i]
        filled += 1
    n_acc = 0
    n_rej = 0
    if filled >= nsamp:
        return STATUS_OK, t, state, samples, filled, n_acc, n_rej

    t_end = sample_ts[nsamp - 1]
    f_cur = hamilton_rhs(a, state)
    h = _initial_step(a, state, f_cur, t_end, rtol, atol)
    K = np.empty((N_STAGES + 1, 10))
    status = STATUS_OK
    rejected_last = False

    while filled < nsamp:
        if n_acc + n_rej >= max_steps:
            status = STATUS_STEP_FAILURE
            break
        target = sample_ts[filled]
        h_try = h
        clamped = False
        if t + h_try >= target:
            h_try = target - t
            clamped = True
        if h_try < 1e-14 * max(1.0, abs(t)):
            if _boundary_distance(state, y_lo, y_hi) < 1e-3:
                status = STATUS_CHART_EXIT
            else:
                status = STATUS_STEP_FAILURE
            break

        # embedded Runge-Kutta step
        for i in range(10):
            K[0, i] = f_cur[i]
        for s in range(1, N_STAGES):
            stage = np.empty(10)
            for i in range(10):
                acc = 0.0
                for m in range(s):
                    acc += RK_A[s, m] * K[m, i]
                stage[i] = state[i] + h_try * acc
            ks = hamilton_rhs(a, stage)
            for i in range(10):
                K[s, i] = ks[i]
        y_new = np.empty(10)
        for i in range(10):
            acc = 0.0
            for m in range(N_STAGES):
                acc += RK_B[m] * K[m, i]
            y_new[i] = state[i] + h_try * acc
        f_new = hamilton_rhs(a, y_new)
        for i in range(10):
            K[N_STAGES, i] = f_new[i]

        # weighted error of the two embedded lower-order solutions
        err5_sq = 0.0
        err3_sq = 0.0
        for i in range(10):
            scale = atol + rtol * max(abs(state[i]), abs(y_new[i]))
            e5 = 0.0
            e3 = 0.0
            for m in range(N_STAGES + 1):
                e5 += RK_E5[m] * K[m, i]
                e3 += RK_E3[m] * K[m, i]
            e5 /= scale
            e3 /= scale
            err5_sq += e5 * e5
            err3_sq += e3 * e3
        if err5_sq == 0.0 and err3_sq == 0.0:
            err_norm = 0.0
        else:
            err_norm = (abs(h_try) * err5_sq
                        / math.sqrt((err5_sq + 0.01 * err3_sq) * 10.0))
        if not math.isfinite(err_norm):
            err_norm = 1e10

        if err_norm < 1.0:
            if err_norm == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = min(_MAX_FACTOR,
                             _SAFETY * err_norm ** _ERROR_EXPONENT)
            if rejected_last:
                factor = min(1.0, factor)
            if _boundary_distance(y_new, y_lo, y_hi) < exit_margin:
                # Bisect the step so the reported exit state sits just
                # inside the collar instead of overshooting the boundary.
                if _boundary_distance(state, y_lo, y_hi) >= exit_margin:
                    lo = 0.0
                    hi = 1.0
                    for _ in range(48):
                        mid = 0.5 * (lo + hi)
                        y_mid = _step_only(a, state, f_cur, mid * h_try)
                        if _boundary_distance(y_mid, y_lo, y_hi) < exit_margin:
                            hi = mid
                        else:
                            lo = mid
                        if (hi - lo) * abs(h_try) < 1e-13:
                            break
                    y_exit = _step_only(a, state, f_cur, hi * h_try)
                    t = t + hi * h_try
                    for i in range(10):
                        state[i] = y_exit[i]
                n_acc += 1
                status = STATUS_CHART_EXIT
                break
            t = target if clamped else t + h_try
            for i in range(10):
                state[i] = y_new[i]
                f_cur[i] = f_new[i]
            n_acc += 1
            rejected_last = False
            h_next = h_try * factor
            if clamped:
                if h_next > h:
                    h = h_next
                while filled < nsamp and sample_ts[filled] <= t:
                    for i in range(10):
                        samples[filled, i] = state[i]
                    filled += 1
            else:
                h = h_next
        else:
            h = h_try * max(_MIN_FACTOR,
                            _SAFETY * err_norm ** _ERROR_EXPONENT)
            n_rej += 1
            rejected_last = True

    return status, t, state, samples, filled, n_acc, n_rej
