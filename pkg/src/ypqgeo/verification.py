"""Verification suites: each evaluates one family of identities at seeded
sample points and reports the worst residual found.

All suites are deterministic functions of ``(params, seed, samples)``: each
derives its own child generator from the seed and its position in
:data:`SUITE_NAMES`, so adding samples to one suite never shifts another's
draws.  Residuals are normalized where the identity has a natural scale
(fit constants, ratios) and absolute where it is a vanishing statement.
"""

from __future__ import annotations

import numpy as np

from . import cone, dynamics, sampling, toric, ypq
from .geomcore import curvature as curv

__all__ = ["SUITE_NAMES", "run_suite", "run_all", "toric_diagnostics"]

SUITE_NAMES = ("einstein", "killing_yano", "special_killing",
               "cone_parallelism", "toric_duality", "wedge_expansion",
               "invariant_consistency")

_EINSTEIN_FACTOR = 4.0
_MARGIN = 0.05


def _suite_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([int(seed), SUITE_NAMES.index(name)])


def _cone_points(params, rng, n: int) -> np.ndarray:
    base = sampling.interior_coordinates(params, rng, n, margin=_MARGIN)
    radii = rng.uniform(0.5, 2.0, size=n)
    return np.column_stack([radii, base])


def suite_einstein(params, rng, samples: int) -> float:
    """Worst deviation of the Ricci tensor from 4 times the metric."""
    field = ypq.metric_field(params)
    worst = 0.0
    for pt in sampling.interior_coordinates(params, rng, samples, _MARGIN):
        ric = curv.ricci(field, pt)
        g = ypq.metric_at(params, pt).g
        worst = max(worst, float(np.max(np.abs(ric - _EINSTEIN_FACTOR * g))))
    return worst


def suite_killing_yano(params, rng, samples: int) -> float:
    """Worst Killing-Yano residual over the four special forms."""
    field = ypq.metric_field(params)
    special = ypq.special_form_fields(params)
    forms = [ypq.eta_field(params), special["Psi1"],
             special["RePsi"], special["ImPsi"]]
    n = max(samples // 2, 5)
    worst = 0.0
    for pt in sampling.interior_coordinates(params, rng, n, _MARGIN):
        for form in forms:
            worst = max(worst, float(
                curv.killing_yano_residual(field, form, pt)))
    return worst


def suite_special_killing(params, rng, samples: int) -> float:
    """Relative spread of the special-Killing constants of the two
    closed-under-d forms (the contact 1-form and the degree-3 form)."""
    field = ypq.metric_field(params)
    n = max(samples // 4, 5)
    pts = sampling.interior_coordinates(params, rng, n, _MARGIN)
    worst = 0.0
    for form in (ypq.eta_field(params),
                 ypq.special_form_fields(params)["Psi1"]):
        fit = curv.special_killing_fit(field, form, pts)
        worst = max(worst, fit.c_std / abs(fit.c))
    return worst


def suite_cone_parallelism(params, rng, samples: int) -> float:
    """Worst covariant-derivative component of the parallel cone forms,
    plus closedness of the complex volume form."""
    cone_field = cone.cone_metric_field(params)
    forms = ypq.special_form_fields(params)
    volume = cone.holomorphic_volume_field(params)
    lifted = [cone.lift_form_field(forms["RePsi"]),
              cone.lift_form_field(forms["ImPsi"]),
              volume]
    n = max(samples // 10, 3)
    worst = 0.0
    for pt in _cone_points(params, rng, n):
        for field in lifted:
            nabla = curv.covariant_derivative_form(cone_field, field, pt)
            worst = max(worst, float(np.max(np.abs(nabla))))
        worst = max(worst, float(
            curv.exterior_derivative(volume, pt).max_abs()))
    return worst


def toric_diagnostics(params, rng, n: int) -> dict:
    """Per-family duality residuals plus the fitted determinant constant,
    sampled at ``n`` moment-cone points.

    Keys of ``residuals``: worst inverse-Hessian-pair deviation from the
    identity, worst gradient roundtrip error, per-axis constancy spread of
    the log-complex-coordinate versus dual-gradient offset, and the relative
    spread of the Hessian determinant constant.
    """
    model = toric.ypq_toric_model(params)
    base = sampling.interior_coordinates(params, rng, n, margin=0.15)
    radii = rng.uniform(0.5, 2.0, size=n)
    moments = np.array([toric.momentum_map(params, radii[k], base[k])
                        for k in range(n)])
    inverse_hessian = 0.0
    roundtrip = 0.0
    grad_diffs = np.empty((n, 3))
    for k, y_m in enumerate(moments):
        hess_g = toric.hessian_analytic(model, y_m)
        x_pt, y_back, _ = toric.legendre_roundtrip(model, y_m)
        hess_f = toric.legendre_hessian_fd(model, x_pt, y_m)
        inverse_hessian = max(inverse_hessian, float(
            np.max(np.abs(hess_f @ hess_g - np.eye(3)))))
        roundtrip = max(roundtrip, float(np.max(np.abs(y_back - y_m))))
        z = toric.complex_coordinates(params, radii[k], base[k])
        grad_diffs[k] = z.real - x_pt
    c_mean, c_std = toric.fit_det_constant(model, moments)
    return {
        "model": model,
        "residuals": {
            "inverse_hessian": inverse_hessian,
            "gradient_roundtrip": roundtrip,
            "gradient_offset_spread": float(np.max(grad_diffs.std(axis=0))),
            "det_constant_spread": float(c_std / abs(c_mean)),
        },
        "det_constant": {"mean": float(c_mean), "std": float(c_std)},
    }


def suite_toric_duality(params, rng, samples: int) -> float:
    """Worst residual over all Legendre-duality families."""
    detail = toric_diagnostics(params, rng, max(samples // 4, 5))
    return max(detail["residuals"].values())


def suite_wedge_expansion(params, rng, samples: int) -> float:
    """Worst residual of the closed-form wedge expansions on the cone."""
    n = max(samples // 10, 3)
    worst = 0.0
    for pt in _cone_points(params, rng, n):
        for residual in cone.wedge_expansion_check(params, pt).values():
            worst = max(worst, float(residual))
    return worst


def suite_invariant_consistency(params, rng, samples: int) -> float:
    """Printed-expansion charges versus tensor squares of the special forms:
    ratio constancy, equality of the two pair members, and vanishing of the
    mixed contraction."""
    field = ypq.metric_field(params)
    forms = ypq.special_form_fields(params)
    n = max(samples // 2, 10)
    states = sampling.random_phase_states(params, rng, n, margin=_MARGIN)
    ratios_pair = np.empty(n)
    ratios_contact = np.empty(n)
    worst = 0.0
    for k, state in enumerate(states):
        pt = state.coords
        v = dynamics.velocities_from_momenta(params, pt, state.momenta)
        printed_pair = dynamics.quadratic_charge_transverse(params, pt, v)
        printed_contact = dynamics.quadratic_charge_contact(params, pt, v)
        re_sq = v @ curv.ky_to_sk(field, forms["RePsi"], forms["RePsi"],
                                  pt) @ v
        im_sq = v @ curv.ky_to_sk(field, forms["ImPsi"], forms["ImPsi"],
                                  pt) @ v
        mixed = v @ curv.ky_to_sk(field, forms["RePsi"], forms["ImPsi"],
                                  pt) @ v
        contact_sq = v @ curv.ky_to_sk(field, forms["Psi1"], forms["Psi1"],
                                       pt) @ v
        ratios_pair[k] = re_sq / printed_pair
        ratios_contact[k] = contact_sq / printed_contact
        scale = max(1.0, abs(printed_pair))
        worst = max(worst, abs(re_sq - im_sq) / scale, abs(mixed) / scale)
    worst = max(worst, float(ratios_pair.std() / abs(ratios_pair.mean())))
    worst = max(worst,
                float(ratios_contact.std() / abs(ratios_contact.mean())))
    return worst


_SUITES = {
    "einstein": suite_einstein,
    "killing_yano": suite_killing_yano,
    "special_killing": suite_special_killing,
    "cone_parallelism": suite_cone_parallelism,
    "toric_duality": suite_toric_duality,
    "wedge_expansion": suite_wedge_expansion,
    "invariant_consistency": suite_invariant_consistency,
}


def run_suite(name: str, params, seed: int, samples: int) -> float:
    """Worst residual of one named suite under a derived child seed."""
    if name not in _SUITES:
        raise ValueError(f"unknown suite: {name}")
    return _SUITES[name](params, _suite_rng(seed, name), samples)


def run_all(params, seed: int, samples: int, tolerance: float) -> list[dict]:
    """All suites in declaration order as report rows."""
    rows = []
    for name in SUITE_NAMES:
        residual = run_suite(name, params, seed, samples)
        rows.append({"name": name,
                     "max_residual": float(residual),
                     "tolerance": float(tolerance),
                     "pass": bool(residual < tolerance)})
    return rows
