"""Ricci-flat metric cone over the five-dimensional base.

The warped product dr^2 + r^2 g turns the Einstein base into a Ricci-flat
six-manifold whose geometry packages the base's distinguished forms as
parallel forms: a degree-k Killing form lifts to the closed, parallel
(k+1)-form r^k dr ^ psi + r^(k+1)/(k+1) d(psi). The complex chart of the
toric module exhibits the cone as a complex threefold with a global
holomorphic volume form; contracting that form with the radial direction
recovers the degree-2 complex pair on the base up to one overall complex
constant, which is fitted at a frozen reference point rather than assumed.
"""

from __future__ import annotations

import math

import numpy as np

from . import ypq
from .errors import OutOfChart
from .geomcore import jets as J
from .geomcore.charts import ChartPoint
from .geomcore.curvature import FormField, MetricField, evaluate_form
from .geomcore.forms import AntisymForm, d_of_form, differential
from .toric import complex_coordinate_jets
from .ypq import PQParams, require_interior

__all__ = [
    "CONE_DIM", "cone_metric_field", "reference_point",
    "lift_form_field", "lift_form",
    "holomorphic_volume_field", "holomorphic_volume",
    "extract_base_killing", "extraction_fit", "printed_pair_complex",
    "wedge_expansion_check",
]

CONE_DIM = 6

#: The radial coordinate 1-form on the cone chart.
_DR = AntisymForm(CONE_DIM, 1, {(0,): 1.0})


def reference_point(params: PQParams) -> np.ndarray:
    """Frozen cone point used to pin fitted constants: unit radius, equator,
    midpoint of the axial interval, all angles zero."""
    return np.array([1.0, 0.5 * math.pi, 0.0,
                     0.5 * (params.y1 + params.y2), 0.0, 0.0])


def _coords6(params: PQParams, pt, margin: float = 0.0) -> np.ndarray:
    coords = np.asarray(pt.coords if isinstance(pt, ChartPoint) else pt,
                        dtype=float)
    if coords.shape != (CONE_DIM,):
        raise ValueError(f"expected {CONE_DIM} coordinates, got {coords.shape}")
    if coords[0] <= 0.0:
        raise OutOfChart(f"cone radius must be positive, got {coords[0]}")
    require_interior(params, coords[1:], margin)
    return coords


# ---------------------------------------------------------------------------
# Cone metric
# ---------------------------------------------------------------------------

def cone_metric_field(params: PQParams) -> MetricField:
    """dr^2 + r^2 (base metric), as a six-coordinate component builder."""
    base = ypq.metric_field(params)

    def components(coords):
        r = coords[0]
        r2 = r * r
        out = {(0, 0): 1.0}
        for (i, j), entry in base(list(coords[1:])).items():
            out[(i + 1, j + 1)] = r2 * entry
        return out

    return MetricField(CONE_DIM, components)


# ---------------------------------------------------------------------------
# Lifting base forms to the cone
# ---------------------------------------------------------------------------

def _embed_base_form(form: AntisymForm) -> AntisymForm:
    """Reindex a base-chart form to the cone chart (no radial component)."""
    out = AntisymForm(CONE_DIM, form.degree)
    for key, val in form.comps.items():
        out.comps[tuple(i + 1 for i in key)] = val
    return out


def lift_form_field(base_field: FormField) -> FormField:
    """Parallel-candidate lift of a degree-k base form to the cone:
    r^k dr ^ psi + r^(k+1)/(k+1) d(psi)."""
    k = base_field.degree

    def build(coords):
        r = coords[0]
        psi = _embed_base_form(base_field.func(list(coords[1:])))
        return (_DR.wedge(psi) * r ** k
                + d_of_form(psi) * (r ** (k + 1) * (1.0 / (k + 1))))

    return FormField(CONE_DIM, k + 1, build)


def lift_form(params: PQParams, base_field: FormField, pt) -> AntisymForm:
    """Numeric components of the lifted form at one cone point."""
    coords = _coords6(params, pt)
    return evaluate_form(lift_form_field(base_field), coords).values()


# ---------------------------------------------------------------------------
# Holomorphic volume form
# ---------------------------------------------------------------------------

def holomorphic_volume_field(params: PQParams) -> FormField:
    """exp(z1) dz1 ^ dz2 ^ dz3 over the closed-form complex chart."""

    def build(coords):
        zs = complex_coordinate_jets(params, list(coords))
        dz1, dz2, dz3 = (differential(z, CONE_DIM) for z in zs)
        return dz1.wedge(dz2).wedge(dz3) * J.exp(zs[0])

    return FormField(CONE_DIM, 3, build)


def holomorphic_volume(params: PQParams, pt) -> AntisymForm:
    """Numeric components of the holomorphic volume form at one cone point."""
    coords = _coords6(params, pt)
    return evaluate_form(holomorphic_volume_field(params), coords).values()


# ---------------------------------------------------------------------------
# Extraction of the degree-2 base pair
# ---------------------------------------------------------------------------

def extract_base_killing(params: PQParams, pt) -> AntisymForm:
    """(1/r^2) (radial vector contracted into the holomorphic volume form),
    reindexed to the base chart.

    By homogeneity the result is independent of the radius, and its real and
    imaginary parts reproduce the degree-2 pair of ``ypq.special_form_fields``
    up to one overall complex constant (see :func:`extraction_fit`).
    """
    coords = _coords6(params, pt)
    r = coords[0]
    omega = holomorphic_volume(params, coords)
    radial = omega.interior(np.eye(CONE_DIM)[0])
    out = AntisymForm(CONE_DIM - 1, 2)
    scale = 1.0 / (r * r)
    for key, val in radial.comps.items():
        out.comps[tuple(i - 1 for i in key)] = val * scale
    return out


def printed_pair_complex(params: PQParams, coords5) -> AntisymForm:
    """The degree-2 pair as a single complex form: real part + i imaginary."""
    forms = ypq.special_forms(params, coords5)
    return forms["RePsi"] + forms["ImPsi"] * 1j


def extraction_fit(params: PQParams, pt=None) -> complex:
    """Least-squares complex constant lam with extraction = lam * printed pair,
    fitted at one point (the frozen :func:`reference_point` by default)."""
    coords = reference_point(params) if pt is None else _coords6(params, pt)
    extracted = extract_base_killing(params, coords).dense().ravel()
    printed = printed_pair_complex(params, coords[1:]).dense().ravel()
    return complex(np.vdot(printed, extracted) / np.vdot(printed, printed))


# ---------------------------------------------------------------------------
# Printed wedge expansions
# ---------------------------------------------------------------------------

_AXIS_INDEX = {"theta": 0, "phi": 1, "y": 2, "alpha": 3, "psi": 4}


def _pair_form(ell: float, terms) -> AntisymForm:
    """Assemble a complex 2-form from (coefficient, axis, axis) rows.

    Axis ``gamma`` denotes the rescaled angle alpha/ell, so a gamma slot
    contributes the alpha component with an extra 1/ell factor.
    """
    out = AntisymForm(5, 2)
    for coeff, n1, n2 in terms:
        c = complex(coeff)
        if n1 == "gamma":
            n1, c = "alpha", c / ell
        if n2 == "gamma":
            n2, c = "alpha", c / ell
        out.add_to((_AXIS_INDEX[n1], _AXIS_INDEX[n2]), c)
    return out


def _angular_one_forms(params: PQParams, coords6) -> list:
    """dr-free parts of the complex chart differentials, on the base chart."""
    zs = complex_coordinate_jets(params, J.seed(np.asarray(coords6, float)))
    ts = []
    for z in zs:
        comps = {}
        for mu in range(1, CONE_DIM):
            g = complex(z.grad[mu])
            if g != 0.0:
                comps[(mu - 1,)] = g
        ts.append(AntisymForm(CONE_DIM - 1, 1, comps))
    return ts


def wedge_expansion_check(params: PQParams, pt) -> dict:
    """Residuals of the closed-form pairwise wedge expansions at one point.

    Each entry is the max-norm difference between a wedge of the dr-free
    chart differentials and its hand-expanded counterpart; the last entry
    compares the assembled radial extraction against its fully expanded form
    (same overall constant, no refitting).
    """
    coords = _coords6(params, pt)
    t1, t2, t3 = _angular_one_forms(params, coords)

    th, y, psi = coords[1], coords[3], coords[5]
    p, l, ell = params.p, params.l, params.ell
    y1, y3 = params.y1, params.y3
    half_cubic = y ** 3 - 1.5 * y * y + 0.5 * params.a
    ratio = 3.0 * y * (y - 1.0) / half_cubic
    pole_term = (p * (y1 - y3) * (y - 1.0)
                 / (2.0 * (1.0 - y1) * (y - y1) * (y - y3)))
    bracket = pole_term + 0.25 * l * ratio
    tan_half = math.tan(0.5 * th)
    cot = math.cos(th) / math.sin(th)
    csc = 1.0 / math.sin(th)

    printed_23 = _pair_form(ell, [
        (tan_half * bracket, "theta", "y"),
        (-1j * bracket, "y", "phi"),
        (1j * bracket, "y", "psi"),
        (-0.5j * ratio, "y", "gamma"),
        (1j * tan_half, "theta", "gamma"),
        (-1.0, "phi", "gamma"),
        (1.0, "psi", "gamma"),
    ])
    printed_13 = _pair_form(ell, [
        (pole_term * cot - 0.25 * l * ratio * tan_half, "theta", "y"),
        (-1j * bracket, "y", "psi"),
        (0.5j * l * cot, "theta", "phi"),
        (1j * cot, "theta", "gamma"),
        (-0.5j * l * csc, "theta", "psi"),
        (0.25j * l * ratio, "y", "phi"),
        (0.5j * ratio, "y", "gamma"),
        (-0.5 * l, "psi", "phi"),
        (-1.0, "psi", "gamma"),
    ])
    printed_12 = _pair_form(ell, [
        (-0.5 * csc * ratio, "theta", "y"),
        (1j * cot, "theta", "phi"),
        (-1j * csc, "theta", "psi"),
        (0.5j * ratio, "y", "phi"),
        (-1.0, "psi", "phi"),
    ])

    kappa = p * (y1 - y3) / (1.0 - y1)
    w23, w13, w12 = t2.wedge(t3), t1.wedge(t3), t1.wedge(t2)
    prefactor = math.sin(th) * math.sqrt(half_cubic) * np.exp(1j * psi)
    assembled = (w23 * 3.0 + w13 * 3.0 + w12 * kappa) * prefactor

    coeff = ypq.extraction_coefficient(params, y)
    sin_th, cos_th = math.sin(th), math.cos(th)
    expanded = _pair_form(ell, [
        (coeff, "theta", "y"),
        (0.5 / ell * sin_th, "psi", "phi"),
        (-3.0 * sin_th, "phi", "gamma"),
        (0.5j / ell, "theta", "psi"),
        (3.0j, "theta", "gamma"),
        (-1j * coeff * sin_th, "y", "phi"),
        (-0.5j / ell * cos_th, "theta", "phi"),
    ]) * (math.sqrt(half_cubic) * np.exp(1j * psi))

    return {
        "t2_wedge_t3": (w23 - printed_23).max_abs(),
        "t1_wedge_t3": (w13 - printed_13).max_abs(),
        "t1_wedge_t2": (w12 - printed_12).max_abs(),
        "assembled_extraction": (assembled - expanded).max_abs(),
    }
