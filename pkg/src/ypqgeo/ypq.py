"""Five-dimensional squashed Sasaki-Einstein metrics labeled by coprime (p, q).

Chart coordinates are (theta, phi, y, alpha, psi): a polar pair on a round
two-sphere, a squashed fiber coordinate y confined between two roots of a
cubic, a circle angle alpha, and a third angle psi. The metric is Einstein
with Ricci = 4 g, and carries a contact one-form whose Reeb field is Killing
with unit norm. All scalar profile functions accept plain floats or jets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geomcore
from .errors import NotCoprime, OutOfChart, OutOfRange
from .geomcore import AntisymForm, ChartPoint, FormField, MetricField
from .geomcore import jets as J

__all__ = [
    "PQParams", "MetricFunctions", "make_params", "cubic", "metric_field",
    "metric_at", "eta_at", "eta_field", "reeb_at", "special_forms",
    "special_form_fields", "is_interior", "require_interior",
    "fiber_profile", "sigma_profile", "twist_profile", "radial_profile",
    "extraction_coefficient", "KNOWN_ISOMETRIES",
]


@dataclass(frozen=True)
class PQParams:
    """Closed-form data of one member of the family.

    ``a`` parametrizes the cubic  a - 3y^2 + 2y^3  whose roots are
    y1 < 0 < y2 < 1 < y3; the fiber coordinate lives on (y1, y2).
    ``ell`` is the period scale of the alpha circle and ``l = p - q``.
    """

    p: int
    q: int
    a: float
    ell: float
    l: int
    y1: float
    y2: float
    y3: float

    @property
    def pq(self) -> tuple[int, int]:
        return (self.p, self.q)

    def describe(self) -> str:
        return f"Y({self.p},{self.q})"


def cubic(params: PQParams, y):
    """The defining cubic a - 3y^2 + 2y^3 (zero at y1, y2, y3)."""
    return params.a - 3.0 * y * y + 2.0 * y * y * y


def _cubic_newton(a: float, y: float) -> float:
    """One Newton step on a - 3y^2 + 2y^3 = 0 to polish a closed-form root."""
    for _ in range(2):
        f = a - 3.0 * y * y + 2.0 * y * y * y
        df = 6.0 * y * (y - 1.0)
        if df == 0.0:
            return y
        y -= f / df
    return y


def make_params(p: int, q: int) -> PQParams:
    """Build parameters from two coprime integers with 0 < q < p."""
    if not (isinstance(p, (int, np.integer)) and isinstance(q, (int, np.integer))):
        raise OutOfRange("p and q must be integers")
    p, q = int(p), int(q)
    if p <= 0 or q <= 0:
        raise OutOfRange(f"need 0 < q < p, got (p, q) = ({p}, {q})")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"(p, q) = ({p}, {q}) share a common factor")
    if q >= p:
        raise OutOfRange(f"need 0 < q < p, got (p, q) = ({p}, {q})")

    root = math.sqrt(4.0 * p * p - 3.0 * q * q)
    a = 0.5 - (p * p - 3.0 * q * q) * root / (4.0 * p ** 3)
    y1 = (2.0 * p - 3.0 * q - root) / (4.0 * p)
    y2 = (2.0 * p + 3.0 * q - root) / (4.0 * p)
    y3 = 0.5 + root / (2.0 * p)
    ell = q / (3.0 * q * q - 2.0 * p * p + p * root)
    y1 = _cubic_newton(a, y1)
    y2 = _cubic_newton(a, y2)
    y3 = _cubic_newton(a, y3)
    return PQParams(p=p, q=q, a=a, ell=ell, l=p - q, y1=y1, y2=y2, y3=y3)


# ---------------------------------------------------------------------------
# Scalar profile functions (float or jet argument)
# ---------------------------------------------------------------------------

def fiber_profile(params: PQParams, y):
    """Squared radius of the alpha circle fiber: 2(a - y^2)/(1 - y)."""
    return 2.0 * (params.a - y * y) / (1.0 - y)


def sigma_profile(params: PQParams, y):
    """Profile of the (dpsi - cos(theta) dphi) block, scaled by 1/9 in the
    metric: (a - 3y^2 + 2y^3)/(a - y^2)."""
    return cubic(params, y) / (params.a - y * y)


def twist_profile(params: PQParams, y):
    """Connection coefficient of the fiber term: (a - 2y + y^2)/(6(a - y^2))."""
    return (params.a - 2.0 * y + y * y) / (6.0 * (params.a - y * y))


def radial_profile(params: PQParams, y):
    """Inverse y-block scale: g_yy = 1/(6 * radial_profile).

    Equals fiber_profile * sigma_profile / 6 and (2y^3 - 3y^2 + a)/(3(1 - y)).
    """
    return cubic(params, y) / (3.0 * (1.0 - y))


def extraction_coefficient(params: PQParams, y, form: str = "compact"):
    """Coefficient of the (dtheta wedge dy) term of the degree-2 form pulled
    out of the holomorphic volume form, in three algebraically equal guises:

    - "difference": the raw two-term expression from the wedge expansion,
    - "factored":   a single rational function with the roots explicit,
    - "compact":    -(3/(2 ell)) (1 - y)/(2y^3 - 3y^2 + a).
    """
    a, y1, y3 = params.a, params.y1, params.y3
    if form == "difference":
        half_cubic = y ** 3 - 1.5 * y * y + 0.5 * a
        lead = params.p * (y1 - y3) / (1.0 - y1)
        return (1.5 * lead * (y - 1.0) / ((y - y1) * (y - y3))
                - 0.5 * lead * 3.0 * y * (y - 1.0) / half_cubic)
    if form == "factored":
        lead = 3.0 * params.p * params.y2 * (y1 - y3) / (1.0 - y1)
        return lead * (1.0 - y) / (2.0 * y ** 3 - 3.0 * y * y + a)
    if form == "compact":
        return -1.5 / params.ell * (1.0 - y) / (2.0 * y ** 3 - 3.0 * y * y + a)
    raise ValueError(f"unknown form {form!r}")


@dataclass(frozen=True)
class MetricFunctions:
    """The scalar profile functions bundled with their parameters."""

    params: PQParams

    def fiber(self, y):
        return fiber_profile(self.params, y)

    def sigma_scale(self, y):
        return sigma_profile(self.params, y)

    def twist(self, y):
        return twist_profile(self.params, y)

    def radial(self, y):
        return radial_profile(self.params, y)

    def extraction(self, y, form: str = "compact"):
        return extraction_coefficient(self.params, y, form)


# ---------------------------------------------------------------------------
# Chart membership
# ---------------------------------------------------------------------------

def is_interior(params: PQParams, coords, margin: float = 0.0) -> bool:
    """True when theta is inside (0, pi) and y inside (y1, y2), both with the
    given absolute margin."""
    theta = float(J.value_of(coords[0]))
    y = float(J.value_of(coords[2]))
    return (margin < theta < math.pi - margin
            and params.y1 + margin < y < params.y2 - margin)


def require_interior(params: PQParams, coords, margin: float = 0.0) -> None:
    if not is_interior(params, coords, margin):
        theta = float(J.value_of(coords[0]))
        y = float(J.value_of(coords[2]))
        raise OutOfChart(
            f"point theta={theta:.6g}, y={y:.6g} outside the open chart "
            f"(0, pi) x ({params.y1:.6g}, {params.y2:.6g})")


def _coords_of(pt) -> np.ndarray:
    if isinstance(pt, ChartPoint):
        return pt.base_coords() if pt.chart.dim == 6 else pt.coords
    return np.asarray(pt, dtype=float)


# ---------------------------------------------------------------------------
# Metric
# ---------------------------------------------------------------------------

def _metric_components(params: PQParams, coords):
    """Component dict of the metric at (possibly jet-valued) coordinates.

    Index order (theta, phi, y, alpha, psi) = (0, 1, 2, 3, 4).
    """
    theta, y = coords[0], coords[2]
    c = J.cos(theta)
    s = J.sin(theta)
    sphere = (1.0 - y) / 6.0
    w = fiber_profile(params, y)
    f = twist_profile(params, y)
    sig = sigma_profile(params, y)
    beta = sig / 9.0 + w * f * f
    wf = w * f
    return {
        (0, 0): sphere,
        (1, 1): sphere * s * s + beta * c * c,
        (2, 2): 1.0 / (6.0 * radial_profile(params, y)),
        (3, 3): w,
        (4, 4): beta,
        (1, 3): -wf * c,
        (1, 4): -beta * c,
        (3, 4): wf,
    }


def metric_field(params: PQParams) -> MetricField:
    """The metric as a field evaluable anywhere in the open chart."""
    return MetricField(5, lambda coords: _metric_components(params, coords))


def metric_at(params: PQParams, pt) -> geomcore.MetricEval:
    """Metric, inverse, and first two derivative stacks at an interior point."""
    coords = _coords_of(pt)
    require_interior(params, coords)
    return geomcore.evaluate_metric(metric_field(params), coords)


# ---------------------------------------------------------------------------
# Contact structure
# ---------------------------------------------------------------------------

def _eta_components(coords):
    """Degree-1 form -2y d(alpha) + ((1-y)/3)(d(psi) - cos(theta) d(phi))."""
    theta, y = coords[0], coords[2]
    third = (1.0 - y) / 3.0
    out = AntisymForm(5, 1)
    out.add_to((1,), -third * J.cos(theta))
    out.add_to((3,), -2.0 * y)
    out.add_to((4,), third)
    return out


def eta_field(params: PQParams) -> FormField:
    return FormField(5, 1, _eta_components)


def eta_at(params: PQParams, pt) -> AntisymForm:
    """Contact one-form components at a point (plain floats)."""
    coords = _coords_of(pt)
    return geomcore.evaluate_form(eta_field(params), coords).values()


def reeb_at(params: PQParams) -> np.ndarray:
    """The Reeb field in chart components: constant (0, 0, 0, -1/2, 3)."""
    return np.array([0.0, 0.0, 0.0, -0.5, 3.0])


#: Constant Killing vectors spanning the torus isometries, plus the Reeb
#: combination; each entry is (name, components).
KNOWN_ISOMETRIES = (
    ("d_phi", np.array([0.0, 1.0, 0.0, 0.0, 0.0])),
    ("d_psi", np.array([0.0, 0.0, 0.0, 0.0, 1.0])),
    ("d_alpha", np.array([0.0, 0.0, 0.0, 1.0, 0.0])),
    ("reeb", np.array([0.0, 0.0, 0.0, -0.5, 3.0])),
)


# ---------------------------------------------------------------------------
# Distinguished forms
# ---------------------------------------------------------------------------

def _phi1_components(coords):
    """d of the contact form: the closed two-form of the structure."""
    theta, y = coords[0], coords[2]
    out = AntisymForm(5, 2)
    out.add_to((2, 3), -2.0 + 0.0 * y)
    out.add_to((2, 4), -1.0 / 3.0 + 0.0 * y)
    out.add_to((1, 2), -J.cos(theta) / 3.0)
    out.add_to((0, 1), (1.0 - y) / 3.0 * J.sin(theta))
    return out


def _psi1_components(coords):
    """Degree-3 Killing form: 9 x (contact form wedge its differential),
    written out so each component is explicit.
    """
    theta, y = coords[0], coords[2]
    s = J.sin(theta)
    out = AntisymForm(5, 3)
    out.add_to((0, 1, 4), (1.0 - y) ** 2 * s)
    out.add_to((2, 3, 4), -6.0 + 0.0 * y)
    out.add_to((1, 2, 3), 6.0 * J.cos(theta))
    out.add_to((0, 1, 3), -6.0 * (1.0 - y) * y * s)
    return out


def _psi_groups(params: PQParams, coords):
    """The two real component groups shared by the degree-2 Killing forms,
    including the overall -(3/(2 ell)) sqrt((1-y)/(6 radial)) scale.
    """
    theta, y = coords[0], coords[2]
    s = J.sin(theta)
    c = J.cos(theta)
    rad = radial_profile(params, y)
    scale = -1.5 / params.ell * J.sqrt((1.0 - y) / (6.0 * rad))
    g1 = AntisymForm(5, 2)
    g1.add_to((0, 2), 1.0 + 0.0 * y)
    g1.add_to((4, 1), -rad * s)
    g1.add_to((1, 3), 6.0 * rad * s)
    g2 = AntisymForm(5, 2)
    g2.add_to((0, 4), -rad)
    g2.add_to((0, 3), -6.0 * rad)
    g2.add_to((2, 1), -s)
    g2.add_to((0, 1), rad * c)
    return scale, g1, g2


def _re_psi_components(params, coords):
    psi = coords[4]
    scale, g1, g2 = _psi_groups(params, coords)
    return (g1 * J.cos(psi) - g2 * J.sin(psi)) * scale


def _im_psi_components(params, coords):
    psi = coords[4]
    scale, g1, g2 = _psi_groups(params, coords)
    return (g1 * J.sin(psi) + g2 * J.cos(psi)) * scale


def special_form_fields(params: PQParams) -> dict[str, FormField]:
    """Field versions of the distinguished forms, keyed per the public names.

    Psi1, Psi2 are the degree-3/degree-5 Killing forms built from the contact
    form; Phi1, Phi2 its closed companions; RePsi, ImPsi the degree-2 special
    Killing forms extracted from the cone's holomorphic volume form.
    """
    eta = _eta_components

    def psi2(coords):
        f1 = _phi1_components(coords)
        return eta(coords).wedge(f1).wedge(f1)

    def phi2(coords):
        f1 = _phi1_components(coords)
        return f1.wedge(f1)

    return {
        "Psi1": FormField(5, 3, _psi1_components),
        "Psi2": FormField(5, 5, psi2),
        "Phi1": FormField(5, 2, _phi1_components),
        "Phi2": FormField(5, 4, phi2),
        "RePsi": FormField(5, 2, lambda c: _re_psi_components(params, c)),
        "ImPsi": FormField(5, 2, lambda c: _im_psi_components(params, c)),
    }


def special_forms(params: PQParams, pt) -> dict[str, AntisymForm]:
    """Numeric components of the distinguished forms at one interior point."""
    coords = _coords_of(pt)
    require_interior(params, coords)
    fields = special_form_fields(params)
    return {name: geomcore.evaluate_form(ff, coords).values()
            for name, ff in fields.items()}
