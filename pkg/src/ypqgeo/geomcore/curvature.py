"""Metric evaluation, curvature, and Killing-structure operators.

All derivative information is produced by second-order jets (see
:mod:`ypqgeo.geomcore.jets`): a metric field evaluated on seeded jets yields
the metric matrix together with its exact first and second coordinate
partials, from which Christoffel symbols, their derivatives, and the Ricci
tensor follow by plain tensor algebra.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from ..errors import DegreeMismatch, NotKilling, SingularMetric
from . import jets as J
from .charts import ChartPoint
from .forms import AntisymForm, d_of_form
from .jets import Jet2, seed

__all__ = [
    "MetricField", "FormField", "MetricEval", "evaluate_metric",
    "evaluate_form", "christoffel", "christoffel_with_partials", "ricci",
    "exterior_derivative", "covariant_derivative_form",
    "killing_yano_residual", "special_killing_fit", "SpecialKillingFit",
    "stackel_killing_residual", "ky_to_sk", "ky_to_sk_with_partials",
    "volume_form", "volume_form_field", "killing_vector_residual",
    "metric_tensor_field", "constant_tensor_field", "ky_tensor_field",
]

RCOND_FLOOR = 1e-10


@dataclass(frozen=True)
class MetricField:
    """A metric presented as a component builder over chart coordinates.

    ``components(coords)`` receives one jet (or float) per coordinate and
    returns ``{(i, j): entry}`` for i <= j; missing entries are zero.
    """

    dim: int
    components: Callable

    def __call__(self, coords):
        return self.components(coords)


@dataclass(frozen=True)
class FormField:
    """A differential form presented as a builder over chart coordinates."""

    dim: int
    degree: int
    func: Callable

    def __call__(self, coords):
        return self.func(coords)

    def d(self) -> "FormField":
        """Exterior derivative, as a field (consumes one jet order)."""
        return FormField(self.dim, self.degree + 1,
                         lambda coords: d_of_form(self.func(coords)))


@dataclass(frozen=True)
class MetricEval:
    """Metric data at a point: value, inverse, and coordinate partials."""

    g: np.ndarray        # (n, n)
    g_inv: np.ndarray    # (n, n)
    dg: np.ndarray       # (n, n, n)   dg[k] = d g / d x^k
    d2g: np.ndarray      # (n, n, n, n) d2g[k, l] = d^2 g / d x^k d x^l
    rcond: float

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def dg_inv(self) -> np.ndarray:
        """Partials of the inverse metric: -g^{-1} (dg) g^{-1}."""
        return -np.einsum("ab,kbc,cd->kad", self.g_inv, self.dg, self.g_inv)


def _coords_of(pt) -> np.ndarray:
    if isinstance(pt, ChartPoint):
        return pt.coords
    return np.asarray(pt, dtype=float)


def evaluate_metric(metric_field: MetricField, pt) -> MetricEval:
    """Evaluate a metric field on seeded jets at ``pt``."""
    coords = _coords_of(pt)
    n = metric_field.dim
    if coords.shape != (n,):
        raise ValueError(f"expected {n} coordinates, got {coords.shape}")
    jets = seed(coords)
    g = np.zeros((n, n))
    dg = np.zeros((n, n, n))
    d2g = np.zeros((n, n, n, n))
    for (i, j), entry in metric_field(jets).items():
        if isinstance(entry, Jet2):
            val, gr, he = entry.val, entry.grad, entry.hess
        else:
            val, gr, he = float(entry), None, None
        g[i, j] = g[j, i] = val
        if gr is not None:
            dg[:, i, j] = gr
            d2g[:, :, i, j] = he
            if i != j:
                dg[:, j, i] = gr
                d2g[:, :, j, i] = he
    svals = np.linalg.svd(g, compute_uv=False)
    rcond = float(svals[-1] / svals[0])
    if rcond < RCOND_FLOOR:
        raise SingularMetric(
            f"metric reciprocal condition {rcond:.3e} below {RCOND_FLOOR:.0e}")
    return MetricEval(g=g, g_inv=np.linalg.inv(g), dg=dg, d2g=d2g, rcond=rcond)


def evaluate_form(form_field: FormField, pt) -> AntisymForm:
    """Evaluate a form field on seeded jets (components become jets)."""
    return form_field(seed(_coords_of(pt)))


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------

def _christoffel_arrays(me: MetricEval):
    t = (np.einsum("msn->smn", me.dg) + np.einsum("nsm->smn", me.dg)
         - me.dg)
    return 0.5 * np.einsum("ls,smn->lmn", me.g_inv, t)


def _christoffel_partial_arrays(me: MetricEval):
    t = (np.einsum("msn->smn", me.dg) + np.einsum("nsm->smn", me.dg)
         - me.dg)
    dt = (np.einsum("kmsn->ksmn", me.d2g) + np.einsum("knsm->ksmn", me.d2g)
          - me.d2g)
    dginv = me.dg_inv()
    return (0.5 * np.einsum("kls,smn->klmn", dginv, t)
            + 0.5 * np.einsum("ls,ksmn->klmn", me.g_inv, dt))


def christoffel(metric_field: MetricField, pt) -> np.ndarray:
    """Christoffel symbols Gamma[l, m, n] = Gamma^l_{mn} at ``pt``."""
    return _christoffel_arrays(evaluate_metric(metric_field, pt))


def christoffel_with_partials(metric_field: MetricField, pt):
    me = evaluate_metric(metric_field, pt)
    return _christoffel_arrays(me), _christoffel_partial_arrays(me), me


def ricci(metric_field: MetricField, pt) -> np.ndarray:
    """Ricci tensor (covariant, symmetric) at ``pt``."""
    gamma, dgamma, _ = christoffel_with_partials(metric_field, pt)
    term1 = np.einsum("aabc->bc", dgamma)
    term2 = np.einsum("baac->bc", dgamma)
    term3 = np.einsum("aab,bcd->cd", gamma, gamma)
    term4 = np.einsum("abc,cad->bd", gamma, gamma)
    ric = term1 - term2 + term3 - term4
    return 0.5 * (ric + ric.T)


# ---------------------------------------------------------------------------
# form calculus
# ---------------------------------------------------------------------------

def exterior_derivative(form_field: FormField, pt) -> AntisymForm:
    """d(form) evaluated at ``pt`` (plain numeric components)."""
    return d_of_form(evaluate_form(form_field, pt)).values()


def covariant_derivative_form(metric_field: MetricField,
                              form_field: FormField, pt) -> np.ndarray:
    """Dense (nabla psi)[mu, i1..ik] = nabla_mu psi_{i1..ik} at ``pt``."""
    me = evaluate_metric(metric_field, pt)
    gamma = _christoffel_arrays(me)
    form = evaluate_form(form_field, pt)
    dense = form.dense()
    nabla = form.dense_partials().astype(
        complex if np.iscomplexobj(dense) else float)
    k = form.degree
    for slot in range(k):
        corr = np.tensordot(gamma, dense, axes=([0], [slot]))
        nabla -= np.moveaxis(corr, 1, slot + 1)
    return nabla


def killing_yano_residual(metric_field: MetricField,
                          form_field: FormField, pt) -> float:
    """Max-norm violation of nabla psi = d(psi)/(k+1) at ``pt``."""
    nabla = covariant_derivative_form(metric_field, form_field, pt)
    k = form_field.degree
    if k == form_field.dim:
        # d of a top-degree form vanishes identically.
        dpsi = np.zeros_like(nabla)
    else:
        dpsi = d_of_form(evaluate_form(form_field, pt)).dense()
    return float(np.max(np.abs(nabla - dpsi / (k + 1))))


@dataclass(frozen=True)
class SpecialKillingFit:
    """Least-squares fit of nabla_X(d psi) = c X-flat wedge psi."""

    c: float
    residual: float
    c_std: float
    per_point_c: np.ndarray = dc_field(repr=False, default=None)


def special_killing_fit(metric_field: MetricField, form_field: FormField,
                        pts, ky_tol: float = 1e-7) -> SpecialKillingFit:
    """Fit the special-Killing constant over a sample of points.

    Raises :class:`NotKilling` if the form fails the Killing-Yano equation at
    any sample point (the fit would be meaningless).
    """
    d_form = form_field.d()
    lhs_all, rhs_all, per_point = [], [], []
    for pt in pts:
        kyr = killing_yano_residual(metric_field, form_field, pt)
        if kyr > ky_tol:
            raise NotKilling(
                f"Killing-Yano residual {kyr:.3e} exceeds {ky_tol:.0e} at {pt}")
        me = evaluate_metric(metric_field, pt)
        lhs = covariant_derivative_form(metric_field, d_form, pt)
        vals = evaluate_form(form_field, pt).values()
        n = metric_field.dim
        rhs = np.empty_like(lhs)
        for mu in range(n):
            xflat = AntisymForm(n, 1, {(nu,): me.g[mu, nu] for nu in range(n)})
            rhs[mu] = xflat.wedge(vals).dense()
        lf, rf = lhs.ravel(), rhs.ravel()
        per_point.append(float(lf @ rf / (rf @ rf)))
        lhs_all.append(lf)
        rhs_all.append(rf)
    lf = np.concatenate(lhs_all)
    rf = np.concatenate(rhs_all)
    c = float(lf @ rf / (rf @ rf))
    residual = float(np.max(np.abs(lf - c * rf)))
    per_point = np.asarray(per_point)
    return SpecialKillingFit(c=c, residual=residual,
                             c_std=float(np.std(per_point)),
                             per_point_c=per_point)


# ---------------------------------------------------------------------------
# Killing-Yano -> Staeckel-Killing
# ---------------------------------------------------------------------------

def _pair_einsum(k: int):
    """Einsum spec contracting the trailing k-1 slots of two dense forms."""
    a_blk = string.ascii_lowercase[:k - 1]            # a, b, c, d
    b_blk = string.ascii_lowercase[4:4 + k - 1]       # e, f, g, h
    psi = "y" + a_blk
    sig = "z" + b_blk
    gs = [a_blk[i] + b_blk[i] for i in range(k - 1)]
    return ",".join([psi, sig] + gs) + "->yz"


def _contract_pair(psi_d: np.ndarray, sigma_d: np.ndarray,
                   g_inv: np.ndarray, k: int) -> np.ndarray:
    spec = _pair_einsum(k)
    return np.einsum(spec, psi_d, sigma_d, *([g_inv] * (k - 1)))


def ky_to_sk(metric_field: MetricField, psi_field: FormField,
             sigma_field: FormField, pt) -> np.ndarray:
    """Symmetric 2-tensor K_ij = psi_{iI} sigma_j^I + sigma_{iI} psi_j^I.

    Index sums run over all (k-1)! orderings of the contracted block, i.e.
    dense full contraction.  Exactly symmetric and bilinear by construction.
    """
    if psi_field.degree != sigma_field.degree:
        raise DegreeMismatch(
            f"degree {psi_field.degree} vs {sigma_field.degree}")
    me = evaluate_metric(metric_field, pt)
    psi_d = evaluate_form(psi_field, pt).values().dense()
    sigma_d = evaluate_form(sigma_field, pt).values().dense()
    k = psi_field.degree
    half = _contract_pair(psi_d, sigma_d, me.g_inv, k)
    return half + half.T


def ky_to_sk_with_partials(me: MetricEval, psi_j: AntisymForm,
                           sigma_j: AntisymForm):
    """(K, dK) for jet-evaluated forms; dK[m] = d K / d x^m."""
    k = psi_j.degree
    if sigma_j.degree != k:
        raise DegreeMismatch(f"degree {k} vs {sigma_j.degree}")
    g_inv, dginv = me.g_inv, me.dg_inv()
    pd, sd = psi_j.dense(), sigma_j.dense()
    dp, ds = psi_j.dense_partials(), sigma_j.dense_partials()
    spec = _pair_einsum(k)
    half = np.einsum(spec, pd, sd, *([g_inv] * (k - 1)))
    K = half + half.T
    n = me.dim
    dK = np.zeros((n, n, n), dtype=K.dtype)
    for m in range(n):
        dhalf = np.einsum(spec, dp[m], sd, *([g_inv] * (k - 1)))
        dhalf += np.einsum(spec, pd, ds[m], *([g_inv] * (k - 1)))
        for j in range(k - 1):
            factors = [g_inv] * (k - 1)
            factors[j] = dginv[m]
            dhalf += np.einsum(spec, pd, sd, *factors)
        dK[m] = dhalf + dhalf.T
    return K, dK


def ky_tensor_field(metric_field: MetricField, psi_field: FormField,
                    sigma_field: FormField):
    """Tensor field ``coords -> (K, dK)`` built from two Killing-Yano forms."""
    def tensor(pt):
        me = evaluate_metric(metric_field, pt)
        psi_j = evaluate_form(psi_field, pt)
        sigma_j = evaluate_form(sigma_field, pt)
        return ky_to_sk_with_partials(me, psi_j, sigma_j)
    return tensor


def metric_tensor_field(metric_field: MetricField):
    """The metric itself as a symmetric tensor field (K = g)."""
    def tensor(pt):
        me = evaluate_metric(metric_field, pt)
        return me.g, me.dg
    return tensor


def constant_tensor_field(matrix: np.ndarray):
    """A coordinate-constant symmetric tensor field (generically not Killing)."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]

    def tensor(pt):
        return matrix, np.zeros((n, n, n))
    return tensor


def stackel_killing_residual(metric_field: MetricField, tensor_field,
                             pt) -> float:
    """Max-norm of the symmetrized covariant derivative of a 2-tensor."""
    me = evaluate_metric(metric_field, pt)
    gamma = _christoffel_arrays(me)
    K, dK = tensor_field(pt)
    nabla = (dK - np.einsum("slm,sn->lmn", gamma, K)
             - np.einsum("sln,ms->lmn", gamma, K))
    sym = (nabla + np.einsum("lmn->mnl", nabla)
           + np.einsum("lmn->nlm", nabla)
           + np.einsum("lmn->lnm", nabla)
           + np.einsum("lmn->mln", nabla)
           + np.einsum("lmn->nml", nabla)) / 6.0
    return float(np.max(np.abs(sym)))


# ---------------------------------------------------------------------------
# auxiliary fields
# ---------------------------------------------------------------------------

def volume_form(me: MetricEval) -> AntisymForm:
    """Riemannian volume form sqrt(det g) dx^0 ^ ... ^ dx^{n-1}."""
    n = me.dim
    return AntisymForm(n, n, {tuple(range(n)): float(np.sqrt(np.linalg.det(me.g)))})


def volume_form_field(metric_field: MetricField) -> FormField:
    """Volume form as a jet field (for parallelism checks)."""

    n = metric_field.dim

    def build(coords):
        entries = metric_field(coords)
        mat = [[entries.get((min(i, j), max(i, j)), 0.0) for j in range(n)]
               for i in range(n)]
        return AntisymForm(n, n, {tuple(range(n)): J.sqrt(J.jet_det(mat, n))})
    return FormField(n, n, build)


def killing_vector_residual(metric_field: MetricField, xi, pt) -> float:
    """Max-norm of sym(nabla xi-flat): zero exactly when xi is Killing.

    ``xi`` is either a constant component array or a callable mapping the
    (jet-valued) coordinate list to a sequence of components.
    """
    n = metric_field.dim
    if callable(xi):
        comp_of = xi
    else:
        const = [float(v) for v in np.asarray(xi, dtype=float)]
        comp_of = lambda coords: const

    def flat(coords):
        comps = comp_of(coords)
        entries = metric_field(coords)
        out = AntisymForm(n, 1)
        for mu in range(n):
            acc = None
            for nu in range(n):
                e = entries.get((min(mu, nu), max(mu, nu)))
                if e is None:
                    continue
                term = e * comps[nu]
                acc = term if acc is None else acc + term
            if acc is not None:
                out.comps[(mu,)] = J.asjet(acc, n)
        return out

    nabla = covariant_derivative_form(metric_field, FormField(n, 1, flat), pt)
    return float(np.max(np.abs(nabla + nabla.T))) / 2.0
