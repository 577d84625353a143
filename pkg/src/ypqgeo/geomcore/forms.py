"""Antisymmetric forms with sorted-index component storage.

An :class:`AntisymForm` of degree ``k`` on an ``n``-dimensional chart stores
one component per strictly increasing index tuple; lookups with permuted or
repeated indices resolve through the antisymmetry sign.  Components may be
floats, complex numbers, or :class:`~ypqgeo.geomcore.jets.Jet2` values — in the
latter case every algebraic operation (wedge, scalar multiplication, addition)
propagates derivatives automatically, which is how field-level operators such
as the exterior derivative are built.

Conventions (fixed across the package):

* wedge components are shuffle sums without factorial weights, so
  ``(dx^0 ∧ dx^1)[(0, 1)] = 1``;
* the exterior derivative of a k-form has components
  ``(dψ)_J = Σ_a (−1)^a ∂_{j_a} ψ_{J \\ j_a}`` over sorted ``J``, equivalently
  ``(dψ)_{μI} = (k+1) ∂_[μ ψ_I]`` densely;
* the interior product is ``(X⌟ψ)_I = Σ_μ X^μ ψ_{μI}``.
"""

from __future__ import annotations

import itertools
import numbers

import numpy as np

from ..errors import DegreeMismatch, DegreeOverflow
from .jets import Jet2

__all__ = ["AntisymForm", "wedge", "differential", "d_field",
           "partial_of_component", "sort_with_sign"]


def sort_with_sign(idx):
    """Return (sorted tuple, sign) or (None, 0) if an index repeats."""
    idx = tuple(idx)
    if len(set(idx)) != len(idx):
        return None, 0
    perm = sorted(range(len(idx)), key=idx.__getitem__)
    inversions = sum(1 for i, j in itertools.combinations(range(len(idx)), 2)
                     if perm[i] > perm[j])
    return tuple(idx[i] for i in perm), -1 if inversions % 2 else 1


class AntisymForm:
    """Totally antisymmetric covariant tensor in sorted-component storage."""

    __slots__ = ("dim", "degree", "comps")

    def __init__(self, dim: int, degree: int, comps=None):
        if degree < 0 or degree > dim:
            raise DegreeOverflow(f"degree {degree} invalid on a {dim}-dim chart")
        self.dim = dim
        self.degree = degree
        self.comps = {}
        if comps:
            for idx, val in comps.items():
                self.add_to(idx, val)

    # -- component access ---------------------------------------------------

    def add_to(self, idx, val) -> None:
        """Accumulate ``val`` into component ``idx`` (any index order)."""
        if len(idx) != self.degree:
            raise DegreeMismatch(
                f"index {idx} has length {len(idx)}, form degree is {self.degree}")
        key, sign = sort_with_sign(idx)
        if sign == 0:
            return
        cur = self.comps.get(key)
        term = val if sign > 0 else -val
        self.comps[key] = term if cur is None else cur + term

    def get(self, idx):
        """Component at ``idx`` with antisymmetry sign; 0 if absent/repeated."""
        key, sign = sort_with_sign(idx)
        if sign == 0:
            return 0.0
        val = self.comps.get(key, 0.0)
        return val if sign > 0 else -val

    def __getitem__(self, idx):
        return self.get(idx if isinstance(idx, tuple) else (idx,))

    # -- algebra --------------------------------------------------------------

    def _check_same_shape(self, other):
        if self.dim != other.dim or self.degree != other.degree:
            raise DegreeMismatch(
                f"cannot combine degree {self.degree} (dim {self.dim}) with "
                f"degree {other.degree} (dim {other.dim})")

    def __add__(self, other):
        if not isinstance(other, AntisymForm):
            return NotImplemented
        self._check_same_shape(other)
        out = AntisymForm(self.dim, self.degree)
        out.comps = dict(self.comps)
        for key, val in other.comps.items():
            cur = out.comps.get(key)
            out.comps[key] = val if cur is None else cur + val
        return out

    def __sub__(self, other):
        return self + (other * -1.0)

    def __mul__(self, scalar):
        if not isinstance(scalar, (numbers.Complex, Jet2)):
            return NotImplemented
        out = AntisymForm(self.dim, self.degree)
        out.comps = {key: val * scalar for key, val in self.comps.items()}
        return out

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def wedge(self, other: "AntisymForm") -> "AntisymForm":
        if self.dim != other.dim:
            raise DegreeMismatch("wedge of forms on different charts")
        k = self.degree + other.degree
        if k > self.dim:
            raise DegreeOverflow(
                f"wedge degree {k} exceeds chart dimension {self.dim}")
        out = AntisymForm(self.dim, k)
        for ia, va in self.comps.items():
            sa = set(ia)
            for ib, vb in other.comps.items():
                if sa & set(ib):
                    continue
                out.add_to(ia + ib, va * vb)
        return out

    def interior(self, vector) -> "AntisymForm":
        """Contraction with a vector on the first slot."""
        if self.degree == 0:
            raise DegreeMismatch("cannot contract a 0-form")
        out = AntisymForm(self.dim, self.degree - 1)
        for idx, val in self.comps.items():
            for pos, mu in enumerate(idx):
                rest = idx[:pos] + idx[pos + 1:]
                coeff = vector[mu] if pos % 2 == 0 else -vector[mu]
                if coeff != 0:
                    out.add_to(rest, val * coeff)
        return out

    # -- views ---------------------------------------------------------------

    def map_components(self, func) -> "AntisymForm":
        out = AntisymForm(self.dim, self.degree)
        out.comps = {key: func(val) for key, val in self.comps.items()}
        return out

    def values(self) -> "AntisymForm":
        """Strip jets down to plain numeric components."""
        return self.map_components(
            lambda v: v.val if isinstance(v, Jet2) else v)

    def conjugate(self) -> "AntisymForm":
        return self.map_components(
            lambda v: v.conjugate() if isinstance(v, Jet2) else np.conjugate(v))

    @property
    def real(self) -> "AntisymForm":
        return self.map_components(
            lambda v: v.real if isinstance(v, Jet2) else np.real(v))

    @property
    def imag(self) -> "AntisymForm":
        return self.map_components(
            lambda v: v.imag if isinstance(v, Jet2) else np.imag(v))

    def dense(self) -> np.ndarray:
        """Dense ndarray with all index permutations filled in."""
        vals = {key: (v.val if isinstance(v, Jet2) else v)
                for key, v in self.comps.items()}
        dtype = complex if any(isinstance(v, complex) for v in vals.values()) \
            else float
        out = np.zeros((self.dim,) * self.degree, dtype=dtype)
        if self.degree == 0:
            return np.asarray(vals.get((), 0.0), dtype=dtype)
        for key, val in vals.items():
            for perm in itertools.permutations(range(self.degree)):
                _, sign = sort_with_sign(perm)
                out[tuple(key[i] for i in perm)] = sign * val
        return out

    def dense_partials(self) -> np.ndarray:
        """Dense array of coordinate partials, shape ``(n,) + (n,)*degree``.

        Requires jet-valued components (gradients supply the partials).
        """
        grads = {}
        dtype = float
        for key, v in self.comps.items():
            if not isinstance(v, Jet2):
                raise TypeError("dense_partials needs jet-valued components")
            grads[key] = v.grad
            if np.iscomplexobj(v.grad) or isinstance(v.val, complex):
                dtype = complex
        out = np.zeros((self.dim,) * (self.degree + 1), dtype=dtype)
        for key, g in grads.items():
            for perm in itertools.permutations(range(self.degree)):
                _, sign = sort_with_sign(perm)
                out[(slice(None),) + tuple(key[i] for i in perm)] = sign * g
        return out

    def max_abs(self) -> float:
        """Largest component magnitude (jet components judged by value)."""
        if not self.comps:
            return 0.0
        return max(abs(v.val if isinstance(v, Jet2) else v)
                   for v in self.comps.values())

    def __repr__(self) -> str:
        return (f"AntisymForm(dim={self.dim}, degree={self.degree}, "
                f"{len(self.comps)} stored components)")


def wedge(a: AntisymForm, b: AntisymForm) -> AntisymForm:
    """Module-level alias for :meth:`AntisymForm.wedge`."""
    return a.wedge(b)


def partial_of_component(value, mu: int, n: int):
    """The mu-th coordinate partial of a jet component, itself as a jet.

    The result's value/gradient are exact; its Hessian would require third
    derivatives of the original expression, so it is NaN-poisoned — anything
    that erroneously consumes it surfaces loudly in tests.
    """
    if not isinstance(value, Jet2):
        return 0.0
    nan_hess = np.full((n, n), np.nan,
                       dtype=complex if np.iscomplexobj(value.grad) else float)
    return Jet2(value.grad[mu], value.hess[mu].copy(), nan_hess)


def differential(z: Jet2, n: int) -> AntisymForm:
    """Exterior derivative of a scalar jet: the 1-form with components ∂_μ z."""
    out = AntisymForm(n, 1)
    for mu in range(n):
        out.comps[(mu,)] = Jet2(z.grad[mu], z.hess[mu].copy(),
                                np.full((n, n), np.nan,
                                        dtype=complex if np.iscomplexobj(z.grad)
                                        else float))
    return out


def d_of_form(form: AntisymForm) -> AntisymForm:
    """Exterior derivative of a jet-component form (one order is consumed)."""
    n = form.dim
    out = AntisymForm(n, form.degree + 1)
    if form.degree == 0:
        val = form.comps.get(())
        return differential(val, n) if isinstance(val, Jet2) else out
    for key in itertools.combinations(range(n), form.degree + 1):
        acc = None
        for a, mu in enumerate(key):
            rest = key[:a] + key[a + 1:]
            comp = form.comps.get(rest)
            if comp is None:
                continue
            term = partial_of_component(comp, mu, n)
            if a % 2 == 1:
                term = -term
            acc = term if acc is None else acc + term
        if acc is not None:
            out.comps[key] = acc
    return out


def d_field(field):
    """Lift :func:`d_of_form` to fields (callables coords → AntisymForm)."""
    def derived(coords):
        return d_of_form(field(coords))
    return derived
