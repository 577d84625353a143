"""Second-order jet arithmetic.

A :class:`Jet2` carries a value together with its exact gradient and Hessian
with respect to ``n`` seed variables, propagated through arithmetic by the
chain rule truncated at second order.  Evaluating a closed-form expression on
seeded jets therefore yields machine-precision first and second derivatives —
no finite differencing anywhere in the library (finite differences appear only
as an independent oracle in the test suite).

Values may be real or complex; the gradient/Hessian dtype follows the value.
"""

from __future__ import annotations

import math
import numbers

import numpy as np

__all__ = ["Jet2", "variable", "constant", "seed", "asjet"]

_SCALAR = (numbers.Real, numbers.Complex)


class Jet2:
    """Truncated second-order Taylor expansion in ``n`` variables.

    Parameters
    ----------
    val : float or complex
        Value of the expression at the expansion point.
    grad : ndarray, shape (n,)
        First derivatives with respect to the seed variables.
    hess : ndarray, shape (n, n)
        Second derivatives; exactly symmetric for jets built from seeds.
    """

    __slots__ = ("val", "grad", "hess")

    def __init__(self, val, grad, hess):
        self.val = val
        self.grad = grad
        self.hess = hess

    @property
    def n(self) -> int:
        return self.grad.shape[0]

    def __repr__(self) -> str:
        return f"Jet2(val={self.val!r}, n={self.n})"

    # -- helpers ----------------------------------------------------------

    def _compose(self, f0, f1, f2) -> "Jet2":
        """Chain rule for a scalar function with derivatives f1, f2 at val."""
        g = self.grad
        return Jet2(f0, f1 * g, f1 * self.hess + f2 * (g[:, None] * g[None, :]))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.val + other.val, self.grad + other.grad,
                        self.hess + other.hess)
        if isinstance(other, _SCALAR):
            return Jet2(self.val + other, self.grad, self.hess)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.val - other.val, self.grad - other.grad,
                        self.hess - other.hess)
        if isinstance(other, _SCALAR):
            return Jet2(self.val - other, self.grad, self.hess)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _SCALAR):
            return Jet2(other - self.val, -self.grad, -self.hess)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Jet2):
            a, b = self, other
            cross = a.grad[:, None] * b.grad[None, :]
            return Jet2(a.val * b.val,
                        a.grad * b.val + b.grad * a.val,
                        a.hess * b.val + b.hess * a.val + cross + cross.T)
        if isinstance(other, _SCALAR):
            return Jet2(self.val * other, self.grad * other, self.hess * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            q0 = self.val / other.val
            qg = (self.grad - q0 * other.grad) / other.val
            cross = qg[:, None] * other.grad[None, :]
            qh = (self.hess - q0 * other.hess - cross - cross.T) / other.val
            return Jet2(q0, qg, qh)
        if isinstance(other, _SCALAR):
            return Jet2(self.val / other, self.grad / other, self.hess / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _SCALAR):
            inv = self._compose(1.0 / self.val,
                                -1.0 / self.val ** 2,
                                2.0 / self.val ** 3)
            return inv * other if other != 1 else inv
        return NotImplemented

    def __pow__(self, k):
        if isinstance(k, _SCALAR):
            v = self.val
            return self._compose(v ** k, k * v ** (k - 1), k * (k - 1) * v ** (k - 2))
        return NotImplemented

    # -- elementary functions ----------------------------------------------

    def sin(self):
        s, c = np.sin(self.val), np.cos(self.val)
        return self._compose(s, c, -s)

    def cos(self):
        s, c = np.sin(self.val), np.cos(self.val)
        return self._compose(c, -s, -c)

    def tan(self):
        t = np.tan(self.val)
        d = 1.0 + t * t
        return self._compose(t, d, 2.0 * t * d)

    def sqrt(self):
        r = np.sqrt(self.val)
        return self._compose(r, 0.5 / r, -0.25 / (r * self.val))

    def log(self):
        v = self.val
        return self._compose(np.log(v), 1.0 / v, -1.0 / (v * v))

    def exp(self):
        e = np.exp(self.val)
        return self._compose(e, e, e)

    def conjugate(self):
        return Jet2(np.conjugate(self.val), np.conjugate(self.grad),
                    np.conjugate(self.hess))

    @property
    def real(self):
        return Jet2(np.real(self.val), np.real(self.grad), np.real(self.hess))

    @property
    def imag(self):
        return Jet2(np.imag(self.val), np.imag(self.grad), np.imag(self.hess))


def variable(value, index: int, n: int) -> Jet2:
    """Seed jet for coordinate ``index`` of an ``n``-dimensional chart."""
    grad = np.zeros(n)
    grad[index] = 1.0
    return Jet2(float(value), grad, np.zeros((n, n)))


def constant(value, n: int) -> Jet2:
    """Jet with zero derivatives (a numeric constant)."""
    if isinstance(value, numbers.Complex) and not isinstance(value, numbers.Real):
        return Jet2(complex(value), np.zeros(n, dtype=complex),
                    np.zeros((n, n), dtype=complex))
    return Jet2(float(value), np.zeros(n), np.zeros((n, n)))


def seed(coords) -> list:
    """Seed one jet per coordinate: the identity chart map."""
    coords = np.asarray(coords, dtype=float)
    n = coords.shape[0]
    return [variable(coords[i], i, n) for i in range(n)]


def asjet(x, n: int) -> Jet2:
    """Coerce a scalar to a constant jet; pass jets through unchanged."""
    return x if isinstance(x, Jet2) else constant(x, n)


# Generic wrappers so closed-form fields can be written once and evaluated on
# either plain scalars or jets.

def sin(x):
    return x.sin() if isinstance(x, Jet2) else math.sin(x)


def cos(x):
    return x.cos() if isinstance(x, Jet2) else math.cos(x)


def tan(x):
    return x.tan() if isinstance(x, Jet2) else math.tan(x)


def sqrt(x):
    return x.sqrt() if isinstance(x, Jet2) else math.sqrt(x)


def log(x):
    return x.log() if isinstance(x, Jet2) else math.log(x)


def exp(x):
    if isinstance(x, Jet2):
        return x.exp()
    return np.exp(x) if isinstance(x, complex) else math.exp(x)


def log_abs(x):
    """log|x| — the branch used for potentials defined modulo linear terms."""
    if isinstance(x, Jet2):
        return x.log() if x.val > 0 else (-x).log()
    return math.log(abs(x))


def value_of(x):
    """Underlying numeric value of a jet or scalar."""
    return x.val if isinstance(x, Jet2) else x


# ---------------------------------------------------------------------------
# small dense linear algebra over jets (entries may be jets or plain numbers)
# ---------------------------------------------------------------------------

def jet_solve(matrix, rhs):
    """Solve ``matrix @ x = rhs`` by Gaussian elimination with partial pivoting.

    ``matrix`` is a list of row lists and ``rhs`` a list; entries may mix jets
    and plain numbers.  Returns a list of jet (or scalar) solutions.
    """
    a = [list(row) for row in matrix]
    b = list(rhs)
    m = len(a)
    for col in range(m):
        piv = max(range(col, m), key=lambda r: abs(value_of(a[r][col])))
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
        pivot = a[col][col]
        for r in range(col + 1, m):
            head = a[r][col]
            if isinstance(head, _SCALAR) and head == 0:
                continue
            f = head / pivot
            for c in range(col + 1, m):
                a[r][c] = a[r][c] - f * a[col][c]
            b[r] = b[r] - f * b[col]
    x = [None] * m
    for i in reversed(range(m)):
        acc = b[i]
        for c in range(i + 1, m):
            acc = acc - a[i][c] * x[c]
        x[i] = acc / a[i][i]
    return x


def jet_det(matrix, n: int):
    """Determinant of an n x n matrix of jets/numbers via pivoted elimination."""
    a = [list(row) for row in matrix]
    sign = 1.0
    det = None
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(value_of(a[r][col])))
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        pivot = a[col][col]
        det = pivot if det is None else det * pivot
        for r in range(col + 1, n):
            head = a[r][col]
            if isinstance(head, _SCALAR) and head == 0:
                continue
            f = head / pivot
            for c in range(col + 1, n):
                a[r][c] = a[r][c] - f * a[col][c]
    return det * sign
