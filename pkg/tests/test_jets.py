"""Second-order jets against finite-difference oracles and linear algebra."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ypqgeo.geomcore.jets as J
from ypqgeo.geomcore.jets import Jet2, constant, seed, variable

from conftest import fd_gradient, fd_hessian


def _eval_scalar(f, coords):
    """Evaluate ``f`` on seeded jets; return the Jet2 result."""
    return f(seed(np.asarray(coords, dtype=float)))


def check_against_fd(f, coords, rel=1e-6):
    """Compare jet gradient/hessian of ``f`` with FD at ``coords``."""
    coords = np.asarray(coords, dtype=float)
    jet = _eval_scalar(f, coords)
    fval = lambda x: J.value_of(f(seed(x)))
    assert jet.val == pytest.approx(fval(coords), rel=1e-12)
    g = fd_gradient(fval, coords)
    h = fd_hessian(fval, coords)
    scale = max(1.0, np.max(np.abs(g)), np.max(np.abs(h)))
    np.testing.assert_allclose(jet.grad, g, rtol=rel, atol=rel * scale)
    np.testing.assert_allclose(jet.hess, h, rtol=rel, atol=50 * rel * scale)


class TestElementaries:
    @pytest.mark.parametrize("func", [J.sin, J.cos, J.tan, J.exp])
    def test_unary_everywhere(self, func, rng):
        for _ in range(20):
            x = rng.uniform(-1.2, 1.2, size=3)
            check_against_fd(lambda c: func(c[0] * c[1] + 0.3 * c[2]), x)

    @pytest.mark.parametrize("func", [J.sqrt, J.log])
    def test_unary_positive(self, func, rng):
        for _ in range(20):
            x = rng.uniform(0.2, 2.0, size=2)
            check_against_fd(lambda c: func(c[0] + c[1] * c[1]), x)

    def test_log_abs_negative_branch(self, rng):
        for _ in range(10):
            x = rng.uniform(-2.0, -0.2, size=2)
            check_against_fd(lambda c: J.log_abs(c[0] * 3.0 + c[1]), x)
        # agrees with log on positive arguments
        x = np.array([0.7, 1.3])
        a = _eval_scalar(lambda c: J.log_abs(c[0] + c[1]), x)
        b = _eval_scalar(lambda c: J.log(c[0] + c[1]), x)
        assert a.val == b.val
        np.testing.assert_array_equal(a.grad, b.grad)

    def test_pow_int_and_fractional(self, rng):
        for k in (2, 3, -1, 0.5, 1.5):
            x = rng.uniform(0.3, 1.5, size=2)
            check_against_fd(lambda c: (c[0] + 2.0 * c[1]) ** k, x)


class TestArithmetic:
    def test_composite_expression(self, rng):
        def f(c):
            return J.sin(c[0]) * J.exp(-c[1] ** 2) / (1.0 + c[2] * c[2]) \
                + J.log(2.0 + J.cos(c[0] * c[1])) - c[2] / (c[0] + 3.0)

        for _ in range(25):
            x = rng.uniform(-1.0, 1.0, size=3)
            check_against_fd(f, x)

    def test_reflected_ops(self):
        x = seed(np.array([0.4, -0.2]))
        a = x[0]
        assert (2.0 - a).val == pytest.approx(1.6)
        assert (2.0 / (1.0 + a)).val == pytest.approx(2.0 / 1.4)
        np.testing.assert_allclose((2.0 - a).grad, [-1.0, 0.0])
        np.testing.assert_allclose((3.0 * a).grad, [3.0, 0.0])

    def test_neg_and_sub(self):
        x = seed(np.array([1.0, 2.0]))
        d = -(x[0] - x[1])
        assert d.val == 1.0
        np.testing.assert_allclose(d.grad, [-1.0, 1.0])

    @given(st.floats(-3, 3), st.floats(-3, 3))
    @settings(max_examples=50, deadline=None)
    def test_product_rule_hessian(self, u, v):
        x = seed(np.array([u, v]))
        prod = x[0] * x[1]
        assert prod.hess[0, 1] == 1.0 and prod.hess[1, 0] == 1.0
        assert prod.hess[0, 0] == 0.0 and prod.hess[1, 1] == 0.0


class TestComplex:
    def test_complex_jets_roundtrip(self):
        x = seed(np.array([0.3, 0.9]))
        z = J.exp(x[0] * 1j) * (x[1] + 2j)
        re, im = z.real, z.imag
        assert isinstance(re, Jet2) and isinstance(im, Jet2)
        back = re + 1j * im
        assert back.val == pytest.approx(z.val)
        np.testing.assert_allclose(back.grad, z.grad)

    def test_conjugate(self):
        x = seed(np.array([0.5]))
        z = (1.0 + 2j) * x[0]
        zc = z.conjugate()
        assert zc.val == np.conj(z.val)
        np.testing.assert_allclose(zc.grad, np.conj(z.grad))

    def test_plain_complex_exp(self):
        assert J.exp(1j * np.pi / 2) == pytest.approx(1j)


class TestHelpers:
    def test_variable_constant(self):
        v = variable(2.5, 1, 3)
        assert v.val == 2.5 and v.grad[1] == 1.0 and v.grad.sum() == 1.0
        c = constant(4.0, 3)
        assert c.val == 4.0 and not c.grad.any() and not c.hess.any()

    def test_float_passthrough(self):
        # generic wrappers accept plain floats and return plain floats
        assert J.sin(0.0) == 0.0
        assert isinstance(J.sqrt(4.0), float)
        assert J.value_of(3.25) == 3.25


class TestLinearAlgebra:
    def test_jet_solve_matches_numpy_on_floats(self, rng):
        a = rng.standard_normal((4, 4))
        b = rng.standard_normal(4)
        mat = [[a[i, j] for j in range(4)] for i in range(4)]
        x = J.jet_solve(mat, list(b))
        np.testing.assert_allclose([J.value_of(v) for v in x],
                                   np.linalg.solve(a, b), rtol=1e-12)

    def test_jet_solve_gradients(self, rng):
        # x(t) solving A(t) x = b; check dx/dt against FD
        def solve_at(t):
            c = seed(np.array([t[0]]))
            mat = [[1.0 + c[0], 0.5], [J.sin(c[0]), 2.0]]
            rhs = [c[0] * 2.0, 1.0]
            return J.jet_solve(mat, rhs)

        t0 = np.array([0.4])
        sol = solve_at(t0)
        for i in range(2):
            g = fd_gradient(lambda t, i=i: J.value_of(solve_at(t)[i]), t0)
            np.testing.assert_allclose(sol[i].grad, g, rtol=1e-7)

    def test_jet_det_matches_numpy(self, rng):
        a = rng.standard_normal((5, 5))
        mat = [[a[i, j] for j in range(5)] for i in range(5)]
        assert J.value_of(J.jet_det(mat, 5)) == pytest.approx(
            np.linalg.det(a), rel=1e-10)

    def test_jet_det_gradient(self):
        def det_at(t):
            c = seed(t)
            mat = [[J.exp(c[0]), c[1]], [c[0] * c[1], 2.0 + J.cos(c[1])]]
            return J.jet_det(mat, 2)

        t0 = np.array([0.3, -0.7])
        d = det_at(t0)
        g = fd_gradient(lambda t: J.value_of(det_at(t)), t0)
        np.testing.assert_allclose(d.grad, g, rtol=1e-7)
