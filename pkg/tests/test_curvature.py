"""Curvature and Killing operators on closed-form oracle geometries.

Frozen oracle values (unit round 2-sphere, theta = pi/3):
    Gamma^theta_{phi phi} = -sin(pi/3) cos(pi/3) = -sqrt(3)/4
                          = -0.4330127018922193
    Gamma^phi_{theta phi} = cot(pi/3) = 1/sqrt(3) = 0.5773502691896258
    Ric = g  (Einstein with lambda = 1)
"""

import numpy as np
import pytest

import ypqgeo.geomcore.jets as J
from ypqgeo.errors import NotKilling, SingularMetric
from ypqgeo.geomcore import (
    AntisymForm,
    FormField,
    MetricField,
    christoffel,
    constant_tensor_field,
    covariant_derivative_form,
    evaluate_metric,
    killing_vector_residual,
    killing_yano_residual,
    ky_to_sk,
    metric_tensor_field,
    ricci,
    special_killing_fit,
    stackel_killing_residual,
    volume_form_field,
)


def flat_metric(dim):
    return MetricField(dim, lambda c, d=dim: {(i, i): 1.0 for i in range(d)})


def sphere_metric(radius=1.0):
    def comps(c):
        s = J.sin(c[0])
        r2 = radius * radius
        return {(0, 0): r2, (1, 1): r2 * s * s}

    return MetricField(2, comps)


def sphere_points(rng, n=6):
    th = rng.uniform(0.3, np.pi - 0.3, size=n)
    ph = rng.uniform(0.0, 2 * np.pi, size=n)
    return np.stack([th, ph], axis=1)


class TestChristoffel:
    def test_flat_vanishes(self, rng):
        mf = flat_metric(3)
        for _ in range(3):
            g = christoffel(mf, rng.standard_normal(3))
            assert np.abs(g).max() == 0.0

    def test_constant_rescaled_flat_vanishes(self):
        mf = MetricField(3, lambda c: {(0, 0): 2.0, (1, 1): 5.0, (2, 2): 0.1})
        g = christoffel(mf, np.zeros(3))
        assert np.abs(g).max() == 0.0

    def test_sphere_frozen_values(self):
        g = christoffel(sphere_metric(), np.array([np.pi / 3, 1.0]))
        assert g[0, 1, 1] == pytest.approx(-0.4330127018922193, abs=1e-14)
        assert g[1, 0, 1] == pytest.approx(0.5773502691896258, abs=1e-14)
        assert g[1, 1, 0] == g[1, 0, 1]
        assert g[0, 0, 0] == 0.0

    def test_radius_invariance(self):
        # Christoffel symbols are scale-free: radius drops out
        p = np.array([0.9, 0.2])
        np.testing.assert_allclose(christoffel(sphere_metric(1.0), p),
                                   christoffel(sphere_metric(3.0), p),
                                   atol=1e-14)


class TestRicci:
    def test_flat_vanishes(self, rng):
        assert np.abs(ricci(flat_metric(4), rng.standard_normal(4))).max() == 0.0

    def test_unit_sphere_einstein(self, rng):
        mf = sphere_metric()
        for p in sphere_points(rng):
            r = ricci(mf, p)
            g = evaluate_metric(mf, p).g
            np.testing.assert_allclose(r, g, rtol=1e-11, atol=1e-12)

    def test_sphere_radius_two(self):
        # Ric = g / R^2 for the round 2-sphere of radius R
        mf = sphere_metric(2.0)
        p = np.array([1.1, 0.3])
        r = ricci(mf, p)
        g = evaluate_metric(mf, p).g
        np.testing.assert_allclose(r, g / 4.0, rtol=1e-11, atol=1e-13)


class TestMetricEval:
    def test_inverse_consistency(self, rng):
        mf = sphere_metric(1.5)
        for p in sphere_points(rng, 3):
            me = evaluate_metric(mf, p)
            np.testing.assert_allclose(me.g @ me.g_inv, np.eye(2), atol=1e-13)

    def test_singular_raises(self):
        with pytest.raises(SingularMetric):
            evaluate_metric(sphere_metric(), np.array([0.0, 0.0]))

    def test_dg_inv_identity(self, rng):
        # d(g g^-1) = 0  =>  dg_inv = -g^-1 dg g^-1
        mf = sphere_metric()
        me = evaluate_metric(mf, np.array([0.8, 0.1]))
        lhs = me.dg_inv()
        rhs = -np.einsum("ab,kbc,cd->kad", me.g_inv, me.dg, me.g_inv)
        np.testing.assert_allclose(lhs, rhs, atol=1e-14)


class TestCovariantDerivative:
    def test_volume_form_parallel(self, rng):
        mf = sphere_metric()
        vol = volume_form_field(mf)
        for p in sphere_points(rng, 4):
            nv = covariant_derivative_form(mf, vol, p)
            assert np.abs(nv).max() < 1e-13

    def test_metric_is_parallel(self, rng):
        # nabla g = 0 makes g a Killing tensor: symmetrized derivative zero
        mf = sphere_metric()
        tf = metric_tensor_field(mf)
        for p in sphere_points(rng, 4):
            assert stackel_killing_residual(mf, tf, p) < 1e-13

    def test_constant_tensor_not_killing_on_sphere(self):
        mf = sphere_metric()
        tf = constant_tensor_field(np.diag([1.0, 0.0]))
        assert stackel_killing_residual(mf, tf, np.array([0.9, 0.4])) > 1e-3


class TestKillingOperators:
    def test_volume_form_is_killing_yano(self, rng):
        mf = sphere_metric()
        vol = volume_form_field(mf)
        for p in sphere_points(rng, 4):
            assert killing_yano_residual(mf, vol, p) < 1e-13

    def test_coordinate_rotation_is_killing(self, rng):
        mf = sphere_metric()
        xi = lambda c: np.array([0.0, 1.0])  # d/dphi
        for p in sphere_points(rng, 4):
            assert killing_vector_residual(mf, xi, p) < 1e-13

    def test_theta_translation_not_killing(self):
        mf = sphere_metric()
        xi = lambda c: np.array([1.0, 0.0])  # d/dtheta
        assert killing_vector_residual(mf, xi, np.array([0.7, 0.0])) > 0.1

    def test_position_dependent_rotation_is_killing(self, rng):
        # generator of rotation about the x-axis:
        #   X = sin(phi) d/dtheta + cot(theta) cos(phi) d/dphi
        mf = sphere_metric()

        def xi(c):
            th, ph = c[0], c[1]
            return [J.sin(ph), J.cos(th) / J.sin(th) * J.cos(ph)]

        for p in sphere_points(rng, 4):
            assert killing_vector_residual(mf, xi, p) < 1e-12

    def test_non_killing_form_raises_in_fit(self, rng):
        mf = sphere_metric()

        def bad(c):
            f = AntisymForm(2, 1)
            f.add_to((0,), c[0] * 0.0 + 1.0)
            return f

        with pytest.raises(NotKilling):
            special_killing_fit(mf, FormField(2, 1, bad), sphere_points(rng, 3))

    def test_vol_pair_contraction_gives_metric_multiple(self, rng):
        # On an n-manifold the volume form psi satisfies
        # K(vol, vol) = 2 (n-1)! g ; here n = 2 so K = 2 g.
        mf = sphere_metric()
        vol = volume_form_field(mf)
        for p in sphere_points(rng, 3):
            k = ky_to_sk(mf, vol, vol, p)
            g = evaluate_metric(mf, p).g
            np.testing.assert_allclose(k, 2.0 * g, rtol=1e-12, atol=1e-13)
