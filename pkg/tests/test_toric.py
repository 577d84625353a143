"""Toric data, symplectic potential, Legendre duality, complex chart."""

import numpy as np
import pytest

from ypqgeo import toric, ypq
from ypqgeo.errors import NewtonDivergence, ToricDomainError
from ypqgeo.geomcore import jets as J

from test_ypq_metric import interior_points

PQ_SET = [(2, 1), (3, 2), (7, 3)]


def moment_samples(params, model, rng, n):
    """Moment points imaged from random interior chart points and radii."""
    pts = interior_points(params, rng, n, margin=0.15)
    rs = rng.uniform(0.5, 2.0, n)
    return [toric.momentum_map(params, r, pt) for r, pt in zip(rs, pts)], pts, rs


@pytest.fixture(params=PQ_SET, ids=lambda pq: f"Y{pq[0]}{pq[1]}")
def setup(request, rng):
    p, q = request.param
    P = ypq.make_params(p, q)
    model = toric.ypq_toric_model(P)
    ys, pts, rs = moment_samples(P, model, rng, 25)
    return P, model, ys, pts, rs


class TestToricData:
    def test_21_frozen_values(self):
        P = ypq.make_params(2, 1)
        m = toric.ypq_toric_model(P)
        np.testing.assert_array_equal(m.normals[0], [1, -1, -2])
        np.testing.assert_array_equal(m.normals[1], [1, 0, 0])
        np.testing.assert_array_equal(m.normals[2], [1, -1, 0])
        np.testing.assert_array_equal(m.normals[3], [1, -2, -1])
        # third Reeb component equals 1 - sqrt(13)
        assert m.reeb[2] == pytest.approx(1.0 - np.sqrt(13.0), abs=1e-14)
        np.testing.assert_allclose(m.reeb[:2], [3.0, -3.0])

    def test_gorenstein_form(self, setup):
        P, model, ys, pts, rs = setup
        # four polytope normals have first entry one and integer entries
        for row in model.normals[:4]:
            assert row[0] == 1.0
            assert np.all(row == np.round(row))

    def test_auxiliary_vector_definitions(self, setup):
        P, model, ys, pts, rs = setup
        v = model.normals
        np.testing.assert_allclose(v[4], model.reeb - v[0] - v[2], atol=0)
        np.testing.assert_array_equal(v[5], -v[1] - v[3])

    def test_fifth_normal_closed_form(self, setup):
        # third component: -p/2 + 3q/2 - 1/(2 ell)
        P, model, ys, pts, rs = setup
        expect = -0.5 * P.p + 1.5 * P.q - 0.5 / P.ell
        assert model.normals[4][2] == pytest.approx(expect, rel=1e-13)
        np.testing.assert_allclose(model.normals[4][:2], [1.0, -1.0])

    def test_json_roundtrip(self, setup):
        import json
        P, model, ys, pts, rs = setup
        doc = json.loads(json.dumps(model.to_json_dict()))
        assert doc["mode"] == toric.MODE_SIX_VECTOR
        np.testing.assert_allclose(np.array(doc["normals"]), model.normals)
        np.testing.assert_allclose(np.array(doc["reeb"]), model.reeb)


class TestMomentumMap:
    def test_reeb_pairing_is_half_r_squared(self, setup):
        P, model, ys, pts, rs = setup
        for ym, r in zip(ys, rs):
            assert model.reeb @ ym == pytest.approx(0.5 * r * r, rel=1e-12)

    def test_polytope_pairings_positive(self, setup):
        P, model, ys, pts, rs = setup
        for ym in ys:
            vals = toric.facet_values(model, ym)
            assert np.all(vals[:4] > 0.0)
            # the fifth pairing is observed positive, the sixth negative
            assert vals[4] > 0.0
            assert vals[5] < 0.0

    def test_sixth_pairing_closed_form(self, setup):
        # <v6, y> = -(r^2/3)(1 - y): strictly negative on the whole chart
        P, model, ys, pts, rs = setup
        for ym, pt, r in zip(ys, pts, rs):
            expect = -(r * r / 3.0) * (1.0 - pt[2])
            assert model.normals[5] @ ym == pytest.approx(expect, rel=1e-12)

    def test_pole_limit(self, setup):
        P, model, ys, pts, rs = setup
        ym = toric.momentum_map(P, 1.0, np.array([1e-9, 0.0, 0.0, 0.0, 0.0]))
        assert abs(ym[0]) < 1e-18  # first moment coordinate collapses


class TestSymplecticPotential:
    def test_hessian_matches_analytic(self, setup):
        P, model, ys, pts, rs = setup
        for ym in ys[:10]:
            jet = toric.symplectic_potential(model, ym)
            np.testing.assert_allclose(jet.hess,
                                       toric.hessian_analytic(model, ym),
                                       rtol=1e-10, atol=1e-12)

    def test_hessian_positive_definite(self, setup):
        P, model, ys, pts, rs = setup
        for ym in ys:
            evals = np.linalg.eigvalsh(toric.symplectic_potential(model, ym).hess)
            assert evals.min() > 0.0

    def test_domain_error_outside_polytope(self, setup):
        P, model, ys, pts, rs = setup
        bad = ys[0].copy()
        bad[0] = -abs(bad[0])  # flips the pairing with (1,0,0)-like normals
        with pytest.raises(ToricDomainError):
            toric.symplectic_potential(model, np.array([-1.0, 0.0, 0.0]))

    def test_canonical_mode_also_convex(self, setup):
        P, model, ys, pts, rs = setup
        can = toric.ypq_toric_model(P, mode=toric.MODE_CANONICAL)
        for ym in ys[:6]:
            jet = toric.symplectic_potential(can, ym)
            np.testing.assert_allclose(jet.hess,
                                       toric.hessian_analytic(can, ym),
                                       rtol=1e-9, atol=1e-11)

    def test_accepts_jet_input(self, setup):
        P, model, ys, pts, rs = setup
        jet_in = J.seed(ys[0])
        a = toric.symplectic_potential(model, jet_in)
        b = toric.symplectic_potential(model, ys[0])
        assert a.val == b.val
        np.testing.assert_allclose(a.grad, b.grad)


class TestLegendreDuality:
    def test_roundtrip(self, setup):
        P, model, ys, pts, rs = setup
        for ym in ys:
            x, y_back, dual = toric.legendre_roundtrip(model, ym)
            assert np.abs(y_back - ym).max() < 1e-9

    def test_dual_hessians_are_inverse(self, setup):
        P, model, ys, pts, rs = setup
        for ym in ys[:6]:
            jet = toric.symplectic_potential(model, ym)
            x = jet.grad
            dual_hess = toric.legendre_hessian_fd(model, x, ym)
            np.testing.assert_allclose(dual_hess @ jet.hess, np.eye(3),
                                       atol=1e-8)
            det_product = np.linalg.det(dual_hess) * np.linalg.det(jet.hess)
            assert det_product == pytest.approx(1.0, abs=1e-8)

    def test_dual_value_is_legendre_transform(self, setup):
        # applying the transform twice returns the original value
        P, model, ys, pts, rs = setup
        for ym in ys[:6]:
            jet = toric.symplectic_potential(model, ym)
            x, y_back, dual = toric.legendre_roundtrip(model, ym)
            # second transform: potential(y) = <x, y> - dual at y = grad of dual
            again = float(x @ y_back) - dual
            assert again == pytest.approx(float(jet.val), rel=1e-9, abs=1e-11)

    def test_gradient_injective_on_samples(self, setup):
        P, model, ys, pts, rs = setup
        xs = [toric.symplectic_potential(model, ym).grad for ym in ys]
        for i in range(len(ys)):
            for k in range(i + 1, len(ys)):
                if np.abs(xs[i] - xs[k]).max() < 1e-12:
                    assert np.abs(ys[i] - ys[k]).max() < 1e-9

    def test_determinant_identity(self, setup):
        # det(Hessian) * exp(2 x^1 + c) = 1 with one fitted constant c
        P, model, ys, pts, rs = setup
        cs = []
        for ym in ys:
            jet = toric.symplectic_potential(model, ym)
            cs.append(-np.log(np.linalg.det(jet.hess)) - 2.0 * jet.grad[0])
        cs = np.array(cs)
        c = cs.mean()
        assert cs.std() / abs(c) < 1e-6
        checks = []
        for ym in ys:
            jet = toric.symplectic_potential(model, ym)
            checks.append(np.linalg.det(jet.hess) * np.exp(2 * jet.grad[0] + c))
        checks = np.array(checks)
        assert checks.std() / checks.mean() < 1e-6
        assert checks.mean() == pytest.approx(1.0, rel=1e-8)

    def test_newton_divergence_reported(self, setup):
        P, model, ys, pts, rs = setup
        with pytest.raises((NewtonDivergence, ToricDomainError)):
            toric.invert_gradient(model, np.array([1e8, 1e8, 1e8]),
                                  ys[0], max_iter=3)


class TestComplexChart:
    def test_exponential_of_first_coordinate(self, setup):
        P, model, ys, pts, rs = setup
        for pt, r in zip(pts[:8], rs[:8]):
            z = toric.complex_coordinates(P, r, pt)
            half_cubic = pt[2] ** 3 - 1.5 * pt[2] ** 2 + 0.5 * P.a
            expect = (r ** 3 * np.sin(pt[0]) * np.sqrt(half_cubic)
                      * np.exp(1j * pt[4]))
            assert abs(np.exp(z[0]) - expect) < 1e-9

    def test_imaginary_parts(self, setup):
        P, model, ys, pts, rs = setup
        for pt, r in zip(pts[:8], rs[:8]):
            th, ph, y, al, ps = pt
            z = toric.complex_coordinates(P, r, pt)
            assert z[0].imag == pytest.approx(ps, abs=1e-14)
            assert z[1].imag == pytest.approx(ph - ps, abs=1e-14)
            expect3 = 0.5 * P.l * ph - 0.5 * P.l * ps + al / P.ell
            assert z[2].imag == pytest.approx(expect3, rel=1e-12, abs=1e-13)

    def test_real_parts_match_gradient_up_to_constants(self, setup):
        # Re z^i - x^i(momentum_map(...)) must be the same three numbers at
        # every sampled point (the dropped additive constants)
        P, model, ys, pts, rs = setup
        diffs = []
        for ym, pt, r in zip(ys, pts, rs):
            z = toric.complex_coordinates(P, r, pt)
            x = toric.symplectic_potential(model, ym).grad
            diffs.append(z.real - x)
        diffs = np.array(diffs)
        assert diffs.std(axis=0).max() < 1e-8

    def test_first_two_coordinates_r_independence(self, setup):
        P, model, ys, pts, rs = setup
        pt = pts[0]
        za = toric.complex_coordinates(P, 0.7, pt)
        zb = toric.complex_coordinates(P, 1.9, pt)
        assert abs((za[0] + za[1]) - (zb[0] + zb[1])) < 1e-10
        # and the closed form of the r-free combination
        th = pt[0]
        expect = np.log(np.sin(th)) - 2.0 * np.log(np.cos(0.5 * th))
        assert (za[0] + za[1]).real == pytest.approx(expect, rel=1e-12)
