"""Parameter construction from coprime integer pairs.

Frozen oracle values (high-precision closed-form evaluation, cross-checked
symbolically; cubic residual and Vieta sum are the defining properties):

    (2,1): a   = 1/2 - sqrt(13)/32       = 0.3873265226417503
           ell = (5 + 2 sqrt(13))/27     = 0.4522630574417770
           y1  = -0.3256939094329987
           y2  =  0.4243060905670013
           y3  =  1.4013878188659973
    (7,3): a = 100/343, ell = 3/20, y1 = -2/7, y2 = 5/14, y3 = 10/7
"""

import math

import numpy as np
import pytest

from ypqgeo import ypq
from ypqgeo.errors import NotCoprime, OutOfRange

PQ_SET = [(2, 1), (3, 1), (3, 2), (5, 4), (7, 3)]


class TestClosedForms:
    def test_21_frozen(self):
        P = ypq.make_params(2, 1)
        assert P.a == pytest.approx(0.3873265226417503, abs=1e-15)
        assert P.ell == pytest.approx(0.4522630574417770, abs=1e-15)
        assert P.y1 == pytest.approx(-0.3256939094329987, abs=1e-15)
        assert P.y2 == pytest.approx(0.4243060905670013, abs=1e-15)
        assert P.y3 == pytest.approx(1.4013878188659973, abs=1e-14)
        assert P.l == 1

    def test_73_exact_rationals(self):
        # discriminant root sqrt(4*49 - 3*9) = 13 is exact, so every field is
        # rational and representable to machine precision
        P = ypq.make_params(7, 3)
        assert P.a == pytest.approx(100 / 343, abs=5e-16)
        assert P.ell == pytest.approx(3 / 20, abs=5e-16)
        assert P.y1 == pytest.approx(-2 / 7, abs=5e-16)
        assert P.y2 == pytest.approx(5 / 14, abs=5e-16)
        assert P.y3 == pytest.approx(10 / 7, abs=1e-15)
        assert P.l == 4

    @pytest.mark.parametrize("p,q", PQ_SET)
    def test_cubic_residuals(self, p, q):
        P = ypq.make_params(p, q)
        for y in (P.y1, P.y2, P.y3):
            assert abs(ypq.cubic(P, y)) < 1e-12

    @pytest.mark.parametrize("p,q", PQ_SET)
    def test_vieta_sum(self, p, q):
        P = ypq.make_params(p, q)
        assert P.y1 + P.y2 + P.y3 == pytest.approx(1.5, abs=1e-12)

    @pytest.mark.parametrize("p,q", PQ_SET)
    def test_ordering_and_bounds(self, p, q):
        P = ypq.make_params(p, q)
        assert 0.0 < P.a < 1.0
        assert P.y1 < 0.0 < P.y2 < 1.0 < P.y3


class TestValidation:
    def test_not_coprime(self):
        with pytest.raises(NotCoprime):
            ypq.make_params(2, 2)
        with pytest.raises(NotCoprime):
            ypq.make_params(6, 3)

    @pytest.mark.parametrize("p,q", [(2, 0), (2, -1), (2, 3), (0, 1)])
    def test_out_of_range(self, p, q):
        with pytest.raises(OutOfRange):
            ypq.make_params(p, q)

    def test_equal_pair_reported_as_not_coprime(self):
        with pytest.raises(NotCoprime):
            ypq.make_params(3, 3)

    def test_non_integer_rejected(self):
        with pytest.raises(OutOfRange):
            ypq.make_params(2.5, 1)


class TestProfileFunctions:
    @pytest.mark.parametrize("p,q", PQ_SET)
    def test_positivity_on_chart(self, p, q, rng):
        P = ypq.make_params(p, q)
        ys = rng.uniform(P.y1 + 1e-6, P.y2 - 1e-6, size=200)
        for y in ys:
            assert ypq.fiber_profile(P, y) > 0.0
            assert ypq.sigma_profile(P, y) > 0.0
            assert ypq.radial_profile(P, y) > 0.0

    @pytest.mark.parametrize("p,q", PQ_SET)
    def test_sigma_times_quadratic_is_cubic(self, p, q, rng):
        # q(y) (a - y^2) = a - 3y^2 + 2y^3 by construction
        P = ypq.make_params(p, q)
        for y in rng.uniform(P.y1, P.y2, size=50):
            lhs = ypq.sigma_profile(P, y) * (P.a - y * y)
            assert lhs == pytest.approx(ypq.cubic(P, y), rel=1e-13, abs=1e-15)

    @pytest.mark.parametrize("p,q", PQ_SET)
    def test_fiber_sigma_radial_identity(self, p, q, rng):
        # fiber * sigma = 6 * radial
        P = ypq.make_params(p, q)
        for y in rng.uniform(P.y1 + 0.01, P.y2 - 0.01, size=50):
            lhs = ypq.fiber_profile(P, y) * ypq.sigma_profile(P, y)
            assert lhs == pytest.approx(6.0 * ypq.radial_profile(P, y),
                                        rel=1e-12)

    @pytest.mark.parametrize("p,q", PQ_SET)
    def test_extraction_coefficient_identity(self, p, q, rng):
        # the dtheta^dy coefficient times the radial profile is the constant
        # -1/(2 ell), uniformly on the chart
        P = ypq.make_params(p, q)
        for y in rng.uniform(P.y1 + 1e-3, P.y2 - 1e-3, size=50):
            prod = (ypq.extraction_coefficient(P, y, "compact")
                    * ypq.radial_profile(P, y))
            assert prod == pytest.approx(-0.5 / P.ell, rel=1e-10)

    @pytest.mark.parametrize("p,q", PQ_SET)
    def test_extraction_coefficient_three_forms_agree(self, p, q, rng):
        P = ypq.make_params(p, q)
        for y in rng.uniform(P.y1 + 0.02, P.y2 - 0.02, size=40):
            compact = ypq.extraction_coefficient(P, y, "compact")
            factored = ypq.extraction_coefficient(P, y, "factored")
            difference = ypq.extraction_coefficient(P, y, "difference")
            assert factored == pytest.approx(compact, rel=1e-10)
            assert difference == pytest.approx(compact, rel=1e-10)

    def test_root_reciprocal_identity(self):
        # 1/y2 = 1 + 3 l ell for every pair (verified symbolically)
        for p, q in PQ_SET:
            P = ypq.make_params(p, q)
            assert 1.0 / P.y2 == pytest.approx(1.0 + 3.0 * P.l * P.ell,
                                               rel=1e-13)

    def test_metric_functions_bundle(self):
        P = ypq.make_params(3, 2)
        mfns = ypq.MetricFunctions(P)
        y = 0.5 * (P.y1 + P.y2)
        assert mfns.fiber(y) == ypq.fiber_profile(P, y)
        assert mfns.sigma_scale(y) == ypq.sigma_profile(P, y)
        assert mfns.twist(y) == ypq.twist_profile(P, y)
        assert mfns.radial(y) == ypq.radial_profile(P, y)
        assert mfns.extraction(y) == ypq.extraction_coefficient(P, y)
