import dataclasses
import math

import numpy as np
import pytest
from scipy import integrate

from reinsgame.errors import ConfigError, DomainError
from reinsgame.market import (DEFINITION21, Exponential, GenericClaims, PremiumPoint,
                              RateCurve, accumulation, admissible_box, claim_moments,
                              insurer_premium_rate, premium_rates)
from reinsgame.response import full_cession_to_r2, no_reinsurance, response


def uniform_claims(upper=2.0):
    return GenericClaims(lambda y: min(max(y / upper, 0.0), 1.0))


class TestAccumulation:
    def test_zero_rate_identity(self):
        curve = RateCurve.flat(0.0, 8.0)
        assert accumulation(curve, 0.0, 8.0) == 1.0

    def test_constant_rate(self):
        curve = RateCurve.flat(0.1, 8.0)
        assert accumulation(curve, 0.0, 8.0) == pytest.approx(math.exp(0.8), rel=1e-14)

    def test_piecewise(self):
        curve = RateCurve(((0.0, 0.1), (4.0, 0.2)), 8.0)
        assert accumulation(curve, 0.0, 8.0) == pytest.approx(math.exp(1.2), rel=1e-14)
        assert accumulation(curve, 3.0, 5.0) == pytest.approx(math.exp(0.1 + 0.2), rel=1e-14)

    def test_endpoint_identity(self):
        curve = RateCurve(((0.0, 0.05), (2.0, 0.15)), 8.0)
        for t in (0.0, 3.7, 8.0):
            assert accumulation(curve, t, t) == 1.0

    def test_multiplicative(self):
        curve = RateCurve(((0.0, 0.12), (1.5, 0.03), (5.0, 0.21)), 8.0)
        rng = np.random.default_rng(3)
        for _ in range(50):
            t, s, T = np.sort(rng.uniform(0.0, 8.0, 3))
            whole = accumulation(curve, t, T)
            split = accumulation(curve, t, s) * accumulation(curve, s, T)
            assert whole == pytest.approx(split, rel=1e-12)

    def test_domain_errors(self):
        curve = RateCurve.flat(0.1, 8.0)
        with pytest.raises(DomainError):
            curve.integral(5.0, 3.0)
        with pytest.raises(DomainError):
            curve.integral(0.0, 9.0)
        with pytest.raises(DomainError):
            curve.integral(-1.0, 2.0)

    def test_curve_validation(self):
        with pytest.raises(DomainError):
            RateCurve(((1.0, 0.1),), 8.0)  # does not start at 0
        with pytest.raises(DomainError):
            RateCurve(((0.0, -0.1),), 8.0)  # negative rate
        with pytest.raises(DomainError):
            RateCurve(((0.0, 0.1), (9.0, 0.2)), 8.0)  # start beyond horizon

    def test_cumulative_matches_integral(self):
        curve = RateCurve(((0.0, 0.12), (1.5, 0.03), (5.0, 0.21)), 8.0)
        ts = np.linspace(0.0, 8.0, 17)
        cum = curve.cumulative(ts)
        for t, c in zip(ts, cum):
            assert c == pytest.approx(curve.integral(0.0, t), abs=1e-14)


class TestClaimMoments:
    def test_exponential_unit(self):
        assert claim_moments(Exponential(1.0)) == (1.0, 2.0)

    def test_exponential_two(self):
        assert claim_moments(Exponential(2.0)) == (0.5, 0.5)

    def test_uniform_quadrature_vs_analytic(self):
        # oracle: direct quadrature of y dF and y^2 dF with density 1/2 on (0, 2)
        m1 = integrate.quad(lambda y: y * 0.5, 0.0, 2.0)[0]
        m2 = integrate.quad(lambda y: y * y * 0.5, 0.0, 2.0)[0]
        a_y, sig2 = claim_moments(uniform_claims())
        assert a_y == pytest.approx(m1, abs=1e-9)
        assert sig2 == pytest.approx(m2, abs=1e-9)
        assert (m1, m2) == pytest.approx((1.0, 4.0 / 3.0), abs=1e-12)

    def test_exponential_requires_positive_rate(self):
        with pytest.raises(DomainError):
            Exponential(0.0)


class TestAdmissibleBox:
    def test_reference_box(self, base_params):
        (lo1, hi1), (lo2, hi2) = admissible_box(base_params)
        assert (lo1, hi1) == (pytest.approx(0.1), pytest.approx(0.9))
        assert (lo2, hi2) == (0.1, 0.9)

    def test_definition21_convention(self, base_params):
        params = dataclasses.replace(base_params, bound_convention=DEFINITION21)
        (lo1, hi1), _ = admissible_box(params)
        # a_Y / sigma2 = (1/beta) / (2/beta^2) = beta/2
        assert (lo1, hi1) == (pytest.approx(0.05), pytest.approx(0.45))

    def test_scaling_in_beta(self, base_params):
        params = dataclasses.replace(base_params, claims=Exponential(2.0))
        (lo1, hi1), (lo2, hi2) = admissible_box(params)
        assert (lo1, hi1) == (pytest.approx(0.2), pytest.approx(1.8))
        assert (lo2, hi2) == (0.1, 0.9)


class TestPremiumRates:
    def test_reference_point(self, base_params, base_eq):
        p1, p2 = premium_rates(base_eq.point(), base_eq.response, base_params)
        assert p2 == pytest.approx(0.12619, abs=5e-5)
        assert p1 == pytest.approx(0.28784, abs=1e-4)

    def test_reference_point_quadrature_oracle(self, base_params, base_eq):
        # oracle: numeric expectations of the layered indemnities under exp(1);
        # the exp(1) tail beyond 60 carries less than 1e-26 mass
        from reinsgame.response import indemnity
        resp = base_eq.response

        def expect(component, power=1):
            f = lambda y: indemnity(y, resp)[component] ** power * math.exp(-y)
            return (integrate.quad(f, 0, resp.d, limit=200)[0]
                    + integrate.quad(f, resp.d, 60.0, limit=200)[0])

        p1, p2 = premium_rates(base_eq.point(), resp, base_params)
        assert p1 == pytest.approx(expect(0) + base_eq.xi1_star * expect(0, 2), abs=1e-9)
        assert p2 == pytest.approx((1 + base_eq.xi2_star) * expect(1), abs=1e-9)

    def test_full_cession_reprices_whole_book(self, base_params):
        point = PremiumPoint(0.5, base_params.theta, 0.0)
        _, p2 = premium_rates(point, full_cession_to_r2(), base_params)
        assert p2 == pytest.approx(insurer_premium_rate(base_params), rel=1e-12)

    def test_zero_contract(self, base_params):
        point = PremiumPoint(0.3, 0.4, 0.0)
        assert premium_rates(point, no_reinsurance(), base_params) == (0.0, 0.0)

    def test_p2_linear_in_loading(self, base_params, base_eq):
        resp = base_eq.response
        vals = []
        for xi2 in (0.2, 0.4, 0.8):
            _, p2 = premium_rates(PremiumPoint(base_eq.xi1_star, xi2, 0.0), resp,
                                  base_params)
            vals.append(p2 / (1.0 + xi2))
        assert vals[0] == pytest.approx(vals[1], rel=1e-12)
        assert vals[1] == pytest.approx(vals[2], rel=1e-12)


class TestMarketParams:
    def test_rejects_bad_loadings(self, base_params):
        with pytest.raises(ConfigError):
            dataclasses.replace(base_params, theta=0.9, eta=0.1)

    def test_rejects_negative_gamma(self, base_params):
        with pytest.raises(ConfigError):
            dataclasses.replace(base_params, gamma_I=-1.0)

    def test_rejects_short_curve(self, base_params):
        with pytest.raises(ConfigError):
            dataclasses.replace(base_params, rho_I=RateCurve.flat(0.1, 4.0))

    def test_lambda_zero_allowed(self, base_params):
        assert dataclasses.replace(base_params, lam=0.0).lam == 0.0
