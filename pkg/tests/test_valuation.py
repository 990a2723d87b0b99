import dataclasses

import numpy as np
import pytest

from reinsgame.market import RateCurve
from reinsgame.valuation import (closed_form_objective, constant_path,
                                 no_reinsurance_path, value_intercept)


@pytest.fixture(scope="module")
def flat_short_params(base_params):
    """rho = 0, T = 1: compound-Poisson moments are exact by hand."""
    zero = RateCurve.flat(0.0, 1.0)
    return dataclasses.replace(base_params, T=1.0, rho_I=zero, rho_R1=zero,
                               rho_R2=zero)


class TestClosedFormObjective:
    def test_no_reinsurance_compound_poisson_moments(self, flat_short_params):
        # E = x + (c - lam a_Y) T = x + 0.1, Var = lam T sigma_Y^2 = 2
        path = no_reinsurance_path(flat_short_params)
        for x in (0.0, 1.0, 5.0):
            val = closed_form_objective("I", path, flat_short_params, 0.0, x)
            assert val.mean == pytest.approx(x + 0.1, abs=1e-9)
            assert val.variance == pytest.approx(2.0, abs=1e-9)
            assert val.j == pytest.approx(x, abs=1e-9)

    def test_no_reinsurance_reinsurers_inert(self, flat_short_params):
        path = no_reinsurance_path(flat_short_params)
        for party in ("R1", "R2"):
            val = closed_form_objective(party, path, flat_short_params, 0.0, 10.0)
            assert val.mean == pytest.approx(10.0, abs=1e-12)
            assert val.variance == 0.0

    def test_zero_intensity(self, base_params, eq_path):
        p0 = dataclasses.replace(base_params, lam=0.0)
        for party in ("I", "R1", "R2"):
            val = closed_form_objective(party, eq_path, p0, 0.0, 3.0)
            assert val.mean == pytest.approx(p0.accum(party, 0.0) * 3.0, rel=1e-12)
            assert val.variance == 0.0
            assert val.j == val.mean

    def test_affine_in_surplus(self, base_params, eq_path):
        for party in ("I", "R1", "R2"):
            lo = closed_form_objective(party, eq_path, base_params, 1.0, 0.0)
            hi = closed_form_objective(party, eq_path, base_params, 1.0, 10.0)
            slope = (hi.mean - lo.mean) / 10.0
            assert slope == pytest.approx(base_params.accum(party, 1.0), rel=1e-12)
            assert hi.variance == pytest.approx(lo.variance, rel=1e-12)

    def test_terminal_time(self, base_params, eq_path):
        val = closed_form_objective("I", eq_path, base_params, base_params.T, 4.2)
        assert (val.mean, val.variance, val.j) == (4.2, 0.0, 4.2)

    def test_j_never_exceeds_mean(self, base_params, eq_path):
        for party in ("I", "R1", "R2"):
            val = closed_form_objective(party, eq_path, base_params, 0.0, 1.0)
            assert val.j <= val.mean
            assert val.variance >= 0.0


class TestValueIntercept:
    def test_terminal_condition(self, base_params, eq_path):
        for party in ("I", "R1", "R2"):
            assert value_intercept(party, base_params, eq_path)(base_params.T) == 0.0

    def test_zero_intensity_vanishes(self, base_params, eq_path):
        p0 = dataclasses.replace(base_params, lam=0.0)
        for party in ("I", "R1", "R2"):
            assert value_intercept(party, p0, eq_path)(0.0) == pytest.approx(0.0,
                                                                             abs=1e-15)

    def test_value_equals_objective_at_equilibrium(self, base_params, eq_path):
        # V(t, x) = A x + B(t) must reproduce J at the equilibrium strategies
        for party in ("I", "R1", "R2"):
            intercept = value_intercept(party, base_params, eq_path)
            x0 = base_params.x0(party)
            for t in (0.0, base_params.T / 2, base_params.T):
                j = closed_form_objective(party, eq_path, base_params, t, x0).j
                assert intercept.value(t, x0) == pytest.approx(j, abs=1e-6)

    def test_reference_intercepts(self, base_params, eq_path):
        # frozen from an independent Simpson integration of the reduced
        # running rewards on a 4001-point grid
        assert value_intercept("I", base_params, eq_path)(0.0) == \
            pytest.approx(-0.0632231, abs=2e-6)
        assert value_intercept("R1", base_params, eq_path)(0.0) == \
            pytest.approx(0.1676435, abs=2e-6)
        assert value_intercept("R2", base_params, eq_path)(0.0) == \
            pytest.approx(0.1294820, abs=2e-6)

    def test_off_equilibrium_constant_path(self, base_params):
        # V-vs-J consistency is an identity of the integrands, so it holds
        # along any deterministic path, not only the equilibrium one
        path = constant_path(base_params, 0.4, 0.5)
        for party in ("I", "R1", "R2"):
            intercept = value_intercept(party, base_params, path)
            j = closed_form_objective(party, path, base_params, 2.0, 7.0).j
            assert intercept.value(2.0, 7.0) == pytest.approx(j, abs=1e-6)


class TestStrategyPaths:
    def test_equilibrium_path_matches_pointwise_solve(self, base_params, eq_path):
        from reinsgame.expo import constrained_equilibrium
        for t in (0.0, 3.3, 8.0):
            eq = constrained_equilibrium(base_params, t)
            assert float(eq_path.xi1(t)) == pytest.approx(eq.xi1_star, abs=1e-7)
            assert float(eq_path.xi2(t)) == pytest.approx(eq.xi2_star, abs=1e-7)

    def test_no_reinsurance_premiums_vanish(self, base_params):
        from reinsgame.valuation import path_profile
        profile = path_profile(no_reinsurance_path(base_params), base_params,
                               np.linspace(0.0, 8.0, 5))
        assert np.all(profile.p1 == 0.0)
        assert np.all(profile.p2 == 0.0)
        assert np.allclose(profile.retained, base_params.claims.mean)

    def test_profile_matches_premium_rates(self, base_params, eq_path):
        from reinsgame.market import PremiumPoint, premium_rates
        from reinsgame.response import response
        from reinsgame.valuation import path_profile
        s = np.array([0.0, 2.5, 7.0])
        profile = path_profile(eq_path, base_params, s)
        for i, t in enumerate(s):
            point = PremiumPoint(float(eq_path.xi1(t)), float(eq_path.xi2(t)), float(t))
            p1, p2 = premium_rates(point, response(point, base_params), base_params)
            assert profile.p1[i] == pytest.approx(p1, rel=1e-12)
            assert profile.p2[i] == pytest.approx(p2, rel=1e-12)
