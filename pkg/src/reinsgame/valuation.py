"""Closed-form mean-variance objectives and equilibrium value intercepts.

Terminal surpluses are affine in the accumulation factors, so each party's
objective reduces to time integrals of layer moments: the mean accumulates
net drift (premium flow minus expected claim outgo) and the variance follows
the compound-Poisson isometry, Var = int A(s)^2 lam E[(covered amount)^2] ds.
Equilibrium value functions are V_k(t, x) = A_k(t) x + B_k(t) with B_k the
accumulated optimized running reward; at equilibrium V and the objective J
agree, which the tests use as a cross-module check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError
from .expo import constrained_equilibrium
from .market import (Exponential, MarketParams, PremiumPoint, insurer_premium_rate,
                     layer_moments)
from .reaction import general_equilibrium
from .response import ResponseStrategy, no_reinsurance, response

PARTIES = ("I", "R1", "R2")
_DEFAULT_PANELS = 2000
_DEFAULT_PATH_GRID = 801


@dataclass(frozen=True)
class ObjectiveValue:
    """Mean-variance objective split: J = mean - (gamma/2) * variance."""

    party: str
    mean: float
    variance: float
    j: float


class StrategyPath:
    """Deterministic loadings and insurer response over [0, T].

    Loadings are stored on a uniform grid and interpolated linearly; the
    response is recomputed from the interpolated loadings, except for paths
    built around a fixed custom contract (e.g. no reinsurance), which pin the
    response and pay no reinsurance premiums.
    """

    def __init__(self, params: MarketParams, grid: np.ndarray, xi1: np.ndarray,
                 xi2: np.ndarray, fixed_response: ResponseStrategy | None = None):
        self.params = params
        self.grid = np.asarray(grid, dtype=float)
        self._xi1 = np.asarray(xi1, dtype=float)
        self._xi2 = np.asarray(xi2, dtype=float)
        self.fixed_response = fixed_response

    def xi1(self, t):
        return np.interp(t, self.grid, self._xi1)

    def xi2(self, t):
        return np.interp(t, self.grid, self._xi2)

    def response(self, t: float) -> ResponseStrategy:
        if self.fixed_response is not None:
            return ResponseStrategy(self.fixed_response.q, self.fixed_response.d,
                                    self.fixed_response.cap,
                                    self.fixed_response.retention_limit, t)
        point = PremiumPoint(float(self.xi1(t)), float(self.xi2(t)), t)
        return response(point, self.params)


def equilibrium_path(params: MarketParams, n_grid: int = _DEFAULT_PATH_GRID) -> StrategyPath:
    """Equilibrium loadings precomputed on a uniform time grid.

    Exponential claims use the closed-form boxed equilibrium; other laws fall
    back to the damped best-response candidate.
    """
    grid = np.linspace(0.0, params.T, n_grid)
    xi1 = np.empty(n_grid)
    xi2 = np.empty(n_grid)
    exponential = isinstance(params.claims, Exponential)
    for i, t in enumerate(grid):
        if exponential:
            eq = constrained_equilibrium(params, float(t))
            xi1[i], xi2[i] = eq.xi1_star, eq.xi2_star
        else:
            point = general_equilibrium(params, float(t))
            xi1[i], xi2[i] = point.xi1, point.xi2
    return StrategyPath(params, grid, xi1, xi2)


def constant_path(params: MarketParams, xi1: float, xi2: float) -> StrategyPath:
    """Time-constant loadings (the insurer still responds optimally)."""
    grid = np.array([0.0, params.T])
    return StrategyPath(params, grid, np.full(2, xi1), np.full(2, xi2))


def no_reinsurance_path(params: MarketParams) -> StrategyPath:
    """Degenerate strategy ceding nothing; both premium rates are zero."""
    grid = np.array([0.0, params.T])
    return StrategyPath(params, grid, np.zeros(2), np.zeros(2),
                        fixed_response=no_reinsurance())


@dataclass(frozen=True)
class PathProfile:
    """Layer moments and premium rates of a strategy path on a time grid."""

    s: np.ndarray
    xi1: np.ndarray
    xi2: np.ndarray
    l1: np.ndarray
    l1_sq: np.ndarray
    l2: np.ndarray
    l2_sq: np.ndarray
    retained: np.ndarray
    retained_sq: np.ndarray
    p1: np.ndarray
    p2: np.ndarray


def path_profile(path: StrategyPath, params: MarketParams, s: np.ndarray) -> PathProfile:
    """Evaluate a path's moments on grid ``s`` (vectorized where the law allows)."""
    s = np.asarray(s, dtype=float)
    xi1, xi2 = np.atleast_1d(path.xi1(s)), np.atleast_1d(path.xi2(s))
    n = s.size
    if path.fixed_response is not None:
        lm = layer_moments(path.fixed_response, params.claims)
        ones = np.ones(n)
        fields = [lm.l1 * ones, lm.l1_sq * ones, lm.l2 * ones, lm.l2_sq * ones,
                  lm.retained * ones, lm.retained_sq * ones]
        p1 = params.lam * (fields[0] + xi1 * fields[1])
        p2 = (1.0 + xi2) * params.lam * fields[2]
        return PathProfile(s, xi1, xi2, *fields, p1, p2)

    a_i = params.gamma_I * np.exp(params.rho_I.cumulative(params.T)
                                  - params.rho_I.cumulative(s))
    q = a_i / (2.0 * xi1 + a_i)
    cap = xi2 / (2.0 * xi1)
    ret = xi2 / a_i
    d = ret + cap
    if isinstance(params.claims, Exponential):
        tm = params.claims.truncated(d)
        m1b, m2b, em, esq, surv = tm.m1_below, tm.m2_below, tm.excess_mean, \
            tm.excess_sq, tm.survival
    else:
        cols = np.array([[t.m1_below, t.m2_below, t.excess_mean, t.excess_sq, t.survival]
                         for t in (params.claims.truncated(float(dd)) for dd in d)])
        m1b, m2b, em, esq, surv = cols.T
    l1 = q * m1b + cap * surv
    l1_sq = q * q * m2b + cap * cap * surv
    retained = (1.0 - q) * m1b + ret * surv
    retained_sq = (1.0 - q) ** 2 * m2b + ret * ret * surv
    p1 = params.lam * (l1 + xi1 * l1_sq)
    p2 = (1.0 + xi2) * params.lam * em
    return PathProfile(s, xi1, xi2, l1, l1_sq, em, esq, retained, retained_sq, p1, p2)


def _accum_profile(params: MarketParams, party: str, s: np.ndarray) -> np.ndarray:
    curve = params.rho(party)
    return np.exp(curve.cumulative(params.T) - curve.cumulative(s))


def _drift_and_covered_sq(profile: PathProfile, params: MarketParams, party: str):
    lam = params.lam
    if party == "I":
        flow = insurer_premium_rate(params) - profile.p1 - profile.p2
        return flow - lam * profile.retained, profile.retained_sq
    if party == "R1":
        return profile.p1 - lam * profile.l1, profile.l1_sq
    if party == "R2":
        return profile.p2 - lam * profile.l2, profile.l2_sq
    raise DomainError(f"unknown party {party!r}")


def closed_form_objective(party: str, path: StrategyPath, params: MarketParams,
                          t: float, x: float,
                          panels: int = _DEFAULT_PANELS) -> ObjectiveValue:
    """Objective J = E[X(T)] - (gamma/2) Var(X(T)) under a deterministic path.

    Composite Simpson with ``panels`` panels over [t, T]; at t = T the
    objective is the surplus itself.
    """
    gamma = params.gamma(party)
    a_t = params.accum(party, t)
    if t >= params.T:
        return ObjectiveValue(party, x, 0.0, x)
    s = np.linspace(t, params.T, panels + 1)
    profile = path_profile(path, params, s)
    a_s = _accum_profile(params, party, s)
    drift, covered_sq = _drift_and_covered_sq(profile, params, party)
    mean = a_t * x + integrate.simpson(a_s * drift, x=s)
    variance = integrate.simpson(a_s * a_s * params.lam * covered_sq, x=s)
    return ObjectiveValue(party, float(mean), float(variance),
                          float(mean - 0.5 * gamma * variance))


def _running_reward(profile: PathProfile, params: MarketParams, party: str,
                    a_s: np.ndarray) -> np.ndarray:
    lam, a_y = params.lam, params.claims.mean
    if party == "I":
        return lam * (params.theta * a_y - profile.xi1 * profile.l1_sq
                      - profile.xi2 * profile.l2
                      - 0.5 * params.gamma_I * a_s * profile.retained_sq)
    if party == "R1":
        return lam * (profile.xi1 - 0.5 * params.gamma_R1 * a_s) * profile.l1_sq
    if party == "R2":
        return lam * (profile.xi2 * profile.l2
                      - 0.5 * params.gamma_R2 * a_s * profile.l2_sq)
    raise DomainError(f"unknown party {party!r}")


class ValueIntercept:
    """Intercept B_k(t) of the affine value function V_k(t, x) = A_k(t) x + B_k(t).

    B_k(t) accumulates the party's optimized running reward from t to the
    horizon and vanishes at t = T.
    """

    def __init__(self, party: str, params: MarketParams, path: StrategyPath,
                 panels: int = _DEFAULT_PANELS):
        if party not in PARTIES:
            raise DomainError(f"unknown party {party!r}")
        self.party = party
        self.params = params
        self.path = path
        self.panels = panels

    def __call__(self, t: float) -> float:
        if t >= self.params.T:
            return 0.0
        s = np.linspace(t, self.params.T, self.panels + 1)
        profile = path_profile(self.path, self.params, s)
        a_s = _accum_profile(self.params, self.party, s)
        reward = _running_reward(profile, self.params, self.party, a_s)
        return float(integrate.simpson(a_s * reward, x=s))

    def value(self, t: float, x: float) -> float:
        return self.params.accum(self.party, t) * x + self(t)


def value_intercept(party: str, params: MarketParams, path: StrategyPath,
                    panels: int = _DEFAULT_PANELS) -> ValueIntercept:
    """Value-function intercept for one party along a strategy path."""
    return ValueIntercept(party, params, path, panels)
