"""Exogenous market data: rate curves, claim laws, parameters, premium principles.

Everything here is an immutable value object; all downstream solvers treat
these as read-only and may share them freely across workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, interpolate

from .errors import ConfigError, DomainError, IntegrationError

SECTION4 = "section4"          # xi1 box [theta*beta, eta*beta]
DEFINITION21 = "definition21"  # xi1 box [theta*a_Y/sigma2, eta*a_Y/sigma2]

_TAIL_MASS = 1e-12
_QUAD_ABS_TOL = 1e-10


@dataclass(frozen=True)
class RateCurve:
    """Piecewise-constant deterministic interest rate on [0, horizon].

    ``segments`` is an ordered list of (t_start, rate) pairs; the first
    segment must start at 0 and each rate applies until the next start (the
    last until ``horizon``).  Integrals are computed exactly segment by
    segment, so the accumulation factor exp(int_t^T rho) carries no
    quadrature error.
    """

    segments: tuple[tuple[float, float], ...]
    horizon: float

    def __post_init__(self):
        segs = tuple((float(t), float(r)) for t, r in self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise DomainError("rate curve needs at least one segment")
        if not self.horizon > 0:
            raise DomainError("rate curve horizon must be positive")
        if segs[0][0] != 0.0:
            raise DomainError("first rate segment must start at t=0")
        starts = [t for t, _ in segs]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise DomainError("segment start times must be strictly increasing")
        if starts[-1] >= self.horizon:
            raise DomainError("segment starts must lie inside [0, horizon)")
        for _, r in segs:
            if not math.isfinite(r) or r < 0.0:
                raise DomainError(f"rates must be finite and non-negative, got {r}")

    @classmethod
    def flat(cls, rate: float, horizon: float) -> "RateCurve":
        return cls(((0.0, rate),), horizon)

    def rate_at(self, t: float) -> float:
        starts = [s for s, _ in self.segments]
        idx = int(np.searchsorted(starts, t, side="right")) - 1
        return self.segments[max(idx, 0)][1]

    def integral(self, t0: float, t1: float) -> float:
        """Exact int_{t0}^{t1} rho(s) ds; requires 0 <= t0 <= t1 <= horizon."""
        if not (0.0 <= t0 <= t1 <= self.horizon + 1e-12):
            raise DomainError(f"integration bounds [{t0}, {t1}] outside [0, {self.horizon}]")
        total = 0.0
        for i, (start, rate) in enumerate(self.segments):
            end = self.segments[i + 1][0] if i + 1 < len(self.segments) else self.horizon
            a, b = max(t0, start), min(t1, end)
            if b > a:
                total += rate * (b - a)
        return total

    def cumulative(self, s: np.ndarray) -> np.ndarray:
        """Vectorized int_0^s rho, exact (the cumulative is piecewise linear)."""
        knots = np.array([t for t, _ in self.segments] + [self.horizon])
        vals = np.concatenate(([0.0], np.cumsum(
            [r * (knots[i + 1] - knots[i]) for i, (_, r) in enumerate(self.segments)])))
        return np.interp(np.asarray(s, dtype=float), knots, vals)


def accumulation(curve: RateCurve, t: float, T: float) -> float:
    """Accumulation factor exp(int_t^T rho(s) ds)."""
    return math.exp(curve.integral(t, T))


@dataclass(frozen=True)
class TruncatedMoments:
    """Layer moments of a claim law split at a deductible d.

    ``m2_below`` = int_0^d y^2 dF, ``excess_mean`` = int_d^inf (y-d) dF and
    ``survival`` = 1 - F(d) are the three quantities entering the reinsurers'
    first-order conditions; ``m1_below`` and ``excess_sq`` are the companion
    moments needed by premiums and variance terms.
    """

    d: float
    m2_below: float
    excess_mean: float
    survival: float
    m1_below: float
    excess_sq: float


class ClaimDistribution:
    """Claim-severity law with finite first and second moments.

    ``second_moment`` is int y^2 dF (not the central variance).
    """

    kind = "generic"

    @property
    def mean(self) -> float:
        raise NotImplementedError

    @property
    def second_moment(self) -> float:
        raise NotImplementedError

    def cdf(self, y):
        raise NotImplementedError

    def survival(self, y):
        return 1.0 - self.cdf(y)

    def ppf(self, u):
        raise NotImplementedError

    def truncated(self, d: float) -> TruncatedMoments:
        raise NotImplementedError


@dataclass(frozen=True)
class Exponential(ClaimDistribution):
    """Exponential(beta) severities: mean 1/beta, second moment 2/beta^2."""

    beta: float
    kind = "exponential"

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError("exponential rate beta must be positive")

    @property
    def mean(self) -> float:
        return 1.0 / self.beta

    @property
    def second_moment(self) -> float:
        return 2.0 / self.beta**2

    def cdf(self, y):
        return -np.expm1(-self.beta * np.maximum(y, 0.0))

    def survival(self, y):
        return np.exp(-self.beta * np.maximum(y, 0.0))

    def ppf(self, u):
        return -np.log1p(-u) / self.beta

    def truncated(self, d):
        """Closed-form layer moments; accepts scalar d (inf allowed) or arrays."""
        b = self.beta
        if np.isscalar(d) or np.ndim(d) == 0:
            d = float(d)
            if d < 0:
                raise DomainError("deductible must be non-negative")
            if math.isinf(d):
                return TruncatedMoments(d, 2.0 / b**2, 0.0, 0.0, 1.0 / b, 0.0)
        s = np.exp(-b * d)
        m2 = 2.0 / b**2 - s * (d * d + 2.0 * d / b + 2.0 / b**2)
        m1 = 1.0 / b - s * (d + 1.0 / b)
        return TruncatedMoments(d, m2, s / b, s, m1, 2.0 * s / b**2)


class GenericClaims(ClaimDistribution):
    """Claim law given by its CDF; moments and layers by adaptive quadrature.

    The integration domain is cut at the smallest y_max with tail mass below
    1e-12; integrals use survival-function forms so only F is required.
    Sampling inverts a cached monotone (PCHIP) spline of F.
    """

    kind = "generic"

    def __init__(self, cdf: Callable[[float], float]):
        self._cdf = cdf
        self._ymax = self._find_tail_cut()
        self._mean = self._quad(lambda y: self.survival(y), 0.0, self._ymax)
        self._m2 = self._quad(lambda y: 2.0 * y * self.survival(y), 0.0, self._ymax)
        self._ppf_spline = None

    def _find_tail_cut(self) -> float:
        y = 1.0
        while 1.0 - float(self._cdf(y)) >= _TAIL_MASS:
            y *= 2.0
            if y > 1e15:
                raise IntegrationError("claim CDF tail mass does not fall below 1e-12")
        return y

    @staticmethod
    def _quad(f, a, b) -> float:
        val, err, *info = integrate.quad(f, a, b, epsabs=_QUAD_ABS_TOL, limit=200,
                                         full_output=1)
        if len(info) > 1:  # quadpack appended an error message
            raise IntegrationError(f"quadrature did not converge: {info[1]}")
        if err > max(_QUAD_ABS_TOL * 100, 1e-8 * abs(val)):
            raise IntegrationError(f"quadrature error estimate too large: {err:g}")
        return float(val)

    @property
    def mean(self) -> float:
        return self._mean

    @property
    def second_moment(self) -> float:
        return self._m2

    def cdf(self, y):
        return np.clip(self._cdf(y), 0.0, 1.0)

    def ppf(self, u):
        if self._ppf_spline is None:
            grid = np.linspace(0.0, self._ymax, 4097)
            fvals = np.clip([float(self._cdf(y)) for y in grid], 0.0, 1.0)
            fvals, idx = np.unique(fvals, return_index=True)
            self._ppf_spline = interpolate.PchipInterpolator(fvals, grid[idx])
        return self._ppf_spline(np.clip(u, 0.0, self.cdf(self._ymax)))

    def truncated(self, d: float) -> TruncatedMoments:
        d = float(d)
        if d < 0:
            raise DomainError("deductible must be non-negative")
        if d >= self._ymax:
            return TruncatedMoments(d, self._m2, 0.0, 0.0, self._mean, 0.0)
        em = self._quad(lambda y: self.survival(y), d, self._ymax)
        esq = 2.0 * self._quad(lambda y: (y - d) * self.survival(y), d, self._ymax)
        surv = float(self.survival(d))
        m1 = self._mean - em - d * surv
        m2 = self._m2 - esq - 2.0 * d * em - d * d * surv
        return TruncatedMoments(d, m2, em, surv, m1, esq)


def claim_moments(dist: ClaimDistribution) -> tuple[float, float]:
    """(a_Y, sigma_Y^2) = (int y dF, int y^2 dF)."""
    return dist.mean, dist.second_moment


@dataclass(frozen=True)
class MarketParams:
    """All exogenous model constants.

    ``lam`` is the claim intensity; ``theta`` the insurer's own loading and
    ``eta`` the loading cap; the three gammas are mean-variance risk
    aversions; the rho curves drive the accumulation factors A_k(t).
    ``bound_convention`` selects which xi1 admissibility box applies (the two
    published conventions disagree for exponential claims).
    """

    T: float
    lam: float
    theta: float
    eta: float
    gamma_I: float
    gamma_R1: float
    gamma_R2: float
    rho_I: RateCurve
    rho_R1: RateCurve
    rho_R2: RateCurve
    claims: ClaimDistribution
    x0_I: float = 0.0
    x0_R1: float = 0.0
    x0_R2: float = 0.0
    bound_convention: str = SECTION4

    def __post_init__(self):
        if not self.T > 0:
            raise ConfigError("horizon T must be positive")
        if self.lam < 0:
            raise ConfigError("claim intensity lambda must be non-negative")
        if not (0.0 < self.theta < self.eta):
            raise ConfigError("loadings must satisfy 0 < theta < eta")
        for name in ("gamma_I", "gamma_R1", "gamma_R2"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"risk aversion {name} must be positive")
        for name in ("rho_I", "rho_R1", "rho_R2"):
            if getattr(self, name).horizon < self.T:
                raise ConfigError(f"rate curve {name} does not cover [0, T]")
        if self.bound_convention not in (SECTION4, DEFINITION21):
            raise ConfigError(f"unknown bound convention {self.bound_convention!r}")

    def rho(self, party: str) -> RateCurve:
        return {"I": self.rho_I, "R1": self.rho_R1, "R2": self.rho_R2}[party]

    def gamma(self, party: str) -> float:
        return {"I": self.gamma_I, "R1": self.gamma_R1, "R2": self.gamma_R2}[party]

    def x0(self, party: str) -> float:
        return {"I": self.x0_I, "R1": self.x0_R1, "R2": self.x0_R2}[party]

    def accum(self, party: str, t: float) -> float:
        """A_k(t) = exp(int_t^T rho_k)."""
        return accumulation(self.rho(party), t, self.T)


def gamma_accumulations(params: MarketParams, t: float) -> tuple[float, float, float]:
    """(gamma_I*A_I, gamma_R1*A_R1, gamma_R2*A_R2) at time t."""
    return (params.gamma_I * params.accum("I", t),
            params.gamma_R1 * params.accum("R1", t),
            params.gamma_R2 * params.accum("R2", t))


@dataclass(frozen=True)
class PremiumPoint:
    """A pair of reinsurer loadings at a given time.

    xi1 multiplies the second moment (mean-variance principle, units
    1/claim-size); xi2 multiplies the mean (expected-value principle,
    dimensionless).
    """

    xi1: float
    xi2: float
    t: float = 0.0


def admissible_box(params: MarketParams) -> tuple[tuple[float, float], tuple[float, float]]:
    """(xi1 range, xi2 range) under the configured admissibility convention."""
    a_y, sig2 = claim_moments(params.claims)
    if params.bound_convention == DEFINITION21:
        scale = a_y / sig2
    else:
        # [theta*beta, eta*beta]; for non-exponential laws beta_eff = 2 a_Y / sigma2
        scale = params.claims.beta if isinstance(params.claims, Exponential) \
            else 2.0 * a_y / sig2
    return ((params.theta * scale, params.eta * scale), (params.theta, params.eta))


@dataclass(frozen=True)
class LayerMoments:
    """Expectations of the layered indemnities under the claim law."""

    l1: float
    l1_sq: float
    l2: float
    l2_sq: float
    retained: float
    retained_sq: float


def _bounded_term(coef, survival):
    # retention/cap may be +inf in degenerate contracts where survival is 0
    return np.where(survival == 0.0, 0.0, coef * survival) if np.ndim(survival) \
        else (0.0 if survival == 0.0 else coef * survival)


def layer_moments(response, dist: ClaimDistribution) -> LayerMoments:
    """Moments of (l1, l2, retained) for a layered contract (q, cap, d, retention)."""
    tm = dist.truncated(response.d)
    q, cap, ret = response.q, response.cap, response.retention_limit
    return LayerMoments(
        l1=q * tm.m1_below + _bounded_term(cap, tm.survival),
        l1_sq=q * q * tm.m2_below + _bounded_term(cap * cap, tm.survival),
        l2=tm.excess_mean,
        l2_sq=tm.excess_sq,
        retained=(1.0 - q) * tm.m1_below + _bounded_term(ret, tm.survival),
        retained_sq=(1.0 - q) ** 2 * tm.m2_below + _bounded_term(ret * ret, tm.survival),
    )


def premium_rates(point: PremiumPoint, response, params: MarketParams) -> tuple[float, float]:
    """Instantaneous premium rates (p1, p2) for the given contract.

    p1 = lam*(E l1 + xi1 E l1^2) (mean-variance principle);
    p2 = (1+xi2)*lam*E l2 (expected-value principle).
    """
    lm = layer_moments(response, params.claims)
    p1 = params.lam * (lm.l1 + point.xi1 * lm.l1_sq)
    p2 = (1.0 + point.xi2) * params.lam * lm.l2
    return p1, p2


def insurer_premium_rate(params: MarketParams) -> float:
    """c = (1+theta)*lam*a_Y, the insurer's own premium income rate."""
    return (1.0 + params.theta) * params.lam * params.claims.mean
