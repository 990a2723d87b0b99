"""Closed-form equilibrium machinery for exponential claims.

Reinsurer 1's first-order condition reduces to a quadratic whose positive
root is ``G_fun``; composing with the deductible gives the two reaction
curves ``h1`` (reinsurer 1's, via the inverse of G) and ``h2`` (reinsurer
2's, fully explicit).  Their unique crossing is the unconstrained premium
equilibrium; clamping it to the admissibility box follows the published
three-case construction, with the resulting regime tagged.

Note: contrary to a side remark in the source analysis, h1 is strictly
*increasing* on its domain (it runs from 0 to +inf between the bracket
endpoints), which the property tests assert.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConfigError, DomainError, RangeError
from .market import (SECTION4, Exponential, MarketParams, PremiumPoint,
                     admissible_box, gamma_accumulations)
from .response import ResponseStrategy, response
from .roots import bisect

_SERIES_CUTOFF = 1e-3
_ENDPOINT_SHRINK = 1e-12


class Regime(str, Enum):
    """Which admissibility-box constraints bind at the clamped equilibrium."""

    INTERIOR = "Interior"
    UPPER_RIGHT = "UpperRight"
    XI2_CAP_ONLY = "Xi2CapOnly"
    XI1_FLOOR_ONLY = "Xi1FloorOnly"
    LOWER_LEFT = "LowerLeft"
    OTHER_BOUNDARY = "OtherBoundary"


@dataclass(frozen=True)
class EquilibriumResult:
    """Clamped premium equilibrium with its regime and unconstrained anchor."""

    xi1_star: float
    xi2_star: float
    response: ResponseStrategy
    regime: Regime
    unconstrained: tuple[float, float]
    t: float = 0.0

    def point(self) -> PremiumPoint:
        return PremiumPoint(self.xi1_star, self.xi2_star, self.t)


def e_fun(x: float) -> float:
    """(2/x^2)e^x - (1 + 2/x + 2/x^2), the scaled truncated second moment.

    Equals sum_{n>=1} 2 x^n/(n+2)!; the series form is used below 1e-3 where
    the closed form loses ~10 digits to cancellation.
    """
    if x <= 0:
        raise DomainError("e_fun requires x > 0")
    if x < _SERIES_CUTOFF:
        term, total = x / 3.0, 0.0  # 2*x/3! = x/3
        for n in range(1, 12):
            total += term
            term *= x / (n + 3)
        return total
    return (2.0 / (x * x)) * math.exp(x) - (1.0 + 2.0 / x + 2.0 / (x * x))


def g_fun(x: float, c_r1: float) -> float:
    """Positive root of the reduced quadratic in the FOC ratio, at e-value x.

    Strictly decreasing from g(0) = 1 to 2*c_r1/(2*c_r1+1) as x -> inf.
    """
    if x < 0 or c_r1 <= 0:
        raise DomainError("g_fun requires x >= 0 and c_r1 > 0")
    b = 2.0 * c_r1 - 1.0 + x * (2.0 * c_r1 + 1.0)
    root = math.hypot(b, math.sqrt(8.0 * c_r1 * (x + 1.0)))
    if b > 0:  # rationalized form avoids cancellation for large x
        return 4.0 * c_r1 * (x + 1.0) / (b + root)
    return 0.5 * (-b + root)


def g_range(c_r1: float) -> tuple[float, float]:
    """Open range (lim_{x->inf} g, g(0)) of g_fun(., c_r1)."""
    b = 2.0 * c_r1 - 1.0
    g0 = 0.5 * (-b + math.sqrt(b * b + 8.0 * c_r1))
    return 2.0 * c_r1 / (2.0 * c_r1 + 1.0), g0


def G_fun(x: float, c_r1: float) -> float:
    """g_fun composed with e_fun; continuously decreasing on (0, inf)."""
    return g_fun(e_fun(x), c_r1)


def G_inv(y: float, c_r1: float) -> float:
    """Inverse of G_fun by bisection to 1e-12 interval width.

    Raises RangeError when y is not strictly inside G's open range; the
    endpoints are shrunk by 1e-12 relative so boundary values are rejected
    rather than evaluated.
    """
    lim_inf, g0 = g_range(c_r1)
    if not (lim_inf * (1.0 + _ENDPOINT_SHRINK) <= y <= g0 * (1.0 - _ENDPOINT_SHRINK)):
        raise RangeError(f"G_inv argument {y!r} outside open range ({lim_inf}, {g0})")
    hi = 1.0
    while G_fun(hi, c_r1) > y:
        hi *= 2.0
        if hi > 1024.0:
            raise RangeError(f"G_inv argument {y!r} too close to the range infimum")
    return bisect(lambda x: G_fun(x, c_r1) - y, 1e-300, hi, xtol=1e-12)


def _coeffs(params: MarketParams, t: float):
    a_i, a_r1, a_r2 = gamma_accumulations(params, t)
    return a_i, a_r1, a_r2, a_r1 / a_i, a_r2 / a_i


def _beta(params: MarketParams) -> float:
    if not isinstance(params.claims, Exponential):
        raise DomainError("closed-form equilibrium requires exponential claims")
    return params.claims.beta


def h1_domain(params: MarketParams, t: float) -> tuple[float, float]:
    """Open xi1 interval on which reinsurer 1's reaction curve is defined.

    These are also the endpoints bracketing the unconstrained fixed point:
    (gamma_R1 A_R1 / g(0), gamma_R1 A_R1 (2C+1)/(2C)).
    """
    _, a_r1, _, c1, _ = _coeffs(params, t)
    lim_inf, g0 = g_range(c1)
    return a_r1 / g0, a_r1 / lim_inf


def h1(xi1: float, params: MarketParams, t: float = 0.0) -> float:
    """Reinsurer 1's reaction curve: the xi2 solving its FOC at this xi1."""
    beta = _beta(params)
    a_i, a_r1, _, c1, _ = _coeffs(params, t)
    x = G_inv(a_r1 / xi1, c1)
    return a_i * x / (beta * (a_i / (2.0 * xi1) + 1.0))


def h2(xi1: float, params: MarketParams, t: float = 0.0) -> float:
    """Reinsurer 2's reaction curve: the xi2 solving its FOC at this xi1."""
    beta = _beta(params)
    a_i, _, _, _, c2 = _coeffs(params, t)
    return (a_i / beta) * (1.0 + c2 - a_i / (a_i + 2.0 * xi1))


def h1_inv(xi2: float, params: MarketParams, t: float = 0.0) -> float:
    """Solve h1(xi1) = xi2 by bisection over h1's domain (tolerance 1e-12)."""
    if not xi2 > 0:
        raise RangeError("h1 only takes positive values")
    lo, hi = h1_domain(params, t)
    lo, hi = lo * (1.0 + 1e-9), hi * (1.0 - 1e-9)
    f = lambda x: h1(x, params, t) - xi2
    f_lo, f_hi = f(lo), f(hi)
    if f_lo > 0 or f_hi < 0:  # only reachable within ~1e-9 of the domain ends
        raise RangeError(f"xi2 = {xi2!r} outside the reachable reaction range")
    return bisect(f, lo, hi, xtol=1e-12, f_lo=f_lo, f_hi=f_hi)


def unconstrained_fixed_point(params: MarketParams, t: float = 0.0) -> tuple[float, float]:
    """Unique positive crossing of the two reaction curves (no box).

    h1 - h2 changes sign exactly once on the open domain of h1; located by
    bisection to 1e-12.  The xi1 coordinate does not depend on beta.
    """
    _beta(params)
    lo, hi = h1_domain(params, t)
    lo, hi = lo * (1.0 + 1e-9), hi * (1.0 - 1e-9)
    xi1_bar = bisect(lambda x: h1(x, params, t) - h2(x, params, t), lo, hi, xtol=1e-12)
    return xi1_bar, h2(xi1_bar, params, t)


def _clamp(x: float, lo: float, hi: float) -> float:
    return max(lo, min(x, hi))


def constrained_equilibrium(params: MarketParams, t: float = 0.0) -> EquilibriumResult:
    """Premium equilibrium clamped to the admissibility box.

    Follows the published construction verbatim: xi2* is set by a three-way
    split on where the unconstrained xi1 falls against [theta*beta,
    eta*beta] (clamping to [theta, eta]); reinsurer 1 then best-responds
    once, clamped to its own box.  The regime tag records which clamps bound.
    """
    if params.bound_convention != SECTION4:
        raise ConfigError("the closed-form box construction assumes the "
                          f"'{SECTION4}' admissibility convention")
    _beta(params)
    (xi1_lo, xi1_hi), (xi2_lo, xi2_hi) = admissible_box(params)
    xi1_bar, xi2_bar = unconstrained_fixed_point(params, t)

    # branch of the published three-case split on the unconstrained xi1
    if xi1_bar < xi1_lo:
        branch = "floor"
        xi2_star = _clamp(h2(xi1_lo, params, t), xi2_lo, xi2_hi)
    elif xi1_bar <= xi1_hi:
        branch = "middle"
        xi2_star = _clamp(xi2_bar, xi2_lo, xi2_hi)
    else:
        branch = "cap"
        xi2_star = _clamp(h2(xi1_hi, params, t), xi2_lo, xi2_hi)

    try:
        xi1_react = h1_inv(xi2_star, params, t)
    except RangeError:
        # snap to the box edge on the side the reaction curve points to
        dom_lo, dom_hi = h1_domain(params, t)
        probe = _clamp(0.5 * (dom_lo + dom_hi), dom_lo * (1 + 1e-9), dom_hi * (1 - 1e-9))
        xi1_react = xi1_hi if h1(probe, params, t) < xi2_star else xi1_lo
    xi1_star = _clamp(xi1_react, xi1_lo, xi1_hi)

    # regime per the published case analysis: the branch that fired plus
    # where xi2* landed (this reproduces the published regime thresholds;
    # inside the "cap" branch xi1* itself may come off the corner, see notes)
    floor2, cap2 = xi2_star == xi2_lo, xi2_star == xi2_hi
    if branch == "middle" and not (floor2 or cap2):
        regime = Regime.INTERIOR
    elif branch == "cap" and cap2:
        regime = Regime.UPPER_RIGHT
    elif branch == "middle" and cap2:
        regime = Regime.XI2_CAP_ONLY
    elif branch == "floor" and not (floor2 or cap2):
        regime = Regime.XI1_FLOOR_ONLY
    elif branch == "floor" and floor2:
        regime = Regime.LOWER_LEFT
    else:
        regime = Regime.OTHER_BOUNDARY

    point = PremiumPoint(xi1_star, xi2_star, t)
    return EquilibriumResult(xi1_star, xi2_star, response(point, params), regime,
                             (xi1_bar, xi2_bar), t)
