"""Reinsurers' first-order conditions and best responses for arbitrary claims.

Both reduced FOCs are one-dimensional in the probed loading once the
insurer's response is substituted, and both are free of the claim intensity
(lambda cancels), so roots are located by sign scans plus bisection.  For
exponential claims the results must (and do, see tests) coincide with the
closed forms in :mod:`reinsgame.expo`; for other laws the fixed point is a
candidate equilibrium only, since no uniqueness theory is available.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ConvergenceError, DegeneratePremiumError, DomainError
from .expo import g_range
from .market import (ClaimDistribution, Exponential, MarketParams, PremiumPoint,
                     TruncatedMoments, admissible_box, gamma_accumulations,
                     layer_moments)
from .response import response
from .roots import scan_bisect

_XTOL = 1e-12
_BRACKET_PAD = 0.10


@dataclass(frozen=True)
class FocRatios:
    """Dimensionless coefficient ratios entering the first-order conditions."""

    c_r1: float
    c_r2: float
    b_r1_ratio: float  # gamma_R1*A_R1 / xi1; distinct from the value intercept B_R1(t)


def foc_ratios(point: PremiumPoint, params: MarketParams) -> FocRatios:
    a_i, a_r1, a_r2 = gamma_accumulations(params, point.t)
    if point.xi1 == 0.0:
        raise DegeneratePremiumError("xi1 = 0 in FOC ratios")
    return FocRatios(a_r1 / a_i, a_r2 / a_i, a_r1 / point.xi1)


def truncated_moments(dist: ClaimDistribution, d: float) -> TruncatedMoments:
    """Layer moments (int_0^d y^2 dF, int_d^inf (y-d) dF, S(d), ...) at deductible d."""
    if d < 0:
        raise DomainError("deductible must be non-negative")
    return dist.truncated(d)


def foc_residual_r1(point: PremiumPoint, params: MarketParams) -> float:
    """Reinsurer 1's FOC residual at the insurer's response to ``point``.

    [2q(C_R1+1) - 1] * int_0^d y^2 dF + d^2 [gamma_R1 A_R1/xi1 - 1] S(d).
    """
    ratios = foc_ratios(point, params)
    resp = response(point, params)
    tm = truncated_moments(params.claims, resp.d)
    return ((2.0 * resp.q * (ratios.c_r1 + 1.0) - 1.0) * tm.m2_below
            + resp.d ** 2 * (ratios.b_r1_ratio - 1.0) * tm.survival)


def foc_residual_r2(point: PremiumPoint, params: MarketParams) -> float:
    """Reinsurer 2's FOC residual at the insurer's response to ``point``.

    [1 + C_R2 + gamma_R2 A_R2/(2 xi1)] * int_d^inf (y-d) dF - d S(d).
    """
    _, _, a_r2 = gamma_accumulations(params, point.t)
    ratios = foc_ratios(point, params)
    resp = response(point, params)
    tm = truncated_moments(params.claims, resp.d)
    return ((1.0 + ratios.c_r2 + a_r2 / (2.0 * point.xi1)) * tm.excess_mean
            - resp.d * tm.survival)


def instantaneous_reward(point: PremiumPoint, params: MarketParams, which: str) -> float:
    """Integrand of the reinsurer's HJB supremum at the insurer's response.

    R1: lam * (xi1 - gamma_R1 A_R1 / 2) * E[l1^2];
    R2: lam * (xi2 * E[l2] - (gamma_R2/2) A_R2 * E[l2^2]).
    Used as a grid-search oracle confirming FOC roots as maximizers.
    """
    _, a_r1, a_r2 = gamma_accumulations(params, point.t)
    lm = layer_moments(response(point, params), params.claims)
    if which == "R1":
        return params.lam * (point.xi1 - 0.5 * a_r1) * lm.l1_sq
    if which == "R2":
        return params.lam * (point.xi2 * lm.l2 - 0.5 * a_r2 * lm.l2_sq)
    raise DomainError(f"which must be 'R1' or 'R2', got {which!r}")


def xi1_search_bracket(params: MarketParams, t: float) -> tuple[float, float]:
    """Default xi1 bracket: the fixed-point interval widened 10% each side.

    The interval provably contains the exponential-claims crossing and is a
    sane default for other laws.
    """
    a_i, a_r1, _ = gamma_accumulations(params, t)
    lim_inf, g0 = g_range(a_r1 / a_i)
    return (a_r1 / g0) * (1.0 - _BRACKET_PAD), (a_r1 / lim_inf) * (1.0 + _BRACKET_PAD)


def xi2_search_bracket(params: MarketParams, t: float) -> tuple[float, float]:
    """Default xi2 bracket [1e-8, 10 * gamma_I A_I (1 + C_R2) / beta_eff].

    h2's horizontal asymptote bounds the root for exponential claims; other
    laws get the generous multiple with beta_eff = 2 a_Y / sigma_Y^2.
    """
    a_i, _, a_r2 = gamma_accumulations(params, t)
    a_y, sig2 = params.claims.mean, params.claims.second_moment
    beta_eff = params.claims.beta if isinstance(params.claims, Exponential) \
        else 2.0 * a_y / sig2
    return 1e-8, 10.0 * a_i * (1.0 + a_r2 / a_i) / beta_eff


def _clip_to_box(x: float, box: tuple[float, float]) -> float:
    return max(box[0], min(x, box[1]))


def reaction_xi1(xi2: float, params: MarketParams, t: float = 0.0,
                 clamp: bool = False) -> float:
    """Reinsurer 1's best-response loading: the root of its FOC in xi1."""
    if not xi2 > 0:
        raise DomainError("reaction_xi1 requires xi2 > 0")
    lo, hi = xi1_search_bracket(params, t)
    root = scan_bisect(lambda x: foc_residual_r1(PremiumPoint(x, xi2, t), params),
                       lo, hi, xtol=_XTOL)
    return _clip_to_box(root, admissible_box(params)[0]) if clamp else root


def reaction_xi2(xi1: float, params: MarketParams, t: float = 0.0,
                 clamp: bool = False) -> float:
    """Reinsurer 2's best-response loading: the root of its FOC in xi2."""
    if not xi1 > 0:
        raise DegeneratePremiumError("reaction_xi2 requires xi1 > 0")
    lo, hi = xi2_search_bracket(params, t)
    root = scan_bisect(lambda x: foc_residual_r2(PremiumPoint(xi1, x, t), params),
                       lo, hi, xtol=_XTOL)
    return _clip_to_box(root, admissible_box(params)[1]) if clamp else root


def general_equilibrium(params: MarketParams, t: float = 0.0, max_iter: int = 200,
                        damping: float = 0.5, residual_tol: float = 1e-8) -> PremiumPoint:
    """Candidate premium equilibrium by damped best-response iteration.

    Alternates the two reaction maps with step damping to suppress
    oscillation; accepts when both FOC residuals fall below ``residual_tol``.
    For exponential claims the result matches the closed-form fixed point.
    """
    (_, _), (xi2_lo, xi2_hi) = admissible_box(params)
    xi2 = 0.5 * (xi2_lo + xi2_hi)
    xi1 = reaction_xi1(xi2, params, t)
    for _ in range(max_iter):
        xi1 = reaction_xi1(xi2, params, t)
        proposal = reaction_xi2(xi1, params, t)
        nxt = damping * xi2 + (1.0 - damping) * proposal
        if abs(nxt - xi2) <= 1e-13 * max(1.0, abs(xi2)):
            xi2 = nxt
            break
        xi2 = nxt
    else:
        raise ConvergenceError(f"best-response iteration did not settle in {max_iter} steps")
    xi1 = reaction_xi1(xi2, params, t)
    point = PremiumPoint(xi1, xi2, t)
    r1, r2 = foc_residual_r1(point, params), foc_residual_r2(point, params)
    if abs(r1) > residual_tol or abs(r2) > residual_tol:
        raise ConvergenceError(f"fixed point residuals too large: ({r1:g}, {r2:g})")
    return point
