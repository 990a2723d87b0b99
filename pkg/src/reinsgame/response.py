"""Insurer's equilibrium best response to a pair of reinsurance loadings.

The optimal contract is layered: a proportional share q of small claims goes
to reinsurer 1 (capped at xi2/(2*xi1)), and the excess over a deductible d
goes to reinsurer 2, leaving the insurer a bounded retention.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePremiumError, DomainError
from .market import MarketParams, PremiumPoint


@dataclass(frozen=True)
class ResponseStrategy:
    """Layered reinsurance contract at time t.

    Claims y <= d are shared proportionally (q to reinsurer 1); larger claims
    pay ``cap`` to reinsurer 1, y - d to reinsurer 2, and leave the insurer
    exactly ``retention_limit``.  By construction d = retention_limit + cap,
    which makes the per-claim split continuous at y = d.
    """

    q: float
    d: float
    cap: float
    retention_limit: float
    t: float = 0.0


def response(point: PremiumPoint, params: MarketParams) -> ResponseStrategy:
    """Equilibrium contract for the loadings in ``point``.

    q = gamma_I*A_I / (2*xi1 + gamma_I*A_I), cap = xi2/(2*xi1),
    retention = xi2/(gamma_I*A_I), d = retention + cap.
    """
    if np.any(np.equal(point.xi1, 0.0)):
        raise DegeneratePremiumError("xi1 = 0: proportional layer is unpriced")
    if np.any(np.less(point.xi1, 0)) or np.any(np.less(point.xi2, 0)):
        raise DomainError("loadings must be non-negative")
    a_i = params.gamma_I * params.accum("I", point.t)
    q = a_i / (2.0 * point.xi1 + a_i)
    cap = point.xi2 / (2.0 * point.xi1)
    retention = point.xi2 / a_i
    return ResponseStrategy(q=q, d=retention + cap, cap=cap,
                            retention_limit=retention, t=point.t)


def indemnity(y: float, resp: ResponseStrategy) -> tuple[float, float, float]:
    """Per-claim split (to reinsurer 1, to reinsurer 2, retained).

    The boundary y = d is assigned to the proportional branch; the split is
    continuous there, so the choice only fixes determinism.
    """
    if y < 0:
        raise DomainError("claim size must be non-negative")
    if y <= resp.d:
        return resp.q * y, 0.0, (1.0 - resp.q) * y
    return resp.cap, y - resp.d, resp.retention_limit


def no_reinsurance(t: float = 0.0) -> ResponseStrategy:
    """Contract ceding nothing: the insurer keeps every claim in full."""
    return ResponseStrategy(q=0.0, d=math.inf, cap=0.0, retention_limit=math.inf, t=t)


def full_cession_to_r2(t: float = 0.0) -> ResponseStrategy:
    """Contract ceding every claim to reinsurer 2 (d = 0, no proportional layer)."""
    return ResponseStrategy(q=0.0, d=0.0, cap=0.0, retention_limit=0.0, t=t)
