"""Exact-event simulation of the three surplus processes.

Claim arrivals are exact Poisson event times; between events each surplus
grows by the exact linear ODE (piecewise-constant rates integrate in closed
form) while premium flows are accumulated by trapezoid quadrature on a fixed
time grid.  Per-path randomness comes from counter-based Philox streams
keyed on (seed, path index), so runs are reproducible bit for bit and paths
could be distributed across workers without changing the output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .market import MarketParams, insurer_premium_rate
from .response import indemnity
from .valuation import StrategyPath, path_profile

_DEFAULT_GRID_CELLS = 8000


@dataclass(frozen=True)
class SimConfig:
    paths: int
    seed: int = 0
    step: float | None = None  # premium-flow quadrature step; default T/8000

    def __post_init__(self):
        if self.paths < 1:
            raise DomainError("need at least one path")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit an unsigned 64-bit integer")
        if self.step is not None and not self.step > 0:
            raise DomainError("quadrature step must be positive")


@dataclass(frozen=True)
class TerminalSamples:
    """Per-path terminal surpluses plus aggregate jump accounting."""

    x_i: np.ndarray
    x_r1: np.ndarray
    x_r2: np.ndarray
    total_claims: float = 0.0
    total_jumps: tuple[float, float, float] = (0.0, 0.0, 0.0)

    @property
    def n(self) -> int:
        return len(self.x_i)

    def by_party(self, party: str) -> np.ndarray:
        return {"I": self.x_i, "R1": self.x_r1, "R2": self.x_r2}[party]


def _flow_tables(path: StrategyPath, params: MarketParams, step: float):
    """Precompute, per party, the deterministic pieces of the surplus ODE.

    With I_k(s) = int_0^s rho_k, X(t1) = X(t0) e^{I(t1)-I(t0)}
    + e^{I(t1)} [G(t1) - G(t0)] where G(s) = int_0^s e^{-I(u)} flow(u) du.
    """
    cells = max(1, int(round(params.T / step)))
    s = np.linspace(0.0, params.T, cells + 1)
    profile = path_profile(path, params, s)
    c = insurer_premium_rate(params)
    flows = {"I": c - profile.p1 - profile.p2, "R1": profile.p1, "R2": profile.p2}
    tables = {}
    for party, flow in flows.items():
        i_s = params.rho(party).cumulative(s)
        integrand = np.exp(-i_s) * flow
        g = np.concatenate(([0.0], np.cumsum(
            0.5 * (integrand[1:] + integrand[:-1]) * np.diff(s))))
        tables[party] = (i_s, g)
    return s, tables


def simulate(path: StrategyPath, params: MarketParams, config: SimConfig) -> TerminalSamples:
    """Terminal surplus samples under the given strategy path."""
    step = config.step if config.step is not None else params.T / _DEFAULT_GRID_CELLS
    s_grid, tables = _flow_tables(path, params, step)
    i_i, g_i = tables["I"]
    i_r1, g_r1 = tables["R1"]
    i_r2, g_r2 = tables["R2"]
    T, lam = params.T, params.lam
    mean_gap = math.inf if lam == 0.0 else 1.0 / lam
    dist = params.claims

    out = np.empty((config.paths, 3))
    total_claims = 0.0
    total_jumps = np.zeros(3)
    for idx in range(config.paths):
        rng = np.random.Generator(np.random.Philox(
            key=np.array([config.seed, idx], dtype=np.uint64)))
        x = [params.x0_I, params.x0_R1, params.x0_R2]
        t_prev = 0.0
        i_prev = (0.0, 0.0, 0.0)
        g_prev = (0.0, 0.0, 0.0)

        def advance(t_now):
            i_now = (np.interp(t_now, s_grid, i_i), np.interp(t_now, s_grid, i_r1),
                     np.interp(t_now, s_grid, i_r2))
            g_now = (np.interp(t_now, s_grid, g_i), np.interp(t_now, s_grid, g_r1),
                     np.interp(t_now, s_grid, g_r2))
            for k in range(3):
                x[k] = x[k] * math.exp(i_now[k] - i_prev[k]) \
                    + math.exp(i_now[k]) * (g_now[k] - g_prev[k])
            return i_now, g_now

        t_event = rng.exponential(mean_gap) if lam > 0 else math.inf
        while t_event <= T:
            i_prev, g_prev = advance(t_event)
            t_prev = t_event
            y = float(dist.ppf(rng.random()))
            l1, l2, retained = indemnity(y, path.response(t_event))
            x[0] -= retained
            x[1] -= l1
            x[2] -= l2
            total_claims += y
            total_jumps += (retained, l1, l2)
            t_event = t_prev + rng.exponential(mean_gap)
        advance(T)
        out[idx] = x
    return TerminalSamples(out[:, 0].copy(), out[:, 1].copy(), out[:, 2].copy(),
                           total_claims, tuple(float(v) for v in total_jumps))


@dataclass(frozen=True)
class ObjectiveEstimate:
    """Sample mean-variance objective with standard errors.

    se_variance uses the fourth-moment formula for Var(s^2); se_j combines
    the two by the delta method including the mean-variance covariance m3/n.
    """

    party: str
    mean: float
    variance: float
    j: float
    se_mean: float
    se_variance: float
    se_j: float


def estimate_objectives(samples: TerminalSamples,
                        params: MarketParams) -> dict[str, ObjectiveEstimate]:
    """Unbiased per-party estimates of (mean, variance, J) with standard errors."""
    if samples.n < 2:
        raise DomainError("objective estimation needs at least 2 paths")
    n = samples.n
    result = {}
    for party in ("I", "R1", "R2"):
        xs = samples.by_party(party)
        gamma = params.gamma(party)
        mean = float(np.mean(xs))
        var = float(np.var(xs, ddof=1))
        centered = xs - mean
        m3 = float(np.mean(centered**3))
        m4 = float(np.mean(centered**4))
        var_of_var = max((m4 - (n - 3) / (n - 1) * var * var) / n, 0.0)
        se_mean = math.sqrt(var / n)
        se_var = math.sqrt(var_of_var)
        var_j = max(var / n + (0.5 * gamma) ** 2 * var_of_var - gamma * m3 / n, 0.0)
        result[party] = ObjectiveEstimate(party, mean, var, mean - 0.5 * gamma * var,
                                          se_mean, se_var, math.sqrt(var_j))
    return result
