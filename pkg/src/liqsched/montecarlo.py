"""Seeded Monte Carlo replication of liquidation along the optimal horizon.

Replication stream derivation (stable; acceptance tests pin seeds):
replication ``r`` of master seed ``seed`` draws its (M, N) block of standard
normals from ``Generator(PCG64(SeedSequence(seed, spawn_key=(r,))))`` via
``standard_normal((M, N))``. A stream depends only on (seed, r, M, N), so
results do not depend on how replications are scheduled, and every cell of a
sweep run with the same seed sees the same draws (common random numbers).
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO

import numpy as np

from .cost_engine import cost_variance, expected_cost
from .errors import DegenerateMarket, ValidationError, ZeroNotional
from .market_model import MarketParams, RiskLevel
from .optimizer import optimal_time_closed
from .schedule import Schedule, deltas, linear_schedule

DEFAULT_REPS = 1000
DEFAULT_STEPS = 100
DEFAULT_SEED = 20200101


@dataclass(frozen=True)
class McConfig:
    n_reps: int = DEFAULT_REPS
    seed: int = DEFAULT_SEED
    m_steps: int = DEFAULT_STEPS
    risk: RiskLevel = field(default_factory=RiskLevel)
    workers: int = 1

    def __post_init__(self) -> None:
        if int(self.n_reps) != self.n_reps or self.n_reps < 1:
            raise ValidationError(f"n_reps must be an integer >= 1, got {self.n_reps}")
        if int(self.m_steps) != self.m_steps or self.m_steps < 1:
            raise ValidationError(f"m_steps must be an integer >= 1, got {self.m_steps}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")


@dataclass(frozen=True)
class McSummary:
    n_reps: int
    seed: int
    m_steps: int
    t_horizon: float
    mean_cost: float
    std_cost: float
    per_asset_mean_costs: np.ndarray
    mean_cost_rate: float
    cost_rate_min: float
    cost_rate_max: float
    cost_rate_std: float
    expected_cost: float
    cost_variance: float

    def to_dict(self) -> dict:
        return {
            "n_reps": self.n_reps,
            "seed": self.seed,
            "m_steps": self.m_steps,
            "t_horizon": self.t_horizon,
            "mean_cost": self.mean_cost,
            "std_cost": self.std_cost,
            "per_asset_mean_costs": self.per_asset_mean_costs.tolist(),
            "mean_cost_rate": self.mean_cost_rate,
            "cost_rate": {
                "min": self.cost_rate_min,
                "max": self.cost_rate_max,
                "std": self.cost_rate_std,
            },
            "analytic": {"expected_cost": self.expected_cost, "cost_variance": self.cost_variance},
        }


@dataclass(frozen=True)
class McSamples:
    """Per-replication results, indexed by replication number."""

    costs: np.ndarray  # (R,)
    per_asset: np.ndarray  # (R, N)
    cost_rates: np.ndarray  # (R,)


def replication_noise(seed: int, rep: int, m_steps: int, n_assets: int) -> np.ndarray:
    ss = np.random.SeedSequence(seed, spawn_key=(rep,))
    return np.random.Generator(np.random.PCG64(ss)).standard_normal((m_steps, n_assets))


@lru_cache(maxsize=8)
def _noise_block(seed: int, n_reps: int, m_steps: int, n_assets: int, workers: int) -> np.ndarray:
    block = np.empty((n_reps, m_steps, n_assets))

    def fill(r: int) -> None:
        block[r] = replication_noise(seed, r, m_steps, n_assets)

    if workers == 1:
        for r in range(n_reps):
            fill(r)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(n_reps)))
    block.setflags(write=False)
    return block


def noise_block(cfg: McConfig, n_assets: int) -> np.ndarray:
    """All replication draws, shape ``(n_reps, m_steps, n_assets)``, read-only."""
    return _noise_block(int(cfg.seed), int(cfg.n_reps), int(cfg.m_steps), n_assets, cfg.workers)


def simulate_costs(params: MarketParams, s: Schedule, noise: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised path recursion over a stack of draws ``(R, M, N)``.

    Returns (total costs (R,), per-asset costs (R, N)); totals are the sum of
    the per-asset costs on every path.
    """
    d = deltas(s)  # (M, N)
    shocks = math.sqrt(s.tau) * np.einsum("ij,rkj->rki", params.sigma, noise)
    fundamental = params.s0 + np.cumsum(shocks, axis=1)
    impact = np.cumsum(d, axis=0) @ params.gamma.T + params.eta * (d / s.tau)
    exec_prices = fundamental - impact[None, :, :]
    per_asset = params.x0 * params.s0 - np.sum(d[None, :, :] * exec_prices, axis=1)
    return per_asset.sum(axis=1), per_asset


def cost_rate(costs, params: MarketParams) -> float:
    """Total cost as a fraction of initial notional x0'S0."""
    notional = params.notional
    if not notional > 0:
        raise ZeroNotional(f"initial notional x0'S0 = {notional} must be positive")
    return float(np.sum(costs)) / notional


def run_samples(
    params: MarketParams, cfg: McConfig, t_horizon: float | None = None
) -> tuple[Schedule, McSamples]:
    if t_horizon is None:
        horizon = optimal_time_closed(params, cfg.risk)
        if horizon.zero_horizon:
            raise DegenerateMarket("optimal horizon is zero (no temporary impact); nothing to simulate")
        t_horizon = horizon.t_star
    s = linear_schedule(params.x0, cfg.m_steps, t_horizon / cfg.m_steps)
    notional = params.notional
    if not notional > 0:
        raise ZeroNotional(f"initial notional x0'S0 = {notional} must be positive")
    costs, per_asset = simulate_costs(params, s, noise_block(cfg, params.n))
    return s, McSamples(costs, per_asset, costs / notional)


def run_experiment(params: MarketParams, cfg: McConfig, t_horizon: float | None = None) -> McSummary:
    """Replicate liquidation along the linear schedule over the optimal horizon.

    ``t_horizon`` overrides the closed-form T*.
    """
    s, smp = run_samples(params, cfg, t_horizon)
    ddof = 1 if cfg.n_reps > 1 else 0
    return McSummary(
        n_reps=cfg.n_reps,
        seed=cfg.seed,
        m_steps=cfg.m_steps,
        t_horizon=s.horizon,
        mean_cost=float(np.mean(smp.costs)),
        std_cost=float(np.std(smp.costs, ddof=ddof)),
        per_asset_mean_costs=np.mean(smp.per_asset, axis=0),
        mean_cost_rate=float(np.mean(smp.cost_rates)),
        cost_rate_min=float(np.min(smp.cost_rates)),
        cost_rate_max=float(np.max(smp.cost_rates)),
        cost_rate_std=float(np.std(smp.cost_rates, ddof=ddof)),
        expected_cost=expected_cost(params, s),
        cost_variance=cost_variance(params, s),
    )


def write_samples_csv(smp: McSamples, f: IO[str]) -> None:
    """Columns rep, C, C1..CN, CPw."""
    n = smp.per_asset.shape[1]
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["rep", "C"] + [f"C{i + 1}" for i in range(n)] + ["CPw"])
    for r in range(smp.costs.shape[0]):
        w.writerow(
            [r, repr(float(smp.costs[r]))]
            + [repr(float(v)) for v in smp.per_asset[r]]
            + [repr(float(smp.cost_rates[r]))]
        )
