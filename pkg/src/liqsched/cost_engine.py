"""Execution-price paths, realized liquidation cost, and the cost moments.

Every closed form uses the symmetric part of the permanent impact matrix,
(gamma + gamma') / 2, which leaves every quadratic form x' gamma x unchanged.
The direct cost sum also produces cross terms delta_k' gamma delta_j (j < k).
These collapse to the closed form when gamma is symmetric. They also collapse
for any gamma when each period sells the same fraction of every asset, as
the linear schedule does. For other trajectories under an asymmetric gamma
the two differ by sum_{j<k} delta_k' A delta_j, where A = (gamma - gamma') / 2.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO

import numpy as np

from .errors import DimensionError, InvalidStepCount, InvalidTau
from .market_model import MarketParams, RiskLevel, covariance
from .schedule import Schedule, deltas


@dataclass(frozen=True)
class PathRealization:
    noise: np.ndarray  # (M, N) standard normal draws xi_k
    exec_prices: np.ndarray  # (M, N) execution prices S~_k
    per_asset_cost: np.ndarray  # (N,) x0^i S0^i - sum_k delta_k^i S~_k^i
    realized_cost: float


@dataclass(frozen=True)
class CostMoments:
    mean: float
    variance: float
    var_p: float

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def _check(params: MarketParams, s: Schedule, noise=None) -> np.ndarray | None:
    if s.n != params.n:
        raise DimensionError(f"schedule has {s.n} assets, market has {params.n}")
    if not np.array_equal(s.x0, params.x0):
        raise DimensionError("schedule does not start at the portfolio's x0")
    if noise is None:
        return None
    xi = np.asarray(noise, dtype=float)
    if xi.ndim == 1 and params.n == 1:
        xi = xi[:, None]
    if xi.shape != (s.m, params.n):
        raise DimensionError(f"noise has shape {xi.shape}, expected ({s.m}, {params.n})")
    return xi


def simulate_path(params: MarketParams, s: Schedule, noise) -> PathRealization:
    """Run the discrete price recursion along ``s`` with the given draws.

    The unimpacted price S_k = S_{k-1} + sqrt(tau) sigma xi_k is carried
    separately; permanent impact accumulates as gamma times the shares sold
    so far, and temporary impact eta v_k hits only the trade at step k.
    """
    xi = _check(params, s, noise)
    d = deltas(s)
    sqrt_tau = math.sqrt(s.tau)
    fundamental = params.s0.copy()
    sold = np.zeros(params.n)
    exec_prices = np.empty((s.m, params.n))
    for k in range(s.m):
        fundamental = fundamental + sqrt_tau * (params.sigma @ xi[k])
        sold = sold + d[k]
        v = d[k] / s.tau
        exec_prices[k] = fundamental - params.gamma @ sold - params.eta * v
    per_asset = params.x0 * params.s0 - np.sum(d * exec_prices, axis=0)
    return PathRealization(xi, exec_prices, per_asset, float(np.sum(per_asset)))


def realized_cost_closed(params: MarketParams, s: Schedule, noise) -> float:
    """Closed-form realized cost for one set of draws."""
    xi = _check(params, s, noise)
    d = deltas(s)
    g = params.gamma_sym
    x0 = params.x0
    noise_term = -math.sqrt(s.tau) * float(np.sum((s.positions[:-1] @ params.sigma) * xi))
    quad = 0.5 * g + np.diag(params.eta) / s.tau
    impact = 0.5 * float(x0 @ g @ x0) + float(np.einsum("ki,ij,kj->", d, quad, d))
    return noise_term + impact


def expected_cost(params: MarketParams, s: Schedule) -> float:
    _check(params, s)
    d = deltas(s)
    g = params.gamma_sym
    quad = 0.5 * g + np.diag(params.eta) / s.tau
    return 0.5 * float(params.x0 @ g @ params.x0) + float(np.einsum("ki,ij,kj->", d, quad, d))


def cost_variance(params: MarketParams, s: Schedule) -> float:
    _check(params, s)
    cov = covariance(params)
    total = 0.0
    for x in s.positions[:-1]:
        total += float(x @ cov @ x)
    return s.tau * total


def var_p(params: MarketParams, s: Schedule, risk: RiskLevel) -> CostMoments:
    mean = expected_cost(params, s)
    variance = cost_variance(params, s)
    return CostMoments(mean, variance, mean + risk.z_p * math.sqrt(variance))


def var_p_linear(params: MarketParams, m: float, tau: float, risk: RiskLevel) -> float:
    """VaR of the linear schedule with ``m`` steps of length ``tau``.

    ``m`` may be real so the optimizer can evaluate the objective between
    integers; with integer ``m`` it equals ``var_p`` on ``linear_schedule``.
    """
    if not m >= 1:
        raise InvalidStepCount(f"step count must be >= 1, got {m}")
    if not tau > 0:
        raise InvalidTau(f"tau must be positive, got {tau}")
    x0 = params.x0
    xgx = float(x0 @ params.gamma_sym @ x0)
    xex = float(x0 @ (params.eta * x0))
    xsx = float(x0 @ covariance(params) @ x0)
    spread = tau * xsx * m / 3.0 * (1.0 + 1.0 / m) * (1.0 + 1.0 / (2.0 * m))
    return 0.5 * xgx + xgx / (2.0 * m) + xex / (tau * m) + risk.z_p * math.sqrt(spread)


def write_path_csv(path: PathRealization, f: IO[str]) -> None:
    """Columns k, xi1..xiN, S1..SN for debugging a single path."""
    n = path.noise.shape[1]
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["k"] + [f"xi{i + 1}" for i in range(n)] + [f"S{i + 1}" for i in range(n)])
    for k, (xi, px) in enumerate(zip(path.noise, path.exec_prices), start=1):
        w.writerow([k] + [repr(float(v)) for v in xi] + [repr(float(v)) for v in px])
