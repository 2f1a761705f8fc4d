"""Optimal liquidation horizons and execution-cost simulation for N-asset
portfolios under linear permanent and temporary price impact."""

from .cost_engine import (
    CostMoments,
    PathRealization,
    cost_variance,
    expected_cost,
    realized_cost_closed,
    simulate_path,
    var_p,
    var_p_linear,
)
from .errors import *  # noqa: F401,F403
from .market_model import (
    MarketParams,
    RiskLevel,
    asset_volatility,
    cholesky,
    correlation_paper,
    correlation_standard,
    covariance,
    load_params,
)
from .montecarlo import McConfig, McSummary, cost_rate, run_experiment
from .optimizer import (
    OptimalHorizon,
    optimal_steps_discrete,
    optimal_time_closed,
    optimal_time_two_asset,
)
from .schedule import Schedule, deltas, linear_schedule, speeds
from .sweep import SweepResult, SweepSpec, emit_csv, emit_svg, run_sweep

__version__ = "0.1.0"
