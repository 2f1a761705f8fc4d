"""Optimal liquidation horizon for the linear (constant-rate) schedule.

Two routes: the continuous-limit closed form for T*, and the discrete
first-order condition in M at a fixed step length, solved by bisection.
The closed form does not depend on permanent impact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cost_engine import var_p_linear
from .errors import DegenerateMarket, DegenerateRisk, InvalidTau, NoInteriorMinimum
from .market_model import MarketParams, RiskLevel, covariance

FOC_TOL = 1e-10


@dataclass(frozen=True)
class OptimalHorizon:
    t_star: float
    objective: float | None = None
    m_star: int | None = None
    m_real: float | None = None
    tau: float | None = None
    zero_horizon: bool = False


def _quadratic_forms(params: MarketParams) -> tuple[float, float]:
    x0 = params.x0
    return float(x0 @ (params.eta * x0)), float(x0 @ covariance(params) @ x0)


def _closed_form(xex: float, xsx: float, z_p: float) -> float:
    return (2.0 * math.sqrt(3.0) * xex / (z_p * math.sqrt(xsx))) ** (2.0 / 3.0)


def optimal_time_closed(params: MarketParams, risk: RiskLevel) -> OptimalHorizon:
    """T* = (2 sqrt(3) x0' eta x0 / (z_p sqrt(x0' Sigma x0)))^(2/3).

    With no temporary impact the answer is immediate liquidation, reported
    as ``zero_horizon`` rather than an error.
    """
    if risk.z_p <= 0:
        raise DegenerateRisk(f"z_p = {risk.z_p:.4g} <= 0: the objective has no interior minimum")
    xex, xsx = _quadratic_forms(params)
    if xsx <= 0:
        raise DegenerateMarket("x0' Sigma x0 must be positive")
    if xex < 0:
        raise DegenerateMarket("x0' eta x0 must be non-negative")
    if xex == 0:
        return OptimalHorizon(t_star=0.0, zero_horizon=True)
    # objective in the continuous limit: x0' eta x0 / T + z_p sqrt(T x0' Sigma x0 / 3)
    t_star = _closed_form(xex, xsx, risk.z_p)
    objective = (
        0.5 * float(params.x0 @ params.gamma_sym @ params.x0)
        + xex / t_star
        + risk.z_p * math.sqrt(t_star * xsx / 3.0)
    )
    return OptimalHorizon(t_star=t_star, objective=objective)


def optimal_time_two_asset(
    x1: float,
    x2: float,
    eta1: float,
    eta2: float,
    s11: float,
    s12: float,
    s21: float,
    s22: float,
    z_p: float,
) -> float:
    """Scalar two-asset expansion of the closed-form horizon."""
    if z_p <= 0:
        raise DegenerateRisk(f"z_p = {z_p:.4g} <= 0")
    num = x1 * x1 * eta1 + x2 * x2 * eta2
    var = (
        x1 * x1 * (s11 * s11 + s12 * s12)
        + 2.0 * x1 * x2 * (s11 * s21 + s12 * s22)
        + x2 * x2 * (s21 * s21 + s22 * s22)
    )
    if var <= 0 or num <= 0:
        raise DegenerateMarket("both quadratic forms must be positive")
    return (2.0 * math.sqrt(3.0) * num / (z_p * math.sqrt(var))) ** (2.0 / 3.0)


def foc_rhs(m: float) -> float:
    """(M^2 - 1/2) / (2 sqrt(M + 1/(2M) + 3/2)); strictly increasing for M >= 1."""
    return (m * m - 0.5) / (2.0 * math.sqrt(m + 0.5 / m + 1.5))


def foc_lhs(params: MarketParams, tau: float, risk: RiskLevel) -> float:
    x0 = params.x0
    quad = float(x0 @ (0.5 * params.gamma_sym + np.diag(params.eta) / tau) @ x0)
    xsx = float(x0 @ covariance(params) @ x0)
    return math.sqrt(3.0) * quad / (risk.z_p * math.sqrt(tau * xsx))


def solve_foc(lhs: float, tol: float = FOC_TOL) -> float:
    """Real root M >= 1 of foc_rhs(M) = lhs by doubling then bisection."""
    lo, hi = 1.0, 2.0
    while foc_rhs(hi) < lhs:
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if foc_rhs(mid) < lhs:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def optimal_steps_discrete(params: MarketParams, tau: float, risk: RiskLevel) -> OptimalHorizon:
    """Optimal step count at fixed ``tau``.

    Returns the real root of the first-order condition (``m_real``) and the
    better integer neighbour under the linear-schedule VaR (``m_star``),
    ties going to the smaller M. ``t_star`` is ``tau * m_star``.
    """
    if not tau > 0:
        raise InvalidTau(f"tau must be positive, got {tau}")
    if risk.z_p <= 0:
        raise DegenerateRisk(f"z_p = {risk.z_p:.4g} <= 0: the objective has no interior minimum")
    xex, xsx = _quadratic_forms(params)
    if xsx <= 0:
        raise DegenerateMarket("x0' Sigma x0 must be positive")
    lhs = foc_lhs(params, tau, risk)
    if lhs < foc_rhs(1.0):
        immediate = OptimalHorizon(
            t_star=tau,
            objective=var_p_linear(params, 1, tau, risk),
            m_star=1,
            m_real=1.0,
            tau=tau,
        )
        raise NoInteriorMinimum("objective increases from M = 1; liquidate in one step", immediate)
    m_real = solve_foc(lhs)
    lo = max(1, math.floor(m_real))
    hi = max(1, math.ceil(m_real))
    v_lo = var_p_linear(params, lo, tau, risk)
    v_hi = var_p_linear(params, hi, tau, risk)
    m_star, best = (lo, v_lo) if v_lo <= v_hi else (hi, v_hi)
    return OptimalHorizon(t_star=tau * m_star, objective=best, m_star=m_star, m_real=m_real, tau=tau)
