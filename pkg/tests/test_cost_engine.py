import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import scalar_params
from liqsched.cost_engine import (
    cost_variance,
    expected_cost,
    realized_cost_closed,
    simulate_path,
    var_p,
    var_p_linear,
    write_path_csv,
)
from liqsched.errors import DimensionError, InvalidStepCount, InvalidTau
from liqsched.market_model import MarketParams, RiskLevel, covariance
from liqsched.schedule import Schedule, linear_schedule


class FixedZ:
    """Risk level stand-in with an exact quantile."""

    def __init__(self, z):
        self.z_p = z


def direct_cost(params, s, xi):
    """Oracle: literal cost definition, prices rebuilt from the cumulative form."""
    n = params.n
    cost = float(params.x0 @ params.s0)
    for k in range(1, s.m + 1):
        shock = math.sqrt(s.tau) * params.sigma @ xi[:k].sum(axis=0)
        sold = s.positions[0] - s.positions[k]
        d = s.positions[k - 1] - s.positions[k]
        price = params.s0 + shock - params.gamma @ sold - params.eta * d / s.tau
        cost -= float(d @ price)
    return cost


def test_zero_everything():
    p = MarketParams(s0=[3.0, 7.0], x0=[2.0, 5.0], sigma=np.zeros((2, 2)), gamma=np.zeros((2, 2)), eta=[0, 0])
    s = linear_schedule(p.x0, 4, 0.3)
    path = simulate_path(p, s, np.random.default_rng(0).standard_normal((4, 2)))
    np.testing.assert_array_equal(path.exec_prices, np.tile(p.s0, (4, 1)))
    assert path.realized_cost == 0.0


def test_single_step_temporary_impact():
    p = scalar_params(eta=1.0)
    path = simulate_path(p, linear_schedule([1.0], 1, 1.0), np.zeros((1, 1)))
    assert path.exec_prices[0, 0] == 9.0
    assert path.realized_cost == 1.0


def test_two_step_permanent_impact():
    p = scalar_params(gamma=1.0)
    s = linear_schedule([1.0], 2, 1.0)
    path = simulate_path(p, s, np.zeros((2, 1)))
    np.testing.assert_array_equal(path.exec_prices[:, 0], [9.5, 9.0])
    assert path.realized_cost == 0.75
    assert realized_cost_closed(p, s, np.zeros((2, 1))) == 0.75


def test_closed_form_temporary_only():
    p = scalar_params(eta=1.0)
    assert realized_cost_closed(p, linear_schedule([1.0], 2, 1.0), np.zeros((2, 1))) == 0.5


def random_instance(rng, n, m, symmetric, proportional=False):
    gamma = rng.uniform(0, 1, (n, n))
    if symmetric:
        gamma = 0.5 * (gamma + gamma.T)
    x0 = rng.uniform(1, 10, n)
    # random non-increasing trajectory to zero; proportional ones share one
    # remaining fraction across assets at every step
    fractions = np.sort(rng.uniform(0, 1, (m - 1, 1 if proportional else n)), axis=0)[::-1]
    positions = np.vstack([x0, x0 * fractions, np.zeros(n)])
    p = MarketParams(
        s0=rng.uniform(50, 150, n),
        x0=x0,
        sigma=rng.normal(0, 1, (n, n)),
        gamma=gamma,
        eta=rng.uniform(0, 1, n),
    )
    return p, Schedule(positions, rng.uniform(0.1, 2)), rng.standard_normal((m, n))


@pytest.mark.parametrize("symmetric, proportional", [(True, False), (True, True), (False, True)])
def test_closed_form_matches_direct_sum(symmetric, proportional):
    rng = np.random.default_rng(1234)
    for _ in range(100):
        n, m = int(rng.integers(1, 5)), int(rng.integers(1, 21))
        p, s, xi = random_instance(rng, n, m, symmetric, proportional)
        direct = direct_cost(p, s, xi)
        path = simulate_path(p, s, xi)
        closed = realized_cost_closed(p, s, xi)
        floor = 1e-12 * float(np.abs(p.x0) @ np.abs(p.s0))
        assert path.realized_cost == pytest.approx(direct, rel=1e-9, abs=floor)
        assert closed == pytest.approx(direct, rel=1e-9, abs=floor)
        assert path.per_asset_cost.sum() == pytest.approx(path.realized_cost, rel=1e-12)


def test_asymmetric_gamma_uses_symmetric_part():
    rng = np.random.default_rng(7)
    p, s, xi = random_instance(rng, 3, 6, symmetric=False)
    p_sym = p.replace(gamma=0.5 * (p.gamma + p.gamma.T))
    assert realized_cost_closed(p, s, xi) == realized_cost_closed(p_sym, s, xi)
    assert expected_cost(p, s) == expected_cost(p_sym, s)


def test_asymmetric_gamma_general_schedule_gap():
    """Off the proportional family the direct sum keeps the antisymmetric cross terms."""
    rng = np.random.default_rng(99)
    for _ in range(50):
        p, s, xi = random_instance(rng, int(rng.integers(2, 5)), int(rng.integers(2, 21)), symmetric=False)
        d = s.positions[:-1] - s.positions[1:]
        anti = 0.5 * (p.gamma - p.gamma.T)
        gap = sum(float(d[k] @ anti @ d[j]) for k in range(s.m) for j in range(k))
        direct = simulate_path(p, s, xi).realized_cost
        floor = 1e-12 * float(np.abs(p.x0) @ np.abs(p.s0))
        assert direct == pytest.approx(realized_cost_closed(p, s, xi) + gap, rel=1e-9, abs=floor)


def test_expected_cost_examples():
    assert expected_cost(scalar_params(eta=1.0), linear_schedule([1.0], 1, 1.0)) == 1.0
    assert expected_cost(scalar_params(eta=1.0), linear_schedule([1.0], 2, 1.0)) == 0.5
    for m in (1, 2, 3, 10, 37):
        got = expected_cost(scalar_params(gamma=1.0), linear_schedule([1.0], m, 0.7))
        assert got == pytest.approx(0.5 + 0.5 / m, rel=1e-14)


def test_variance_examples():
    assert cost_variance(scalar_params(eta=1.0), linear_schedule([1.0], 5, 1.0)) == 0.0
    assert cost_variance(scalar_params(sigma=1.0), linear_schedule([1.0], 2, 1.0)) == 1.25


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 300), st.floats(0.01, 5), st.integers(0, 10_000))
def test_variance_sum_of_squares_identity(m, tau, seed):
    rng = np.random.default_rng(seed)
    p = MarketParams(
        s0=[1, 1], x0=rng.uniform(1, 1e6, 2), sigma=rng.normal(0, 1, (2, 2)), gamma=np.zeros((2, 2)), eta=[0, 0]
    )
    q = float(p.x0 @ covariance(p) @ p.x0)
    expected = tau * q * (m + 1) * (2 * m + 1) / (6 * m)
    assert cost_variance(p, linear_schedule(p.x0, m, tau)) == pytest.approx(expected, rel=1e-11)


def test_var_p_examples():
    p = scalar_params(sigma=1.0, eta=1.0)
    s = linear_schedule([1.0], 2, 1.0)
    assert var_p(p, s, FixedZ(2.0)).var_p == pytest.approx(2.7360679774997897, rel=1e-14)
    assert var_p(p, s, RiskLevel(0.5)).var_p == expected_cost(p, s)
    q = scalar_params(eta=1.0, gamma=0.3)
    assert var_p(q, s, RiskLevel(0.99)).var_p == expected_cost(q, s)
    moments = var_p(p, s, RiskLevel(0.9))
    assert moments.var_p == pytest.approx(moments.mean + RiskLevel(0.9).z_p * moments.std)


def test_var_p_linear_matches_general(base_params, risk):
    for m in (1, 2, 5, 17, 100, 999):
        for tau in (0.001, 0.1, 3.0):
            general = var_p(base_params, linear_schedule(base_params.x0, m, tau), risk).var_p
            assert var_p_linear(base_params, m, tau, risk) == pytest.approx(general, rel=1e-10)


def test_var_p_linear_temporary_only(base_params, risk):
    p = base_params.replace(sigma=np.zeros((2, 2)), gamma=np.zeros((2, 2)))
    xex = float(p.x0 @ (p.eta * p.x0))
    assert var_p_linear(p, 8, 0.25, risk) == pytest.approx(xex / 2.0, rel=1e-15)


def test_var_p_linear_continuum_limit(base_params, risk):
    p = base_params.replace(gamma=np.zeros((2, 2)))
    T = 2.5
    q = float(p.x0 @ covariance(p) @ p.x0)
    limit = float(p.x0 @ (p.eta * p.x0)) / T + risk.z_p * math.sqrt(T * q / 3)
    errs = [abs(var_p_linear(p, m, T / m, risk) - limit) / limit for m in (10, 100, 1000, 10000)]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 1e-3


def test_var_p_linear_errors(base_params, risk):
    with pytest.raises(InvalidStepCount):
        var_p_linear(base_params, 0, 1.0, risk)
    with pytest.raises(InvalidTau):
        var_p_linear(base_params, 3, -1.0, risk)


def test_permanent_only_first_term_schedule_independent():
    p = MarketParams(
        s0=[10, 20], x0=[3.0, 4.0], sigma=np.zeros((2, 2)), gamma=[[1.0, 0.2], [0.2, 2.0]], eta=[0, 0]
    )
    s1 = linear_schedule(p.x0, 4, 1.0)
    s2 = Schedule([[3.0, 4.0], [1.0, 3.5], [0.2, 0.1], [0.0, 0.0]], 0.3)
    g = p.gamma_sym
    half_x0 = 0.5 * float(p.x0 @ g @ p.x0)
    for s in (s1, s2):
        d = s.positions[:-1] - s.positions[1:]
        path_term = sum(0.5 * float(dk @ g @ dk) for dk in d)
        assert expected_cost(p, s) == pytest.approx(half_x0 + path_term, rel=1e-14)
        noise = np.zeros((s.m, 2))
        assert simulate_path(p, s, noise).realized_cost == pytest.approx(half_x0 + path_term, rel=1e-12)


def test_dimension_errors(base_params):
    s = linear_schedule(base_params.x0, 3, 1.0)
    with pytest.raises(DimensionError):
        simulate_path(base_params, s, np.zeros((2, 2)))
    with pytest.raises(DimensionError):
        expected_cost(base_params, linear_schedule([1.0], 3, 1.0))
    with pytest.raises(DimensionError):
        realized_cost_closed(base_params, s, np.zeros((3, 3)))


def test_path_csv(base_params):
    s = linear_schedule(base_params.x0, 3, 1.0)
    buf = io.StringIO()
    write_path_csv(simulate_path(base_params, s, np.zeros((3, 2))), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "k,xi1,xi2,S1,S2"
    assert len(lines) == 4
