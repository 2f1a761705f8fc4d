import numpy as np
import pytest

from liqsched.market_model import MarketParams, RiskLevel

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def base_params() -> MarketParams:
    return MarketParams(
        s0=[50.0, 100.0],
        x0=[1e7, 8e6],
        sigma=[[0.08, 0.02], [0.1, 0.03]],
        gamma=[[3e-9, 1e-9], [2e-9, 5e-9]],
        eta=[3e-8, 5e-8],
    )


@pytest.fixture
def risk() -> RiskLevel:
    return RiskLevel(0.99)


def scalar_params(**kw) -> MarketParams:
    """One-asset market with everything zero unless given."""
    d = dict(s0=[10.0], x0=[1.0], sigma=[[0.0]], gamma=[[0.0]], eta=[0.0])
    d.update({k: np.atleast_1d(v) if k in ("s0", "x0", "eta") else np.atleast_2d(v) for k, v in kw.items()})
    return MarketParams(**d)


@pytest.fixture
def acceptance_report():
    def report(criterion: str, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        assert ok, f"{criterion}: {detail}"

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
