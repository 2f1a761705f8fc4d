"""Discrete liquidation trajectories."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO

import numpy as np

from .errors import DimensionError, InvalidStepCount, InvalidTau


@dataclass(frozen=True)
class Schedule:
    """Positions x_0..x_M (shape ``(M + 1, N)``) traded every ``tau`` time units.

    Any trajectory ending at zero is accepted, so non-linear schedules can be
    fed to the cost engine even though the optimizer only uses linear ones.
    """

    positions: np.ndarray
    tau: float

    def __post_init__(self) -> None:
        pos = np.array(self.positions, dtype=float)
        if pos.ndim == 1:
            pos = pos[:, None]
        if pos.ndim != 2 or pos.shape[0] < 2:
            raise InvalidStepCount("a schedule needs at least x_0 and x_M (M >= 1)")
        if not np.all(np.isfinite(pos)):
            raise DimensionError("positions contain non-finite entries")
        if np.any(pos[-1] != 0.0):
            raise DimensionError("final position must be exactly zero")
        tau = float(self.tau)
        if not (tau > 0.0 and np.isfinite(tau)):
            raise InvalidTau(f"tau must be positive, got {self.tau}")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "tau", tau)

    @property
    def m(self) -> int:
        return self.positions.shape[0] - 1

    @property
    def n(self) -> int:
        return self.positions.shape[1]

    @property
    def horizon(self) -> float:
        return self.tau * self.m

    @property
    def x0(self) -> np.ndarray:
        return self.positions[0]

    def times(self) -> np.ndarray:
        return self.tau * np.arange(self.m + 1)


def linear_schedule(x0, m: int, tau: float) -> Schedule:
    """Sell equal quantities at equal intervals: x_k = x0 (M - k) / M."""
    if int(m) != m or m < 1:
        raise InvalidStepCount(f"step count must be an integer >= 1, got {m}")
    if not tau > 0:
        raise InvalidTau(f"tau must be positive, got {tau}")
    m = int(m)
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    remaining = np.arange(m, -1, -1, dtype=float)
    positions = x0[None, :] * remaining[:, None] / m
    positions[0] = x0  # x0 * m / m can be off by an ulp
    return Schedule(positions, tau)


def deltas(s: Schedule) -> np.ndarray:
    """Shares sold in each period, delta_k = x_{k-1} - x_k, shape ``(M, N)``."""
    return s.positions[:-1] - s.positions[1:]


def speeds(s: Schedule) -> np.ndarray:
    return deltas(s) / s.tau


def write_schedule_csv(s: Schedule, f: IO[str]) -> None:
    """Columns k, t, x1..xN."""
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["k", "t"] + [f"x{i + 1}" for i in range(s.n)])
    for k, (t, row) in enumerate(zip(s.times(), s.positions)):
        w.writerow([k, repr(float(t))] + [repr(float(v)) for v in row])
