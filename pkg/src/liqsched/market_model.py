"""Static market description: prices, positions, volatility and impact matrices.

Assets are numbered from 1 in every public function that takes an asset
index, matching the superscripts used for the two-asset experiments
(``sigma^{12}`` is row 1, column 2).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from statistics import NormalDist
from typing import Any

import numpy as np

from .errors import (
    DegenerateVolatility,
    DimensionError,
    NotPositiveDefinite,
    ValidationError,
)

DEFAULT_P = 0.99
CHOLESKY_RTOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MarketParams:
    """The (S0, x0, sigma, gamma, eta) tuple for N assets.

    ``eta`` holds the diagonal of the temporary impact matrix. ``gamma`` may
    be asymmetric; only its symmetric part enters any quadratic form.
    """

    s0: np.ndarray
    x0: np.ndarray
    sigma: np.ndarray
    gamma: np.ndarray
    eta: np.ndarray

    def __post_init__(self) -> None:
        s0 = np.atleast_1d(np.asarray(self.s0, dtype=float))
        x0 = np.atleast_1d(np.asarray(self.x0, dtype=float))
        eta = np.atleast_1d(np.asarray(self.eta, dtype=float))
        sigma = np.asarray(self.sigma, dtype=float)
        gamma = np.asarray(self.gamma, dtype=float)
        n = s0.shape[0]
        if n < 1 or s0.ndim != 1:
            raise DimensionError("s0 must be a non-empty vector")
        for name, v in (("x0", x0), ("eta", eta)):
            if v.shape != (n,):
                raise DimensionError(f"{name} has shape {v.shape}, expected ({n},)")
        for name, m in (("sigma", sigma), ("gamma", gamma)):
            if m.ndim == 0 and n == 1:
                m = m.reshape(1, 1)
            if m.shape != (n, n):
                raise DimensionError(f"{name} has shape {m.shape}, expected ({n}, {n})")
            if name == "sigma":
                sigma = m
            else:
                gamma = m
        for name, a in (("s0", s0), ("x0", x0), ("sigma", sigma), ("gamma", gamma), ("eta", eta)):
            if not np.all(np.isfinite(a)):
                raise ValidationError(f"{name} contains non-finite entries")
        if np.any(eta < 0):
            raise ValidationError("eta entries must be non-negative")
        object.__setattr__(self, "s0", _frozen(s0))
        object.__setattr__(self, "x0", _frozen(x0))
        object.__setattr__(self, "sigma", _frozen(sigma))
        object.__setattr__(self, "gamma", _frozen(gamma))
        object.__setattr__(self, "eta", _frozen(eta))

    @property
    def n(self) -> int:
        return self.s0.shape[0]

    @property
    def eta_matrix(self) -> np.ndarray:
        return np.diag(self.eta)

    @property
    def gamma_sym(self) -> np.ndarray:
        return 0.5 * (self.gamma + self.gamma.T)

    @property
    def notional(self) -> float:
        """Initial mark-to-market value x0'S0."""
        return float(self.x0 @ self.s0)

    def replace(self, **changes: Any) -> "MarketParams":
        fields = {k: getattr(self, k) for k in ("s0", "x0", "sigma", "gamma", "eta")}
        fields.update(changes)
        return MarketParams(**fields)

    def to_dict(self) -> dict[str, Any]:
        return {
            "s0": self.s0.tolist(),
            "x0": self.x0.tolist(),
            "sigma": self.sigma.tolist(),
            "gamma": self.gamma.tolist(),
            "eta": self.eta.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MarketParams":
        missing = [k for k in ("s0", "x0", "sigma", "gamma", "eta") if k not in data]
        if missing:
            raise ValidationError(f"market parameters missing keys: {', '.join(missing)}")
        try:
            return cls(
                s0=np.asarray(data["s0"], dtype=float),
                x0=np.asarray(data["x0"], dtype=float),
                sigma=np.asarray(data["sigma"], dtype=float),
                gamma=np.asarray(data["gamma"], dtype=float),
                eta=np.asarray(data["eta"], dtype=float),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            # ragged nested lists end up here
            raise DimensionError(f"malformed market parameters: {exc}") from exc


@dataclass(frozen=True)
class RiskLevel:
    """Confidence level p and its standard-normal quantile z_p."""

    p: float = DEFAULT_P
    z_p: float = field(init=False)

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise ValidationError(f"confidence level must lie in (0, 1), got {self.p}")
        object.__setattr__(self, "z_p", NormalDist().inv_cdf(self.p))


def load_params(path: str | Path) -> tuple[MarketParams, RiskLevel]:
    """Read a market-parameter JSON document; ``p`` defaults to 0.99."""
    with open(path) as f:
        data = json.load(f)
    return params_from_json(data)


def params_from_json(data: dict[str, Any]) -> tuple[MarketParams, RiskLevel]:
    if not isinstance(data, dict):
        raise ValidationError("market parameters must be a JSON object")
    return MarketParams.from_dict(data), RiskLevel(float(data.get("p", DEFAULT_P)))


def dump_params(params: MarketParams, risk: RiskLevel | None = None) -> dict[str, Any]:
    out = params.to_dict()
    if risk is not None:
        out["p"] = risk.p
    return out


def covariance(params: MarketParams) -> np.ndarray:
    """sigma sigma', each off-diagonal entry computed once and mirrored."""
    s = params.sigma
    n = params.n
    cov = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            cov[i, j] = cov[j, i] = float(np.dot(s[i], s[j]))
    return cov


def cholesky(cov: np.ndarray) -> np.ndarray:
    """Lower-triangular L with L L' = cov.

    Raises NotPositiveDefinite when a pivot falls to or below
    1e-12 times the largest diagonal entry.
    """
    a = np.asarray(cov, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"covariance must be square, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=1e-12, atol=0.0):
        raise ValidationError("covariance must be symmetric")
    n = a.shape[0]
    tol = CHOLESKY_RTOL * max(float(np.max(np.diag(a))), 0.0)
    L = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - float(np.dot(L[j, :j], L[j, :j]))
        if pivot <= tol:
            raise NotPositiveDefinite(f"pivot {j + 1} is {pivot:.3e}, tolerance {tol:.3e}")
        L[j, j] = math.sqrt(pivot)
        for i in range(j + 1, n):
            L[i, j] = (a[i, j] - float(np.dot(L[i, :j], L[j, :j]))) / L[j, j]
    return L


def asset_volatility(params: MarketParams, i: int) -> float:
    """Euclidean norm of row ``i`` (1-based) of sigma."""
    if not 1 <= i <= params.n:
        raise IndexError(f"asset index {i} outside 1..{params.n}")
    return math.sqrt(float(np.dot(params.sigma[i - 1], params.sigma[i - 1])))


def _two_asset_vols(params: MarketParams) -> tuple[float, float]:
    if params.n != 2:
        raise DimensionError(f"two-asset formula needs N = 2, got N = {params.n}")
    v1, v2 = asset_volatility(params, 1), asset_volatility(params, 2)
    if v1 * v2 == 0.0:
        raise DegenerateVolatility("an asset has zero volatility")
    return v1, v2


def correlation_paper(params: MarketParams) -> float:
    """(s11 s22 + s12 s21) / (s1 s2), the cross-paired two-asset coefficient.

    Not the covariance correlation: a diagonal sigma gives 1.0 here.
    """
    v1, v2 = _two_asset_vols(params)
    s = params.sigma
    return float((s[0, 0] * s[1, 1] + s[0, 1] * s[1, 0]) / (v1 * v2))


def correlation_standard(params: MarketParams) -> float:
    """Covariance-based correlation Sigma_12 / sqrt(Sigma_11 Sigma_22)."""
    v1, v2 = _two_asset_vols(params)
    s = params.sigma
    return float((s[0, 0] * s[1, 0] + s[0, 1] * s[1, 1]) / (v1 * v2))
