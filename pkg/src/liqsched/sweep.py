"""Parameter-sweep harness: grids over market parameters, CSV and SVG output."""

from __future__ import annotations

import csv
import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import svg
from .errors import NumericalError, UnsupportedKind, ValidationError
from .market_model import (
    MarketParams,
    RiskLevel,
    cholesky,
    correlation_paper,
    correlation_standard,
    covariance,
    params_from_json,
)
from .montecarlo import McConfig, McSummary, run_experiment
from .optimizer import optimal_time_closed

log = logging.getLogger(__name__)

_VECTOR_FIELDS = ("s0", "x0", "eta")
_MATRIX_FIELDS = ("sigma", "gamma")


@dataclass(frozen=True)
class Axis:
    path: str
    start: float
    step: float
    count: int

    def values(self) -> list[float]:
        return [self.start + i * self.step for i in range(self.count)]


@dataclass(frozen=True)
class Derived:
    """``path`` = sqrt(total^2 - value(of)^2), e.g. holding an asset's volatility fixed."""

    path: str
    norm_complement_of: str
    total: float

    def value(self, params: MarketParams) -> float:
        other = get_value(params, self.norm_complement_of)
        rem = self.total**2 - other**2
        if rem < 0:
            raise ValidationError(f"{self.norm_complement_of} = {other} exceeds total {self.total}")
        return math.sqrt(rem)


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    metric: str
    x: str | None = None


@dataclass(frozen=True)
class SweepSpec:
    name: str
    params: MarketParams
    risk: RiskLevel
    mc: McConfig
    axes: tuple[Axis, ...]
    metrics: tuple[str, ...]
    derived: tuple[Derived, ...] = ()
    plots: tuple[PlotSpec, ...] = ()
    description: str = ""
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 1 <= len(self.axes) <= 2:
            raise ValidationError(f"a sweep takes one or two axes, got {len(self.axes)}")
        for ax in self.axes:
            if ax.count < 1:
                raise ValidationError(f"axis {ax.path}: count must be >= 1")
            check_path(self.params, ax.path)
        for d in self.derived:
            check_path(self.params, d.path)
            check_path(self.params, d.norm_complement_of)
        for m in self.metrics:
            if m not in METRICS:
                raise ValidationError(f"unknown metric {m!r}; choose from {', '.join(METRICS)}")
        columns = set(self.columns)
        for p in self.plots:
            if p.kind not in ("surface", "line"):
                raise UnsupportedKind(f"unknown plot kind {p.kind!r}")
            if p.metric not in columns or (p.x is not None and p.x not in columns):
                raise ValidationError(f"plot refers to a column not produced by the sweep: {p}")

    @property
    def axis_columns(self) -> list[str]:
        return [column_name(a.path) for a in self.axes] + [column_name(d.path) for d in self.derived]

    @property
    def columns(self) -> list[str]:
        return self.axis_columns + list(self.metrics)

    def with_mc(self, **changes: Any) -> "SweepSpec":
        mc = {k: getattr(self.mc, k) for k in ("n_reps", "seed", "m_steps", "risk", "workers")}
        mc.update({k: v for k, v in changes.items() if v is not None})
        return _replace(self, mc=McConfig(**mc))


def _replace(spec: SweepSpec, **changes: Any) -> SweepSpec:
    kw = {f: getattr(spec, f) for f in spec.__dataclass_fields__}
    kw.update(changes)
    return SweepSpec(**kw)


@dataclass(frozen=True)
class SweepRow:
    index: tuple[int, ...]
    coords: dict[str, float]
    metrics: dict[str, float]
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: list[SweepRow]

    def column(self, name: str) -> np.ndarray:
        out = []
        for r in self.rows:
            v = r.coords.get(name, r.metrics.get(name, math.nan))
            out.append(v)
        return np.array(out, dtype=float)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.count for a in self.spec.axes)


# -- parameter paths --------------------------------------------------------


def _parse_path(path: str) -> tuple[str, tuple[int, ...]]:
    parts = path.split(".")
    name, idx = parts[0], parts[1:]
    try:
        indices = tuple(int(i) for i in idx)
    except ValueError:
        raise ValidationError(f"bad parameter path {path!r}") from None
    if name in _VECTOR_FIELDS and len(indices) == 1:
        return name, indices
    if name in _MATRIX_FIELDS and len(indices) == 2:
        return name, indices
    raise ValidationError(
        f"bad parameter path {path!r}: use e.g. eta.1, x0.2, sigma.1.2 or gamma.2.1 (1-based)"
    )


def check_path(params: MarketParams, path: str) -> None:
    _, idx = _parse_path(path)
    if any(not 1 <= i <= params.n for i in idx):
        raise ValidationError(f"parameter path {path!r} is out of range for N = {params.n}")


def column_name(path: str) -> str:
    return path.replace(".", "")


def get_value(params: MarketParams, path: str) -> float:
    name, idx = _parse_path(path)
    return float(getattr(params, name)[tuple(i - 1 for i in idx)])


def set_value(params: MarketParams, path: str, value: float) -> MarketParams:
    name, idx = _parse_path(path)
    arr = np.array(getattr(params, name))
    arr[tuple(i - 1 for i in idx)] = value
    return params.replace(**{name: arr})


# -- metrics ----------------------------------------------------------------


def _absdiff(params: MarketParams) -> float:
    return abs(float(params.sigma[0, 0] - params.sigma[0, 1]))


_ANALYTIC: dict[str, Callable[[MarketParams, RiskLevel], float]] = {
    "t_star": lambda p, r: optimal_time_closed(p, r).t_star,
    "rho_paper": lambda p, r: correlation_paper(p),
    "rho_standard": lambda p, r: correlation_standard(p),
    "absdiff": lambda p, r: _absdiff(p),
}

_MONTE_CARLO: dict[str, Callable[[McSummary], float]] = {
    "mcp": lambda s: s.mean_cost_rate,
    "mean_cost": lambda s: s.mean_cost,
    "std_cost": lambda s: s.std_cost,
    "expected_cost": lambda s: s.expected_cost,
    "cp_min": lambda s: s.cost_rate_min,
    "cp_max": lambda s: s.cost_rate_max,
    "cp_std": lambda s: s.cost_rate_std,
}

METRICS = tuple(_ANALYTIC) + tuple(_MONTE_CARLO)


# -- running ----------------------------------------------------------------


def grid_params(spec: SweepSpec, index: tuple[int, ...]) -> tuple[MarketParams, dict[str, float]]:
    params = spec.params
    coords: dict[str, float] = {}
    for ax, i in zip(spec.axes, index):
        v = ax.values()[i]
        params = set_value(params, ax.path, v)
        coords[column_name(ax.path)] = v
    for d in spec.derived:
        v = d.value(params)
        params = set_value(params, d.path, v)
        coords[column_name(d.path)] = v
    return params, coords


def run_point(spec: SweepSpec, index: tuple[int, ...]) -> SweepRow:
    params, coords = grid_params(spec, index)
    try:
        cholesky(covariance(params))
        values = {}
        summary = None
        for m in spec.metrics:
            if m in _ANALYTIC:
                values[m] = _ANALYTIC[m](params, spec.risk)
            else:
                if summary is None:
                    summary = run_experiment(params, spec.mc)
                values[m] = _MONTE_CARLO[m](summary)
    except NumericalError as exc:
        log.warning("%s: grid point %s failed: %s", spec.name, index, exc)
        return SweepRow(index, coords, {m: math.nan for m in spec.metrics}, f"{type(exc).__name__}: {exc}")
    return SweepRow(index, coords, values)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every grid point, first axis outermost."""
    grid = itertools.product(*(range(a.count) for a in spec.axes))
    return SweepResult(spec, [run_point(spec, idx) for idx in grid])


# -- output -----------------------------------------------------------------


def _fmt(v: float) -> str:
    return "" if math.isnan(v) else repr(float(v))


def emit_csv(result: SweepResult, path: str | Path) -> None:
    spec = result.spec
    any_failed = any(r.error for r in result.rows)
    header = spec.columns + (["error"] if any_failed else [])
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in result.rows:
            line = [_fmt(r.coords[c]) for c in spec.axis_columns]
            line += [_fmt(r.metrics[m]) for m in spec.metrics]
            if any_failed:
                line.append(r.error or "")
            w.writerow(line)


def emit_svg(
    result: SweepResult, path: str | Path, kind: str, metric: str | None = None, x: str | None = None
) -> None:
    """Heatmap (``surface``, two axes) or polyline (``line``, one axis) of a column."""
    spec = result.spec
    metric = metric or spec.metrics[-1]
    if kind == "surface":
        if len(spec.axes) != 2:
            raise UnsupportedKind("surface plots need a two-axis sweep")
        ax0, ax1 = spec.axes
        z = result.column(metric).reshape(ax0.count, ax1.count)
        doc = svg.heatmap(
            z,
            row_values=ax0.values(),
            col_values=ax1.values(),
            row_label=column_name(ax0.path),
            col_label=column_name(ax1.path),
            title=f"{spec.name}: {metric}",
        )
    elif kind == "line":
        if len(spec.axes) != 1:
            raise UnsupportedKind("line plots need a one-axis sweep")
        x = x or column_name(spec.axes[0].path)
        doc = svg.line(
            result.column(x), result.column(metric), x_label=x, y_label=metric, title=f"{spec.name}: {metric}"
        )
    else:
        raise UnsupportedKind(f"unknown plot kind {kind!r}; use 'surface' or 'line'")
    Path(path).write_text(doc)


# -- JSON -------------------------------------------------------------------


def spec_from_json(data: dict[str, Any]) -> SweepSpec:
    """Build a SweepSpec from its JSON document (see README for the schema)."""
    try:
        params, risk = params_from_json(data["base"])
        mc_data = data.get("mc", {})
        mc = McConfig(
            n_reps=int(mc_data.get("n_reps", 1000)),
            seed=int(mc_data.get("seed", McConfig().seed)),
            m_steps=int(mc_data.get("m_steps", 100)),
            risk=risk,
        )
        axes = tuple(
            Axis(a["path"], float(a["start"]), float(a["step"]), int(a["count"])) for a in data["axes"]
        )
        derived = tuple(
            Derived(d["path"], d["norm_complement_of"], float(d["total"])) for d in data.get("derived", [])
        )
        plots = tuple(PlotSpec(p["kind"], p["metric"], p.get("x")) for p in data.get("plots", []))
        return SweepSpec(
            name=data.get("name", "sweep"),
            params=params,
            risk=risk,
            mc=mc,
            axes=axes,
            metrics=tuple(data.get("metrics", [])),
            derived=derived,
            plots=plots,
            description=data.get("description", ""),
            meta=dict(data.get("meta", {})),
        )
    except KeyError as exc:
        raise ValidationError(f"sweep spec missing key {exc}") from None
    except (TypeError, AttributeError) as exc:
        raise ValidationError(f"malformed sweep spec: {exc}") from None


def load_spec(path: str | Path) -> SweepSpec:
    with open(path) as f:
        return spec_from_json(json.load(f))


def spec_to_json(spec: SweepSpec) -> dict[str, Any]:
    base = spec.params.to_dict()
    base["p"] = spec.risk.p
    return {
        "name": spec.name,
        "description": spec.description,
        "base": base,
        "mc": {"n_reps": spec.mc.n_reps, "seed": spec.mc.seed, "m_steps": spec.mc.m_steps},
        "axes": [{"path": a.path, "start": a.start, "step": a.step, "count": a.count} for a in spec.axes],
        "derived": [
            {"path": d.path, "norm_complement_of": d.norm_complement_of, "total": d.total} for d in spec.derived
        ],
        "metrics": list(spec.metrics),
        "plots": [{"kind": p.kind, "metric": p.metric, "x": p.x} for p in spec.plots],
        "meta": spec.meta,
    }
