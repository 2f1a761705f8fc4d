"""``liqsched`` command line.

Exit codes: 0 success, 2 invalid input, 3 numerically degenerate model.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import presets
from .cost_engine import simulate_path, write_path_csv
from .errors import NoInteriorMinimum, NumericalError, ValidationError
from .market_model import RiskLevel, load_params
from .montecarlo import McConfig, replication_noise, run_experiment, run_samples, write_samples_csv
from .optimizer import optimal_steps_discrete, optimal_time_closed
from .schedule import linear_schedule, write_schedule_csv
from .sweep import emit_csv, emit_svg, load_spec, run_sweep

OUT_DIR_ENV = "LIQSCHED_OUT_DIR"
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("liqsched")


def _load(args) -> tuple:
    params, risk = load_params(args.params)
    if getattr(args, "p", None) is not None:
        risk = RiskLevel(args.p)
    return params, risk


def cmd_optimal_time(args) -> int:
    params, risk = _load(args)
    h = optimal_time_closed(params, risk)
    print(f"p: {risk.p}")
    print(f"z_p: {risk.z_p!r}")
    if h.zero_horizon:
        print("t_star: 0.0  (no temporary impact: liquidate immediately)")
        return 0
    print(f"t_star: {h.t_star!r}")
    print(f"objective_continuous: {h.objective!r}")
    if args.tau is not None:
        try:
            d = optimal_steps_discrete(params, args.tau, risk)
        except NoInteriorMinimum as exc:
            log.warning("%s", exc)
            d = exc.horizon
        print(f"tau: {args.tau!r}")
        print(f"m_real: {d.m_real!r}")
        print(f"m_star: {d.m_star}")
        print(f"t_discrete: {d.t_star!r}")
        print(f"objective: {d.objective!r}")
    return 0


def cmd_schedule(args) -> int:
    params, risk = _load(args)
    tau = args.tau
    if tau is None:
        h = optimal_time_closed(params, risk)
        if h.zero_horizon:
            raise NumericalError("optimal horizon is zero; pass --tau explicitly")
        tau = h.t_star / args.steps
    s = linear_schedule(params.x0, args.steps, tau)
    if args.out:
        with open(args.out, "w", newline="") as f:
            write_schedule_csv(s, f)
    else:
        write_schedule_csv(s, sys.stdout)
    return 0


def cmd_simulate(args) -> int:
    params, risk = _load(args)
    cfg = McConfig(n_reps=args.reps, seed=args.seed, m_steps=args.steps, risk=risk, workers=args.workers)
    summary = run_experiment(params, cfg, t_horizon=args.horizon)
    text = json.dumps(summary.to_dict(), indent=2) + "\n"
    if args.out_json:
        Path(args.out_json).write_text(text)
    else:
        sys.stdout.write(text)
    if args.out_csv:
        _, smp = run_samples(params, cfg, t_horizon=args.horizon)
        with open(args.out_csv, "w", newline="") as f:
            write_samples_csv(smp, f)
    if args.path_csv:
        if not 0 <= args.path_rep < cfg.n_reps:
            raise ValidationError(f"--path-rep must lie in 0..{cfg.n_reps - 1}")
        s = linear_schedule(params.x0, cfg.m_steps, summary.t_horizon / cfg.m_steps)
        path = simulate_path(params, s, replication_noise(cfg.seed, args.path_rep, cfg.m_steps, params.n))
        with open(args.path_csv, "w", newline="") as f:
            write_path_csv(path, f)
    return 0


def cmd_sweep(args) -> int:
    spec = load_spec(args.spec)
    spec = spec.with_mc(seed=args.seed, n_reps=args.reps, m_steps=args.steps)
    result = run_sweep(spec)
    emit_csv(result, args.out_csv)
    if args.out_svg:
        kind = args.kind or ("surface" if len(spec.axes) == 2 else "line")
        emit_svg(result, args.out_svg, kind, metric=args.metric, x=args.x)
    return 0


def cmd_figures(args) -> int:
    names = []
    for name in args.names:
        if name == "all":
            names.extend(n for fig in presets.FIGURES.values() for n in fig)
        elif name in presets.FIGURES:
            names.extend(presets.FIGURES[name])
        elif name in presets.PRESETS:
            names.append(name)
        else:
            raise ValidationError(f"unknown figure {name!r}; choose from {', '.join(presets.FIGURES)} or all")
    out_dir = Path(args.out_dir or os.environ.get(OUT_DIR_ENV) or "figures")
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in dict.fromkeys(names):
        spec = presets.PRESETS[name].with_mc(seed=args.seed, n_reps=args.reps, m_steps=args.steps)
        log.info("running %s (%s)", name, spec.description)
        result = run_sweep(spec)
        emit_csv(result, out_dir / f"{name}.csv")
        if not args.no_svg:
            for plot in spec.plots:
                suffix = plot.metric if plot.x is None else f"{plot.metric}_vs_{plot.x}"
                emit_svg(result, out_dir / f"{name}_{suffix}.svg", plot.kind, plot.metric, plot.x)
        print(out_dir / f"{name}.csv")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="liqsched", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimal-time", help="closed-form horizon T*, optionally M* for a step length")
    p.add_argument("params", help="market parameter JSON")
    p.add_argument("--p", type=float, help="confidence level (default: file value or 0.99)")
    p.add_argument("--tau", type=float, help="step length for the discrete optimum")
    p.set_defaults(func=cmd_optimal_time)

    p = sub.add_parser("schedule", help="linear schedule as CSV (k, t, x1..xN)")
    p.add_argument("params")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--tau", type=float, help="step length (default: T*/steps)")
    p.add_argument("--p", type=float)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("simulate", help="Monte Carlo cost summary along the optimal horizon")
    p.add_argument("params")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=McConfig().seed)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--p", type=float)
    p.add_argument("--horizon", type=float, help="override T* with a fixed horizon")
    p.add_argument("--workers", type=int, default=1, help="threads used to draw replication noise")
    p.add_argument("--out-json", help="summary JSON path (default: stdout)")
    p.add_argument("--out-csv", help="per-replication CSV (rep, C, C1..CN, CPw)")
    p.add_argument("--path-csv", help="dump one replication's path (k, xi1..xiN, S1..SN)")
    p.add_argument("--path-rep", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a sweep spec JSON")
    p.add_argument("spec")
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-svg")
    p.add_argument("--kind", choices=["surface", "line"])
    p.add_argument("--metric", help="column to plot (default: last metric)")
    p.add_argument("--x", help="x column for line plots (default: the axis)")
    p.add_argument("--seed", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--steps", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figures", help="regenerate preset sweeps (fig1..fig6, or all)")
    p.add_argument("names", nargs="+")
    p.add_argument("--seed", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--out-dir", help=f"output directory (default: ${OUT_DIR_ENV} or ./figures)")
    p.add_argument("--no-svg", action="store_true")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
