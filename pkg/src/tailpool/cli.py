"""Command-line front end for batch experiments.

Commands: ``simulate`` (Monte Carlo tipping-point run), ``grid``
(robustness sweep over post-shock tail index and market size), ``pool``
(apply one pooling rule to an external CSV panel), ``welfare``
(cost-benefit curve across market sizes), and ``linear-ts`` (lead-follower
weight study on the coupled time-series trio).

Output directory resolution: --out flag, else the TAILPOOL_OUT environment
variable, else ./out.  Exit code 0 iff every requested output was written;
otherwise a single machine-parsable ``error: <kind>: <message>`` line goes
to stderr (exit 2 for usage/config problems, 1 for runtime failures).
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .benchmarks import PoolingMethod
from .config import (
    ConfigError,
    parse_linear_ts_config,
    parse_scenario_config,
    parse_welfare_config,
)
from .panel_io import PanelFormatError, load_panel_csv
from .reports import (
    RunManifest,
    write_grid_summary,
    write_linear_ts_weights,
    write_panel_weights,
    write_pooled_series,
    write_report,
)
from .simulation import (
    DEFAULT_METHODS,
    PANEL_METHODS,
    ScenarioConfig,
    _pool_panel,
    linear_ts_run,
    run_monte_carlo,
)
from .welfare import run_welfare_pipeline

__all__ = ["main"]


class CliError(Exception):
    """Usage error surfaced as a single stderr line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise CliError(message)


def _resolve_out(value: str | None) -> Path:
    return Path(value or os.environ.get("TAILPOOL_OUT") or "out")


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise CliError(f"expected a comma-separated list of numbers, got {text!r} ({exc})")


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise CliError(f"expected a comma-separated list of integers, got {text!r} ({exc})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tailpool", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tailpool {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="Monte Carlo tipping-point run")
    simulate.add_argument("--config", required=True, help="scenario key=value file")
    simulate.add_argument("--seed", type=int, default=None, help="override the config seed")
    simulate.add_argument("--reps", type=int, default=200, help="replication count")
    simulate.add_argument("--out", default=None, help="output directory")
    simulate.add_argument("--svg", action="store_true", help="also emit SVG charts")
    simulate.add_argument("--threads", type=int, default=1, help="worker threads over replications")

    grid = sub.add_parser("grid", help="robustness sweep over alpha_post x m")
    grid.add_argument("--alphas", default="0.5,1,1.5,2,3", help="post-shock tail indices")
    grid.add_argument("--ms", default="2,5,10,20", help="expert counts")
    grid.add_argument("--reps", type=int, default=500)
    grid.add_argument("--config", default=None, help="optional base scenario file")
    grid.add_argument("--seed", type=int, default=None)
    grid.add_argument("--out", default=None)
    grid.add_argument("--threads", type=int, default=1)

    pool = sub.add_parser("pool", help="apply one pooling rule to a CSV panel")
    pool.add_argument("--panel", required=True, help="estimate panel CSV")
    pool.add_argument("--method", required=True, help="pooling rule kind")
    pool.add_argument("--significance", type=float, default=0.05)
    pool.add_argument("--out", default=None)

    welfare = sub.add_parser("welfare", help="pool-vs-audit cost-benefit curve")
    welfare.add_argument("--config", required=True, help="welfare key=value file")
    welfare.add_argument("--seed", type=int, default=None)
    welfare.add_argument("--out", default=None)
    welfare.add_argument("--svg", action="store_true")

    lts = sub.add_parser("linear-ts", help="lead-follower weight study")
    lts.add_argument("--config", required=True, help="linear time-series key=value file")
    lts.add_argument("--reps", type=int, default=500)
    lts.add_argument("--seed", type=int, default=None)
    lts.add_argument("--out", default=None)
    return parser


def _cmd_simulate(args) -> list[Path]:
    cfg = parse_scenario_config(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.reps < 2:
        raise CliError("--reps must be at least 2")
    report = run_monte_carlo(
        cfg, args.reps, methods=DEFAULT_METHODS, threads=max(1, args.threads), collect_weights=True
    )
    manifest = RunManifest(
        command="simulate",
        output_dir=_resolve_out(args.out),
        config_path=Path(args.config),
        seed=args.seed,
        svg=args.svg,
    )
    return write_report(report, manifest)


def _cmd_grid(args) -> list[Path]:
    alphas = _float_list(args.alphas)
    sizes = _int_list(args.ms)
    if not alphas or not sizes:
        raise CliError("grid needs at least one alpha and one m")
    base = parse_scenario_config(args.config) if args.config else None
    seed = args.seed if args.seed is not None else (base.seed if base else 0)
    rows = []
    for ai, alpha in enumerate(alphas):
        for mi, m in enumerate(sizes):
            cell_seed = int(
                np.random.SeedSequence((seed & 0xFFFFFFFFFFFFFFFF, ai, mi)).generate_state(1)[0]
            )
            if base is not None:
                cfg = dataclasses.replace(base, m=m, alpha_post=alpha, seed=cell_seed)
            else:
                cfg = ScenarioConfig(m=m, alpha_post=alpha, horizon=13, seed=cell_seed)
            report = run_monte_carlo(cfg, args.reps, threads=max(1, args.threads))
            for method, (mean, median, std) in report.stability.items():
                rows.append((alpha, m, method, mean, median, std))
    out = _resolve_out(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return [write_grid_summary(rows, out / "grid_summary.csv")]


def _cmd_pool(args) -> list[Path]:
    method = PoolingMethod(kind=args.method, significance=args.significance)
    if method.kind == "vincentization":
        raise CliError("vincentization needs posterior distributions; CSV panels carry point estimates")
    panel = load_panel_csv(args.panel)
    first, pooled, weights, _ = _pool_panel(
        np.array(panel.estimates), panel.period_step, (method.kind,)
    )
    out = _resolve_out(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = [write_pooled_series(pooled, out / "pooled.csv")]
    if method.kind in weights:
        written.append(write_panel_weights(weights, out / "weights.csv"))
    return written


def _cmd_welfare(args) -> list[Path]:
    cfg, pipeline = parse_welfare_config(args.config)
    if args.seed is not None:
        pipeline["seed"] = args.seed
    curve = run_welfare_pipeline(cfg, **pipeline)
    manifest = RunManifest(
        command="welfare",
        output_dir=_resolve_out(args.out),
        config_path=Path(args.config),
        seed=args.seed,
        svg=args.svg,
    )
    return write_report(curve, manifest)


def _cmd_linear_ts(args) -> list[Path]:
    cfg = parse_linear_ts_config(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.reps < 1:
        raise CliError("--reps must be at least 1")
    methods = ("pioneer_angle", "granger", "lagged_correlation")
    names = ("x", "y", "z")
    totals = {method: np.zeros(3) for method in methods}
    counts = {method: 0 for method in methods}
    sample = None
    for rep in range(args.reps):
        run = linear_ts_run(cfg, replication=rep, methods=methods)
        if rep == 0:
            sample = run
        for method in methods:
            w = run.weights[method]
            finite = np.all(np.isfinite(w), axis=0)
            if np.any(finite):
                totals[method] += w[:, finite].mean(axis=1)
                counts[method] += 1
    avg = {
        method: {name: totals[method][k] / max(counts[method], 1) for k, name in enumerate(names)}
        for method in methods
    }
    out = _resolve_out(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = [write_linear_ts_weights(avg, out / "linear_ts_weights.csv")]
    series = {name: sample.estimates[k] for k, name in enumerate(names)}
    written.append(write_pooled_series(series, out / "linear_ts_sample.csv"))
    return written


_HANDLERS = {
    "simulate": _cmd_simulate,
    "grid": _cmd_grid,
    "pool": _cmd_pool,
    "welfare": _cmd_welfare,
    "linear-ts": _cmd_linear_ts,
}


def _fail(kind: str, message: str, code: int) -> int:
    flat = " ".join(str(message).split())
    print(f"error: {kind}: {flat}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except CliError as exc:
        return _fail("usage", str(exc), 2)
    try:
        written = _HANDLERS[args.command](args)
    except CliError as exc:
        return _fail("usage", str(exc), 2)
    except ConfigError as exc:
        return _fail("config", str(exc), 2)
    except PanelFormatError as exc:
        return _fail("panel", str(exc), 2)
    except OSError as exc:
        return _fail("io", str(exc), 1)
    except ValueError as exc:
        return _fail("run", str(exc), 1)
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
