"""Deterministic CSV (and optional SVG) emission of run results.

Numbers are serialised with 12 significant digits; row order is fixed
(method, then replication, then period, then expert), so identical runs
produce byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .metrics import MetricsReport
from .simulation import SimulationRun
from .svgchart import line_chart
from .welfare import WelfareCurve

__all__ = [
    "RunManifest",
    "format_number",
    "write_report",
    "write_rmse_by_period",
    "write_stability",
    "write_weights",
    "write_welfare_curve",
    "write_pooled_series",
]


@dataclass(frozen=True)
class RunManifest:
    """What a CLI invocation asked for: one command, its config, and output wiring."""

    command: str
    output_dir: Path
    config_path: Path | None = None
    seed: int | None = None
    svg: bool = False

    def __post_init__(self) -> None:
        if self.command not in ("simulate", "grid", "pool", "welfare", "linear-ts"):
            raise ValueError(f"unknown command {self.command!r}")


def format_number(value: float) -> str:
    """12 significant digits; nan/inf spelled out."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.12g}"


def _write_rows(path: Path, header: list[str], rows: list[list[str]]) -> Path:
    with path.open("w", newline="\n", encoding="utf-8") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(row) + "\n")
    return path


def write_rmse_by_period(report: MetricsReport, path: str | Path) -> Path:
    rows = []
    for name in sorted(report.methods):
        j = report.method_index(name)
        for t in range(report.horizon):
            rows.append(
                [
                    name,
                    str(t),
                    format_number(report.rmse_by_period[j, t]),
                    format_number(report.mc_se[j, t]),
                ]
            )
    return _write_rows(Path(path), ["method", "period", "rmse", "mc_se"], rows)


def write_stability(report: MetricsReport, path: str | Path) -> Path:
    rows = []
    for name in sorted(report.methods):
        stats = report.stability.get(name)
        cells = (
            [format_number(v) for v in stats] if stats is not None else ["nan", "nan", "nan"]
        )
        rows.append([name] + cells)
    return _write_rows(Path(path), ["method", "mean", "median", "std"], rows)


def write_weights(report: MetricsReport, path: str | Path) -> Path:
    """Per-replication weight trajectories for every weight-producing method."""
    rows = []
    weights = report.weights_reps or {}
    for name in sorted(weights):
        cube = weights[name]  # (replications, experts, periods)
        reps, m, horizon = cube.shape
        for r in range(reps):
            for t in range(horizon):
                for i in range(m):
                    rows.append([str(r), name, str(i), str(t), format_number(cube[r, i, t])])
    rows.sort(key=lambda row: (row[1], int(row[0]), int(row[3]), int(row[2])))
    return _write_rows(
        Path(path), ["replication", "method", "expert", "period", "weight"], rows
    )


def write_welfare_curve(curve: WelfareCurve, path: str | Path) -> Path:
    rows = []
    for point in curve.points:
        rows.append(
            [
                str(point.m),
                format_number(point.sigma_ratio),
                format_number(point.fitted_ratio),
                format_number(point.net_benefit_no_lambda),
                format_number(point.net_benefit_lambda),
                format_number(point.net_benefit_no_lambda_norm),
                format_number(point.net_benefit_lambda_norm),
                point.decision,
            ]
        )
    return _write_rows(
        Path(path),
        [
            "m",
            "ratio",
            "fit",
            "net_benefit_no_lambda",
            "net_benefit_lambda",
            "net_benefit_no_lambda_norm",
            "net_benefit_lambda_norm",
            "decision",
        ],
        rows,
    )


def write_pooled_series(pooled: dict[str, np.ndarray], path: str | Path) -> Path:
    rows = []
    for name in sorted(pooled):
        series = np.asarray(pooled[name], dtype=float)
        for t in range(series.size):
            rows.append([name, str(t), format_number(series[t])])
    return _write_rows(Path(path), ["method", "period", "value"], rows)


def write_panel_weights(weights: dict[str, np.ndarray], path: str | Path) -> Path:
    """Weights of a single-panel run, in the replication-keyed layout (replication 0)."""
    rows = []
    for name in sorted(weights):
        matrix = np.asarray(weights[name], dtype=float)
        m, horizon = matrix.shape
        for t in range(horizon):
            for i in range(m):
                rows.append(["0", name, str(i), str(t), format_number(matrix[i, t])])
    return _write_rows(
        Path(path), ["replication", "method", "expert", "period", "weight"], rows
    )


def write_grid_summary(
    rows: list[tuple[float, int, str, float, float, float]], path: str | Path
) -> Path:
    """Robustness-grid stability table: one row per (alpha_post, m, method)."""
    formatted = [
        [format_number(alpha), str(m), method, format_number(mean), format_number(median), format_number(std)]
        for alpha, m, method, mean, median, std in sorted(rows, key=lambda r: (r[0], r[1], r[2]))
    ]
    return _write_rows(
        Path(path),
        ["alpha_post", "m", "method", "rmse_mean", "rmse_median", "rmse_std"],
        formatted,
    )


def write_linear_ts_weights(
    avg_weights: dict[str, dict[str, float]], path: str | Path
) -> Path:
    """Replication-averaged weight per method and series for the coupled-trio study."""
    rows = []
    for method in sorted(avg_weights):
        for series_name in sorted(avg_weights[method]):
            rows.append([method, series_name, format_number(avg_weights[method][series_name])])
    return _write_rows(Path(path), ["method", "series", "avg_weight"], rows)


def _svg_rmse(report: MetricsReport, path: Path) -> Path:
    periods = list(range(report.horizon))
    series = {
        name: report.rmse_by_period[report.method_index(name)].tolist()
        for name in sorted(report.methods)
    }
    return line_chart(periods, series, "RMSE by period", path, xlabel="period", ylabel="rmse")


def _svg_welfare(curve: WelfareCurve, path: Path) -> Path:
    sizes = [p.m for p in curve.points]
    series = {
        "net benefit (no collection cost)": [p.net_benefit_no_lambda_norm for p in curve.points],
        "net benefit (with collection cost)": [p.net_benefit_lambda_norm for p in curve.points],
        "zero": [0.0 for _ in curve.points],
    }
    return line_chart(
        sizes, series, "Audit net benefit vs market size", path, xlabel="m", ylabel="normalised benefit"
    )


def write_report(result, manifest: RunManifest) -> list[Path]:
    """Emit every file the result type supports into the manifest's output dir.

    MetricsReport: rmse_by_period.csv, stability.csv, weights.csv (when
    per-replication weights were collected).  WelfareCurve:
    welfare_curve.csv.  SimulationRun: pooled.csv.  SVG companions are
    emitted when the manifest asks for them.
    """
    out = Path(manifest.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if isinstance(result, MetricsReport):
        written.append(write_rmse_by_period(result, out / "rmse_by_period.csv"))
        written.append(write_stability(result, out / "stability.csv"))
        if result.weights_reps is not None:
            written.append(write_weights(result, out / "weights.csv"))
        if manifest.svg:
            written.append(_svg_rmse(result, out / "rmse_by_period.svg"))
    elif isinstance(result, WelfareCurve):
        written.append(write_welfare_curve(result, out / "welfare_curve.csv"))
        if manifest.svg:
            written.append(_svg_welfare(result, out / "welfare_curve.svg"))
    elif isinstance(result, SimulationRun):
        written.append(write_pooled_series(result.pooled, out / "pooled.csv"))
    else:
        raise TypeError(f"no writer for result type {type(result).__name__}")
    return written
