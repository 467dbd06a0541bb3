"""Self-contained SVG line charts; no plotting dependency, deterministic bytes."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

__all__ = ["line_chart"]

_COLORS = ("#1b6ca8", "#c23b22", "#2e8540", "#8c5aa8", "#b8860b", "#4b4b4b", "#17a2b8", "#d6679c")
_WIDTH, _HEIGHT = 720, 440
_MARGIN = 56


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (n - 1)
    return [lo + step * k for k in range(n)]


def line_chart(
    x: Sequence[float],
    series: dict[str, Sequence[float]],
    title: str,
    path: str | Path,
    xlabel: str = "",
    ylabel: str = "",
) -> Path:
    """Write one SVG with a polyline per named series over the common x grid.

    Non-finite points are skipped (lines break around them).
    """
    path = Path(path)
    xs = [float(v) for v in x]
    finite_y = [
        float(v) for ys in series.values() for v in ys if v is not None and math.isfinite(float(v))
    ]
    if not xs or not finite_y:
        raise ValueError("chart needs at least one finite point")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(finite_y), max(finite_y)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad
    plot_w = _WIDTH - 2 * _MARGIN
    plot_h = _HEIGHT - 2 * _MARGIN

    def px(v: float) -> float:
        return _MARGIN + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: float) -> float:
        return _HEIGHT - _MARGIN - (v - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="monospace" font-size="12">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="15">{title}</text>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#999"/>',
    ]
    for tick in _ticks(x_lo, x_hi):
        parts.append(
            f'<text x="{px(tick):.1f}" y="{_HEIGHT - _MARGIN + 18}" text-anchor="middle">'
            f"{_fmt(tick)}</text>"
        )
    for tick in _ticks(y_lo, y_hi):
        parts.append(
            f'<text x="{_MARGIN - 6}" y="{py(tick) + 4:.1f}" text-anchor="end">{_fmt(tick)}</text>'
        )
        parts.append(
            f'<line x1="{_MARGIN}" y1="{py(tick):.1f}" x2="{_WIDTH - _MARGIN}" '
            f'y2="{py(tick):.1f}" stroke="#eee"/>'
        )
    if xlabel:
        parts.append(
            f'<text x="{_WIDTH / 2:.1f}" y="{_HEIGHT - 12}" text-anchor="middle">{xlabel}</text>'
        )
    if ylabel:
        parts.append(
            f'<text x="16" y="{_HEIGHT / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 16 {_HEIGHT / 2:.1f})">{ylabel}</text>'
        )
    for idx, (name, ys) in enumerate(series.items()):
        color = _COLORS[idx % len(_COLORS)]
        points = []
        segments = []
        for xv, yv in zip(xs, ys):
            if yv is None or not math.isfinite(float(yv)):
                if points:
                    segments.append(points)
                    points = []
                continue
            points.append(f"{px(xv):.1f},{py(float(yv)):.1f}")
        if points:
            segments.append(points)
        for seg in segments:
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                f'points="{" ".join(seg)}"/>'
            )
        legend_y = _MARGIN + 16 * idx + 12
        parts.append(
            f'<line x1="{_WIDTH - _MARGIN - 130}" y1="{legend_y}" '
            f'x2="{_WIDTH - _MARGIN - 110}" y2="{legend_y}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{_WIDTH - _MARGIN - 104}" y="{legend_y + 4}">{name}</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")
    return path
