"""CSV ingestion and emission of estimate panels.

Format: header ``expert_id,t0,t1,...`` then one row per expert, first cell
an identifier, remaining cells numeric.  Errors carry row/column
coordinates so malformed files from external sources are easy to fix.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import numpy as np

from .panel import EstimatePanel

__all__ = ["PanelFormatError", "load_panel_csv", "write_panel_csv"]


class PanelFormatError(ValueError):
    """A panel CSV file violates the expected layout."""


def load_panel_csv(path: str | Path) -> EstimatePanel:
    path = Path(path)
    if not path.is_file():
        raise PanelFormatError(f"panel file not found: {path}")
    with path.open(newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise PanelFormatError("panel file is empty")
    header = rows[0]
    if not header or header[0] != "expert_id":
        raise PanelFormatError("header must start with 'expert_id'")
    expected = ["expert_id"] + [f"t{k}" for k in range(len(header) - 1)]
    if header != expected:
        raise PanelFormatError(f"header columns must be {','.join(expected[:4])},...")
    horizon = len(header) - 1
    if horizon < 1:
        raise PanelFormatError("panel needs at least one period column")
    values = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != horizon + 1:
            raise PanelFormatError(
                f"row {r}: expected {horizon + 1} cells, found {len(row)}"
            )
        parsed = []
        for c, cell in enumerate(row[1:], start=2):
            cell = cell.strip()
            if not cell:
                raise PanelFormatError(f"row {r}, column {c}: blank cell")
            try:
                parsed.append(float(cell))
            except ValueError:
                raise PanelFormatError(
                    f"row {r}, column {c}: non-numeric cell {cell!r}"
                ) from None
        values.append(parsed)
    if len(values) < 2:
        raise PanelFormatError(f"panel needs at least 2 experts, found {len(values)}")
    try:
        return EstimatePanel(np.array(values))
    except ValueError as exc:
        raise PanelFormatError(str(exc)) from None


def write_panel_csv(
    panel: EstimatePanel, path: str | Path, expert_ids: Sequence[str] | None = None
) -> Path:
    """Emit a panel in the ingestible layout; floats use shortest round-trip form."""
    path = Path(path)
    ids = list(expert_ids) if expert_ids is not None else [f"e{i}" for i in range(panel.m)]
    if len(ids) != panel.m:
        raise ValueError("expert_ids length must equal the expert count")
    with path.open("w", newline="\n", encoding="utf-8") as handle:
        handle.write(",".join(["expert_id"] + [f"t{k}" for k in range(panel.horizon)]) + "\n")
        for i in range(panel.m):
            cells = [ids[i]] + [repr(float(v)) for v in panel.estimates[i]]
            handle.write(",".join(cells) + "\n")
    return path
