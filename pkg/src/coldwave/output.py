"""
Delimited text outputs: timeseries, snapshots, manifests, study tables.

All numeric columns are tab-separated and printed with 17 significant
digits so files are deterministic and round-trip doubles bit-faithfully.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .config import fmt
from .dynamics import Observation, PlasmaState
from .grid import Grid
from .harness import ConvergenceReport, ProbeRow

TIMESERIES_COLUMNS = (
    "t",
    "energy",
    "h2_eta_sq",
    "h3_u_sq",
    "inv_min",
    "m",
    "mass",
    "momentum",
    "max_abs_ux",
    "elliptic_residual",
)


def _write(path: Path, lines: Sequence[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def timeseries_row(obs: Observation) -> tuple[float, ...]:
    r = obs.report
    return (
        r.t,
        r.energy,
        r.h2_eta_sq,
        r.h3_u_sq,
        r.inv_min,
        r.m,
        r.mass,
        r.momentum,
        obs.max_abs_ux,
        obs.elliptic_residual,
    )


def write_timeseries(path: str | Path, observations: Sequence[Observation]) -> None:
    lines = ["\t".join(TIMESERIES_COLUMNS)]
    for obs in observations:
        lines.append("\t".join(fmt(v) for v in timeseries_row(obs)))
    _write(Path(path), lines)


def write_snapshot(
    path: str | Path, grid: Grid, state: PlasmaState, b: np.ndarray
) -> None:
    """Four columns: x, eta, u, b (no header)."""
    lines = []
    for x, eta, u, bv in zip(grid.points, state.eta, state.u, b):
        lines.append("\t".join(fmt(v) for v in (x, eta, u, bv)))
    _write(Path(path), lines)


def write_manifest(path: str | Path, manifest_text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest_text, encoding="utf-8")


def write_convergence(path: str | Path, report: ConvergenceReport) -> None:
    lines = [f"# reference: {report.reference_description}"]
    lines.append("\t".join(("parameter", "error", "observed_order")))
    orders = (float("nan"),) + tuple(report.observed_orders)
    for p, e, o in zip(report.parameter_values, report.errors, orders):
        lines.append("\t".join((fmt(p), fmt(e), fmt(o))))
    _write(Path(path), lines)


def write_probe(path: str | Path, rows: Sequence[ProbeRow]) -> None:
    lines = ["\t".join(("amplitude", "stop_time", "stop_reason", "max_slope"))]
    for row in rows:
        lines.append(
            "\t".join(
                (fmt(row.amplitude), fmt(row.stop_time), row.stop_reason, fmt(row.max_slope))
            )
        )
    _write(Path(path), lines)
