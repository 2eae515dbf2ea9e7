"""
Figure rendering for the report paths.  Every CLI report writes a PNG
next to its delimited output; the text files stay canonical.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .dynamics import Observation, PlasmaState
from .grid import Grid
from .harness import ConvergenceReport, ProbeRow


def plot_timeseries(path: str | Path, observations: Sequence[Observation]) -> None:
    t = np.array([o.t for o in observations])
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))

    ax = axes[0, 0]
    ax.plot(t, [o.report.energy for o in observations], "k-", label="E(t)")
    ax.plot(t, [o.report.h2_eta_sq for o in observations], "b--", label="density H2 part")
    ax.plot(t, [o.report.h3_u_sq for o in observations], "r--", label="velocity H3 part")
    ax.plot(t, [o.report.inv_min for o in observations], "g--", label="1/(1+m)")
    ax.set_xlabel("t")
    ax.set_ylabel("energy terms")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)

    ax = axes[0, 1]
    ax.plot(t, [o.report.m for o in observations], "b-")
    ax.axhline(-1.0, color="r", linestyle=":", label="vacuum")
    ax.set_xlabel("t")
    ax.set_ylabel("min eta")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)

    ax = axes[1, 0]
    mass0 = observations[0].report.mass
    mom0 = observations[0].report.momentum
    ax.plot(t, [o.report.mass - mass0 for o in observations], label="mass drift")
    ax.plot(t, [o.report.momentum - mom0 for o in observations], label="momentum drift")
    ax.set_xlabel("t")
    ax.set_ylabel("drift")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)

    ax = axes[1, 1]
    ax.semilogy(t, [max(o.max_abs_ux, 1e-300) for o in observations], label="max |u_x|")
    ax.semilogy(
        t, [max(o.elliptic_residual, 1e-300) for o in observations], label="residual"
    )
    ax.set_xlabel("t")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_snapshots(
    path: str | Path,
    grid: Grid,
    snapshots: Sequence[tuple[str, PlasmaState, np.ndarray]],
) -> None:
    """Overlay labelled (state, b) snapshots for eta, u, and b."""
    fig, axes = plt.subplots(3, 1, figsize=(8, 8), sharex=True)
    for label, state, b in snapshots:
        axes[0].plot(grid.points, state.eta, label=label)
        axes[1].plot(grid.points, state.u, label=label)
        axes[2].plot(grid.points, b, label=label)
    for ax, name in zip(axes, ("eta", "u", "b")):
        ax.set_ylabel(name)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
    axes[2].set_xlabel("x")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_convergence(
    path: str | Path, report: ConvergenceReport, xlabel: str
) -> None:
    p = np.asarray(report.parameter_values)
    e = np.asarray(report.errors)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(p, e, "o-", label="measured error")
    if np.all(e > 0.0) and len(p) > 1:
        for order in (2, 4):
            ref = e[0] * (p / p[0]) ** order
            ax.loglog(p, ref, "--", alpha=0.5, label=f"order {order}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("L2 error vs reference")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_probe(path: str | Path, rows: Sequence[ProbeRow]) -> None:
    a = [r.amplitude for r in rows]
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    axes[0].plot(a, [r.stop_time for r in rows], "o-")
    axes[0].set_xlabel("amplitude")
    axes[0].set_ylabel("stop time")
    axes[0].grid(True, alpha=0.3)
    axes[1].semilogy(a, [max(r.max_slope, 1e-300) for r in rows], "o-")
    axes[1].set_xlabel("amplitude")
    axes[1].set_ylabel("max |u_x|")
    axes[1].grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
