"""
Command-line entry points.

    coldwave run --config run.cfg [--output-dir out]
    coldwave refine --config run.cfg --levels 64,128,256,512
    coldwave epsilon-study --config run.cfg --epsilons 0.2,0.1,0.05
    coldwave probe-steepening --config run.cfg --amplitudes 0.1,0.5,1.0

Exit codes: 0 completed, 1 study failure, 2 configuration error,
3 CFL refusal, 4 vacuum stop, 5 blow-up stop, 6 steepening stop.
Every report writes delimited text plus a rendered PNG figure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import output, plots
from .config import (
    SolverConfig,
    format_manifest,
    initial_state,
    load_config,
    with_output_dir,
)
from .dynamics import PlasmaState, RunResult, evolve
from .elliptic import MagneticField, solve_b
from .errors import ColdwaveError, ConfigError, HarnessError, ParseError, ValidationError
from .grid import Grid, make_grid
from .harness import epsilon_study, refine_study, steepening_probe

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_CFL = 3
EXIT_VACUUM = 4
EXIT_BLOWUP = 5
EXIT_STEEPENING = 6

_STOP_EXIT_CODES = {
    "completed": EXIT_OK,
    "vacuum": EXIT_VACUUM,
    "blowup": EXIT_BLOWUP,
    "steepening": EXIT_STEEPENING,
}


class _SnapshotCollector:
    """Observer that keeps state copies at (or just past) requested times."""

    def __init__(self, times: tuple[float, ...]):
        self.pending = sorted(times)
        self.collected: list[tuple[float, PlasmaState, np.ndarray]] = []
        self.first: tuple[PlasmaState, np.ndarray] | None = None
        self.last: tuple[PlasmaState, np.ndarray] | None = None

    def __call__(self, step, state, mag, report) -> None:
        if self.first is None:
            self.first = (state, mag.b.copy())
        self.last = (state, mag.b.copy())
        while self.pending and state.t >= self.pending[0] - 1e-12:
            self.collected.append((self.pending.pop(0), state, mag.b.copy()))


def _parse_list(text: str, conv):
    return [conv(part) for part in text.split(",") if part.strip()]


def _load(args) -> SolverConfig:
    config = load_config(args.config)
    return with_output_dir(config, getattr(args, "output_dir", None))


def cmd_run(args) -> int:
    config = _load(args)
    base_dir = Path(args.config).parent
    return run(config, base_dir)


def run(config: SolverConfig, base_dir: Path = Path(".")) -> int:
    """Execute one configured run and write all of its outputs."""
    grid = make_grid(config.n_points, config.scheme)
    state0 = initial_state(config, grid, base_dir)
    collector = _SnapshotCollector(config.snapshot_times)
    try:
        result = evolve(grid, state0, config.step_options(), config.t_max, collector)
    except ConfigError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_CFL
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    output.write_timeseries(out / "timeseries.tsv", result.observations)
    first_state, first_b = collector.first
    output.write_snapshot(out / "snapshot_initial.tsv", grid, first_state, first_b)
    snapshots = [("t = 0", first_state, first_b)]
    for t_req, state, b in collector.collected:
        output.write_snapshot(out / f"snapshot_{t_req:.6f}.tsv", grid, state, b)
        snapshots.append((f"t = {state.t:.4g}", state, b))
    last_state, last_b = collector.last
    output.write_snapshot(out / "snapshot_final.tsv", grid, last_state, last_b)
    if last_state is not first_state:
        snapshots.append((f"t = {last_state.t:.4g} (final)", last_state, last_b))
    output.write_manifest(
        out / "manifest.txt", format_manifest(config, result.stop_reason)
    )
    plots.plot_timeseries(out / "timeseries.png", result.observations)
    plots.plot_snapshots(out / "snapshots.png", grid, snapshots)
    message = f"{result.stop_reason}: t = {result.state.t:.6g}, steps = {result.n_steps}"
    if result.detail:
        message += f" ({result.detail})"
    print(message)
    return _STOP_EXIT_CODES.get(result.stop_reason, EXIT_FAILURE)


def cmd_refine(args) -> int:
    config = _load(args)
    levels = _parse_list(args.levels, int)
    report = refine_study(config, levels, config.t_max)
    out = Path(config.output_dir)
    output.write_convergence(out / "refine.tsv", report)
    plots.plot_convergence(out / "refine.png", report, xlabel="grid spacing")
    for p, e in zip(report.parameter_values, report.errors):
        print(f"dx = {p:.6g}  error = {e:.6e}")
    print(f"observed orders: {[f'{o:.2f}' for o in report.observed_orders]}")
    return EXIT_OK


def cmd_epsilon_study(args) -> int:
    config = _load(args)
    epsilons = _parse_list(args.epsilons, float)
    report = epsilon_study(config, epsilons, config.t_max)
    out = Path(config.output_dir)
    output.write_convergence(out / "epsilon_study.tsv", report)
    plots.plot_convergence(out / "epsilon_study.png", report, xlabel="epsilon")
    for p, e in zip(report.parameter_values, report.errors):
        print(f"epsilon = {p:.6g}  error = {e:.6e}")
    if report.errors_strictly_decreasing():
        print("PASS: errors decrease monotonically")
        return EXIT_OK
    print("FAILED: errors are not monotone")
    return EXIT_FAILURE


def cmd_probe(args) -> int:
    config = _load(args)
    amplitudes = _parse_list(args.amplitudes, float)
    rows = steepening_probe(config, amplitudes)
    out = Path(config.output_dir)
    output.write_probe(out / "steepening.tsv", rows)
    plots.plot_probe(out / "steepening.png", rows)
    for row in rows:
        print(
            f"a = {row.amplitude:<8g} stop = {row.stop_reason:<12s} "
            f"t = {row.stop_time:<10.6g} max|u_x| = {row.max_slope:.6g}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coldwave",
        description="1D cold-plasma solver with an elliptic magnetic constraint",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one configured run")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--output-dir", default=None)
    p_run.set_defaults(handler=cmd_run)

    p_ref = sub.add_parser("refine", help="grid refinement study")
    p_ref.add_argument("--config", required=True)
    p_ref.add_argument("--levels", required=True, help="comma list, e.g. 64,128,256")
    p_ref.add_argument("--output-dir", default=None)
    p_ref.set_defaults(handler=cmd_refine)

    p_eps = sub.add_parser("epsilon-study", help="mollifier sweep")
    p_eps.add_argument("--config", required=True)
    p_eps.add_argument("--epsilons", required=True, help="decreasing comma list")
    p_eps.add_argument("--output-dir", default=None)
    p_eps.set_defaults(handler=cmd_epsilon_study)

    p_probe = sub.add_parser("probe-steepening", help="amplitude sweep of -a*sin(x)")
    p_probe.add_argument("--config", required=True)
    p_probe.add_argument("--amplitudes", required=True, help="comma list")
    p_probe.add_argument("--output-dir", default=None)
    p_probe.set_defaults(handler=cmd_probe)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ParseError, ValidationError, ConfigError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HarnessError as exc:
        print(f"study failed: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ColdwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
