"""
Reproducible verification studies: grid refinement, mollifier sweeps,
and steepening probes.  Each study runs identical physics across one
swept parameter and reduces the outcome to a small, deterministic
report; no randomness, fixed iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .config import SolverConfig, initial_state
from .dynamics import PlasmaState, RunResult, evolve
from .errors import ColdwaveError, ConfigError, HarnessError
from .grid import Grid, make_grid
from .diagnostics import EnergyReport


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    """Errors against a reference along one swept parameter."""

    parameter_values: tuple[float, ...]  # dx, dt, or epsilon
    errors: tuple[float, ...]
    observed_orders: tuple[float, ...]
    reference_description: str

    def errors_strictly_decreasing(self) -> bool:
        e = np.asarray(self.errors)
        return bool(np.all(np.diff(e) < 0.0))


@dataclass(frozen=True)
class ProbeRow:
    amplitude: float
    stop_time: float
    stop_reason: str
    max_slope: float


def _run_to(config: SolverConfig, grid: Grid, state0: PlasmaState, t_end: float) -> RunResult:
    opts = config.step_options()
    return evolve(grid, state0, opts, t_end)


def _combined_l2(grid: Grid, a: PlasmaState, b: PlasmaState) -> float:
    deta = a.eta - b.eta
    du = a.u - b.u
    return float(np.sqrt(grid.dx * (np.sum(deta**2) + np.sum(du**2))))


def refine_study(
    config: SolverConfig, levels: Sequence[int], t_end: float
) -> ConvergenceReport:
    """
    Run the configured physics at each resolution; the finest level is
    the reference.  Errors are combined L2 norms of (eta, u) after
    restriction to the coarsest grid, so levels must be increasing and
    divisible by the coarsest.
    """
    levels = [int(n) for n in levels]
    if len(levels) < 2:
        raise HarnessError("refine_study needs at least two levels")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise HarnessError("levels must be strictly increasing")
    if any(n % levels[0] != 0 for n in levels):
        raise HarnessError("levels must be multiples of the coarsest level")
    if config.initial_condition.kind == "file":
        raise HarnessError("refine_study requires an analytic initial_condition")

    coarse = make_grid(levels[0], config.scheme)
    restricted: list[PlasmaState] = []
    for n in levels:
        grid = make_grid(n, config.scheme)
        try:
            result = _run_to(config, grid, initial_state(config, grid), t_end)
        except ColdwaveError as exc:
            raise HarnessError(f"level {n}: {exc}") from exc
        if result.stop_reason != "completed":
            raise HarnessError(
                f"level {n}: run stopped early ({result.stop_reason})"
            )
        stride = n // levels[0]
        restricted.append(
            PlasmaState(
                eta=result.state.eta[::stride],
                u=result.state.u[::stride],
                t=result.state.t,
            )
        )
    reference = restricted[-1]
    errors = tuple(_combined_l2(coarse, s, reference) for s in restricted[:-1])
    spacings = tuple(coarse.length / n for n in levels[:-1])
    orders = _observed_orders(spacings, errors)
    return ConvergenceReport(
        parameter_values=spacings,
        errors=errors,
        observed_orders=orders,
        reference_description=f"self-reference: finest level n_points = {levels[-1]}",
    )


def epsilon_study(
    config: SolverConfig, epsilons: Sequence[float], t_end: float
) -> ConvergenceReport:
    """
    Compare regularized runs against the unregularized run at t_end on a
    fixed grid.  Errors must decrease as epsilon does; callers gate on
    errors_strictly_decreasing().
    """
    epsilons = [float(e) for e in epsilons]
    if any(e <= 0.0 for e in epsilons):
        raise HarnessError("epsilons must be positive")
    if any(b >= a for a, b in zip(epsilons, epsilons[1:])):
        raise HarnessError("epsilons must be strictly decreasing")
    grid = make_grid(config.n_points, config.scheme)
    opts = config.step_options()

    def run_with(eps: float) -> PlasmaState:
        state0 = initial_state(config, grid)
        try:
            result = evolve(grid, state0, replace(opts, epsilon=eps), t_end)
        except ColdwaveError as exc:
            raise HarnessError(f"epsilon {eps:g}: {exc}") from exc
        if result.stop_reason != "completed":
            raise HarnessError(
                f"epsilon {eps:g}: run stopped early ({result.stop_reason})"
            )
        return result.state

    reference = run_with(0.0)
    errors = tuple(_combined_l2(grid, run_with(e), reference) for e in epsilons)
    orders = _observed_orders(tuple(epsilons), errors)
    return ConvergenceReport(
        parameter_values=tuple(epsilons),
        errors=errors,
        observed_orders=orders,
        reference_description="unregularized run (epsilon = 0)",
    )


def steepening_probe(
    config: SolverConfig, amplitudes: Sequence[float]
) -> list[ProbeRow]:
    """
    Evolve u0 = -a*sin(x), eta0 = 0 for each amplitude and record when
    and why each run stopped, plus the largest slope seen.  Never
    raises: refused or failed runs become rows.
    """
    rows: list[ProbeRow] = []
    grid = make_grid(config.n_points, config.scheme)
    opts = config.step_options()
    x = grid.points
    for a in amplitudes:
        a = float(a)
        state0 = PlasmaState(eta=np.zeros_like(x), u=-a * np.sin(x), t=0.0)
        try:
            result = evolve(grid, state0, opts, config.t_max)
        except ConfigError:
            rows.append(
                ProbeRow(
                    amplitude=a,
                    stop_time=0.0,
                    stop_reason="cfl_refused",
                    max_slope=float(a),  # initial max|u_x| = a
                )
            )
            continue
        max_slope = max(obs.max_abs_ux for obs in result.observations)
        rows.append(
            ProbeRow(
                amplitude=a,
                stop_time=result.state.t,
                stop_reason=result.stop_reason,
                max_slope=max_slope,
            )
        )
    return rows


def _observed_orders(
    parameters: Sequence[float], errors: Sequence[float]
) -> tuple[float, ...]:
    """log-log slopes between successive (parameter, error) pairs."""
    orders = []
    for (p0, e0), (p1, e1) in zip(
        zip(parameters, errors), zip(parameters[1:], errors[1:])
    ):
        if e0 <= 0.0 or e1 <= 0.0:
            orders.append(float("nan"))
        else:
            orders.append(float(np.log(e0 / e1) / np.log(p0 / p1)))
    return tuple(orders)
