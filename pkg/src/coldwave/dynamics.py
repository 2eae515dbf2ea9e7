"""
Time evolution of the density perturbation eta and velocity u.

The two evolution equations are

    eta_t + (u*eta)_x + u_x = 0,
    u_t + u*u_x + (1+b)*b_x/(1+eta) = 0,

with b supplied instant-by-instant by the elliptic constraint (it carries
no initial data of its own and is re-solved at every stage).  A
regularized variant smooths every transport nonlinearity with the
Gaussian mollifier while leaving the elliptic coupling term plain.
Stepping is classical explicit RK4 with vacuum and blow-up guards.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from . import diagnostics
from .elliptic import MagneticField, solve_b
from .errors import BlowupError, ConfigError, VacuumError
from .grid import Field, Grid, dealias, derivative, mollify

VACUUM_THRESHOLD = 1e-6
BLOWUP_THRESHOLD = 1e8
SLOPE_THRESHOLD = 1e6


@dataclass(frozen=True, eq=False)
class PlasmaState:
    """Evolved fields at one instant; n = 1 + eta must stay positive."""

    eta: Field
    u: Field
    t: float = 0.0

    def __post_init__(self) -> None:
        eta = np.asarray(self.eta, dtype=float)
        u = np.asarray(self.u, dtype=float)
        if eta.shape != u.shape or eta.ndim != 1:
            raise ValueError("eta and u must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(eta)) and np.all(np.isfinite(u))):
            raise ValueError("state fields must be finite")
        if np.min(1.0 + eta) <= 0.0:
            raise ValueError("vacuum state: min(1 + eta) <= 0")
        if self.t < 0.0:
            raise ValueError("time must be nonnegative")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "u", u)


@dataclass(frozen=True, eq=False)
class Tendency:
    deta_dt: Field
    du_dt: Field


@dataclass(frozen=True)
class StepOptions:
    """Stepping, regularization, and guard parameters."""

    dt: float
    epsilon: float = 0.0  # 0 disables mollification
    elliptic_tol: float = 1e-10
    dealias_products: bool = True
    cfl_safety: float = 0.5
    vacuum_threshold: float = VACUUM_THRESHOLD
    blowup_threshold: float = BLOWUP_THRESHOLD
    slope_threshold: float = SLOPE_THRESHOLD
    observer_stride: int = 1

    def __post_init__(self) -> None:
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be nonnegative")
        if self.elliptic_tol <= 0.0:
            raise ValueError("elliptic_tol must be positive")
        if self.observer_stride < 1:
            raise ValueError("observer_stride must be >= 1")


@dataclass(frozen=True, eq=False)
class Observation:
    """One diagnostics sample of a run."""

    step: int
    t: float
    report: "diagnostics.EnergyReport"
    max_abs_ux: float
    elliptic_residual: float


@dataclass(frozen=True, eq=False)
class RunResult:
    """Final state, stop reason, and the collected time series."""

    state: PlasmaState
    stop_reason: str  # completed | vacuum | blowup | steepening
    n_steps: int
    observations: tuple[Observation, ...]
    detail: str = ""

    @property
    def reports(self) -> list["diagnostics.EnergyReport"]:
        return [obs.report for obs in self.observations]


Observer = Callable[[int, PlasmaState, MagneticField, "diagnostics.EnergyReport"], None]


def _require_finite(state: PlasmaState) -> None:
    if not (np.all(np.isfinite(state.eta)) and np.all(np.isfinite(state.u))):
        raise BlowupError("non-finite field values")


def _projector(grid: Grid, dealias_products: bool):
    if dealias_products and grid.scheme == "spectral":
        return lambda f: dealias(grid, f)
    return lambda f: f


def rhs(
    grid: Grid,
    state: PlasmaState,
    elliptic_tol: float = 1e-10,
    *,
    dealias_products: bool = False,
    vacuum_threshold: float = VACUUM_THRESHOLD,
) -> Tendency:
    """Tendencies of (eta, u) with b solved from the constraint."""
    _require_finite(state)
    proj = _projector(grid, dealias_products)
    mag = solve_b(grid, state.eta, elliptic_tol, vacuum_threshold=vacuum_threshold)
    ux = derivative(grid, state.u, 1)
    deta_dt = -derivative(grid, proj(state.u * state.eta), 1) - ux
    bx = derivative(grid, mag.b, 1)
    force = proj((1.0 + mag.b) * bx / (1.0 + state.eta))
    du_dt = -proj(state.u * ux) - force
    return Tendency(deta_dt=deta_dt, du_dt=du_dt)


def rhs_mollified(
    grid: Grid,
    state: PlasmaState,
    epsilon: float,
    elliptic_tol: float = 1e-10,
    *,
    dealias_products: bool = False,
    vacuum_threshold: float = VACUUM_THRESHOLD,
) -> Tendency:
    """
    Regularized tendencies: every transport nonlinearity is smoothed
    (J applied to the factors and once more to the product, and twice to
    the linear term), while the elliptic coupling term stays plain.
    Tends to rhs mode-wise as epsilon -> 0.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive for the mollified form")
    _require_finite(state)
    proj = _projector(grid, dealias_products)
    smooth = lambda f: mollify(grid, f, epsilon)
    mag = solve_b(grid, state.eta, elliptic_tol, vacuum_threshold=vacuum_threshold)
    ju = smooth(state.u)
    jeta = smooth(state.eta)
    jux = derivative(grid, ju, 1)
    deta_dt = -smooth(derivative(grid, proj(ju * jeta), 1)) - derivative(
        grid, smooth(ju), 1
    )
    bx = derivative(grid, mag.b, 1)
    force = proj((1.0 + mag.b) * bx / (1.0 + state.eta))
    du_dt = -smooth(proj(ju * jux)) - force
    return Tendency(deta_dt=deta_dt, du_dt=du_dt)


def _tendency_fn(grid: Grid, opts: StepOptions):
    if opts.epsilon > 0.0:
        return lambda s: rhs_mollified(
            grid,
            s,
            opts.epsilon,
            opts.elliptic_tol,
            dealias_products=opts.dealias_products,
            vacuum_threshold=opts.vacuum_threshold,
        )
    return lambda s: rhs(
        grid,
        s,
        opts.elliptic_tol,
        dealias_products=opts.dealias_products,
        vacuum_threshold=opts.vacuum_threshold,
    )


def _guarded_state(eta: Field, u: Field, t: float, opts: StepOptions) -> PlasmaState:
    if not (np.all(np.isfinite(eta)) and np.all(np.isfinite(u))):
        raise BlowupError(f"non-finite field values at t = {t:.6g}")
    peak = max(float(np.max(np.abs(eta))), float(np.max(np.abs(u))))
    if peak > opts.blowup_threshold:
        raise BlowupError(f"field magnitude {peak:.3e} at t = {t:.6g}")
    dens_min = float(np.min(1.0 + eta))
    if dens_min <= opts.vacuum_threshold:
        raise VacuumError(f"min(1 + eta) = {dens_min:.3e} at t = {t:.6g}")
    return PlasmaState(eta=eta, u=u, t=t)


def step_rk4(grid: Grid, state: PlasmaState, opts: StepOptions) -> PlasmaState:
    """One classical 4-stage explicit step; revalidates the guards."""
    f = _tendency_fn(grid, opts)
    dt = opts.dt
    t = state.t
    k1 = f(state)
    s2 = _guarded_state(
        state.eta + 0.5 * dt * k1.deta_dt, state.u + 0.5 * dt * k1.du_dt, t, opts
    )
    k2 = f(s2)
    s3 = _guarded_state(
        state.eta + 0.5 * dt * k2.deta_dt, state.u + 0.5 * dt * k2.du_dt, t, opts
    )
    k3 = f(s3)
    s4 = _guarded_state(
        state.eta + dt * k3.deta_dt, state.u + dt * k3.du_dt, t, opts
    )
    k4 = f(s4)
    eta_new = state.eta + (dt / 6.0) * (
        k1.deta_dt + 2.0 * k2.deta_dt + 2.0 * k3.deta_dt + k4.deta_dt
    )
    u_new = state.u + (dt / 6.0) * (
        k1.du_dt + 2.0 * k2.du_dt + 2.0 * k3.du_dt + k4.du_dt
    )
    return _guarded_state(eta_new, u_new, t + dt, opts)


def wave_speed_estimate(grid: Grid, state: PlasmaState, mag: MagneticField) -> float:
    """max over the grid of sqrt((1+b)/(1+eta))."""
    ratio = (1.0 + mag.b) / (1.0 + state.eta)
    return float(np.sqrt(np.max(np.maximum(ratio, 0.0))))


def cfl_limit(grid: Grid, state: PlasmaState, mag: MagneticField, cfl_safety: float) -> float:
    speed = float(np.max(np.abs(state.u))) + wave_speed_estimate(grid, state, mag)
    return cfl_safety * grid.dx / speed


def evolve(
    grid: Grid,
    state0: PlasmaState,
    opts: StepOptions,
    t_max: float,
    observer: Observer | None = None,
) -> RunResult:
    """
    March state0 forward until t_max or breakdown.

    Refuses to start (ConfigError) if dt violates the CFL guard on the
    initial state.  Physics breakdown never raises: vacuum and blow-up
    are caught and recorded as the stop reason, as is a crossing of the
    slope threshold max|u_x| >= slope_threshold.  Diagnostics are
    sampled every opts.observer_stride steps and at the final state.
    """
    if t_max <= state0.t:
        raise ConfigError("t_max must exceed the initial time")
    mag0 = solve_b(
        grid, state0.eta, opts.elliptic_tol, vacuum_threshold=opts.vacuum_threshold
    )
    dt_limit = cfl_limit(grid, state0, mag0, opts.cfl_safety)
    if opts.dt > dt_limit:
        raise ConfigError(
            f"dt = {opts.dt:.3e} exceeds the CFL limit {dt_limit:.3e} "
            f"(cfl_safety = {opts.cfl_safety})"
        )

    observations: list[Observation] = []

    def observe(step: int, state: PlasmaState, mag: MagneticField) -> float:
        report = diagnostics.energy(grid, state)
        max_ux = float(np.max(np.abs(derivative(grid, state.u, 1))))
        observations.append(
            Observation(
                step=step,
                t=state.t,
                report=report,
                max_abs_ux=max_ux,
                elliptic_residual=mag.residual_inf,
            )
        )
        if observer is not None:
            observer(step, state, mag, report)
        return max_ux

    max_ux = observe(0, state0, mag0)
    state = state0
    step = 0
    stop_reason = "completed"
    detail = ""
    time_eps = 1e-12 * max(1.0, t_max)
    while state.t < t_max - time_eps:
        step_dt = min(opts.dt, t_max - state.t)
        try:
            state = step_rk4(grid, state, replace(opts, dt=step_dt))
        except VacuumError as exc:
            stop_reason, detail = "vacuum", str(exc)
            break
        except BlowupError as exc:
            stop_reason, detail = "blowup", str(exc)
            break
        step += 1
        at_end = state.t >= t_max - time_eps
        sampled = step % opts.observer_stride == 0 or at_end
        if sampled:
            mag = solve_b(
                grid,
                state.eta,
                opts.elliptic_tol,
                vacuum_threshold=opts.vacuum_threshold,
            )
            max_ux = observe(step, state, mag)
            if max_ux >= opts.slope_threshold and not at_end:
                stop_reason = "steepening"
                detail = f"max|u_x| = {max_ux:.3e} at t = {state.t:.6g}"
                break
    return RunResult(
        state=state,
        stop_reason=stop_reason,
        n_steps=step,
        observations=tuple(observations),
        detail=detail,
    )
