"""
Run diagnostics: the energy functional, minimum tracking, and budgets.

The monitored energy is E(t) = ||eta||_{H2}^2 + ||u||_{H3}^2
+ max_x 1/(1+eta); its last term is the reciprocal of the density at the
spatial minimum m(t) = min_x eta, which obeys

    m'(t) = -u_x(x_min, t) * (1 + m(t))    (a.e. in t),

so a recorded trace of m can be checked against the rate predicted from
u_x at the argmin.  The local-in-time budget E(t) <= 4 E(0) is evaluated
as a ratio over a run's reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import VacuumError
from .grid import Grid, derivative, sobolev_norm

if TYPE_CHECKING:
    from .dynamics import PlasmaState


@dataclass(frozen=True)
class EnergyReport:
    """All terms of the monitored energy plus conserved quantities."""

    h2_eta_sq: float
    h3_u_sq: float
    inv_min: float
    energy: float
    m: float
    argmin_index: int
    ux_at_argmin: float
    mass: float
    momentum: float
    t: float


@dataclass(frozen=True, eq=False)
class MinTrace:
    """Sampled minimum of eta with predicted and observed rates."""

    times: np.ndarray
    m_values: np.ndarray
    predicted_rates: np.ndarray  # -u_x(argmin) * (1 + m)
    observed_rates: np.ndarray  # finite differences of m

    def __post_init__(self) -> None:
        n = len(self.times)
        if not (
            len(self.m_values) == len(self.predicted_rates) == len(self.observed_rates) == n
        ):
            raise ValueError("trace arrays must share one length")
        if n >= 2 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")


@dataclass(frozen=True)
class BudgetReport:
    """Energy growth relative to t = 0 and the reciprocal-term rate check."""

    max_ratio: float
    exceed_time: float | None  # first time E(t)/E(0) > 4, if any
    reciprocal_rate_deviation: float


def energy(grid: Grid, state: "PlasmaState") -> EnergyReport:
    """Evaluate every energy term and conserved quantity at state.t."""
    eta = np.asarray(state.eta, dtype=float)
    u = np.asarray(state.u, dtype=float)
    if np.min(1.0 + eta) <= 0.0:
        raise VacuumError("energy undefined: 1 + eta <= 0 somewhere")
    h2 = sobolev_norm(grid, eta, 2) ** 2
    h3 = sobolev_norm(grid, u, 3) ** 2
    j = int(np.argmin(eta))
    m = float(eta[j])
    inv_min = 1.0 / (1.0 + m)  # identity inv_min*(1+m) = 1 by construction
    ux = derivative(grid, u, 1)
    mass = float(grid.dx * np.sum(1.0 + eta))
    momentum = float(grid.dx * np.sum((1.0 + eta) * u))
    return EnergyReport(
        h2_eta_sq=h2,
        h3_u_sq=h3,
        inv_min=inv_min,
        energy=h2 + h3 + inv_min,
        m=m,
        argmin_index=j,
        ux_at_argmin=float(ux[j]),
        mass=mass,
        momentum=momentum,
        t=float(state.t),
    )


def build_min_trace(reports: Sequence[EnergyReport]) -> MinTrace:
    """Assemble a MinTrace from a run's ordered reports."""
    if len(reports) < 2:
        raise ValueError("need at least 2 reports to build a trace")
    times = np.array([r.t for r in reports])
    m = np.array([r.m for r in reports])
    predicted = np.array([-r.ux_at_argmin * (1.0 + r.m) for r in reports])
    observed = np.gradient(m, times)  # centered interior, one-sided ends
    return MinTrace(
        times=times, m_values=m, predicted_rates=predicted, observed_rates=observed
    )


def verify_min_law(trace: MinTrace) -> float:
    """
    Max deviation |observed - predicted| over interior samples.

    Expected O(dt^2) plus argmin-hopping noise on smooth runs; an
    equilibrium gives 0 exactly.
    """
    if len(trace.times) < 3:
        raise ValueError("need at least 3 samples")
    gap = np.abs(trace.observed_rates[1:-1] - trace.predicted_rates[1:-1])
    return float(np.max(gap))


def check_positivity_persistence(trace: MinTrace) -> bool:
    """True iff every sampled minimum stays above -1."""
    return bool(np.all(trace.m_values > -1.0))


def energy_budget(reports: Sequence[EnergyReport]) -> BudgetReport:
    """
    Ratio E(t)/E(0) over a run, the first time (if any) it exceeds 4,
    and how well d/dt of the reciprocal term matches u_x(argmin)/(1+m).
    """
    if len(reports) < 2:
        raise ValueError("need at least 2 reports")
    times = np.array([r.t for r in reports])
    e = np.array([r.energy for r in reports])
    ratios = e / e[0]
    max_ratio = float(np.max(ratios))
    exceed = np.nonzero(ratios > 4.0)[0]
    exceed_time = float(times[exceed[0]]) if exceed.size else None
    inv = np.array([r.inv_min for r in reports])
    predicted = np.array([r.ux_at_argmin / (1.0 + r.m) for r in reports])
    observed = np.gradient(inv, times)
    if len(reports) >= 3:
        deviation = float(np.max(np.abs(observed[1:-1] - predicted[1:-1])))
    else:
        deviation = float(np.max(np.abs(observed - predicted)))
    return BudgetReport(
        max_ratio=max_ratio,
        exceed_time=exceed_time,
        reciprocal_rate_deviation=deviation,
    )
