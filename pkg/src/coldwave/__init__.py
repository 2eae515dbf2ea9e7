"""
coldwave: a 1D periodic-domain solver for a cold-plasma fluid model.

Two evolution equations (density perturbation eta and velocity u) are
coupled to an elliptic constraint fixing the magnetic perturbation b at
every instant.  The package provides the pseudospectral / finite
difference discretization, the constrained elliptic solve with runtime
bound checks, RK4 time stepping with a mollifier-regularized variant,
energy and minimum-tracking diagnostics, and reproducible convergence
studies behind the `coldwave` CLI.
"""

from .config import InitialCondition, SolverConfig, load_config, parse_config
from .diagnostics import (
    BudgetReport,
    EnergyReport,
    MinTrace,
    build_min_trace,
    check_positivity_persistence,
    energy,
    energy_budget,
    verify_min_law,
)
from .dynamics import (
    PlasmaState,
    RunResult,
    StepOptions,
    Tendency,
    evolve,
    rhs,
    rhs_mollified,
    step_rk4,
)
from .elliptic import (
    BoundReport,
    MagneticField,
    check_bounds,
    oracle_elliptic_dense,
    residual,
    solve_b,
)
from .errors import (
    BlowupError,
    ColdwaveError,
    ConfigError,
    HarnessError,
    ParseError,
    SolveError,
    VacuumError,
    ValidationError,
)
from .grid import (
    Field,
    Grid,
    dealias,
    derivative,
    l2_inner,
    make_grid,
    mollify,
    sobolev_norm,
)
from .harness import (
    ConvergenceReport,
    ProbeRow,
    epsilon_study,
    refine_study,
    steepening_probe,
)

__version__ = "0.1.0"
