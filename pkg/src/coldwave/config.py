"""
Run configuration: line-oriented "key = value" text with '#' comments.

Unknown keys are errors so typos never pass silently.  Floats are
written back with 17 significant digits, which round-trips IEEE doubles
exactly, so a manifest echoing the resolved configuration parses back to
an identical SolverConfig.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .dynamics import PlasmaState, StepOptions
from .errors import ParseError, ValidationError
from .grid import SCHEMES, Grid

_IC_PATTERN = re.compile(r"^(\w+)\s*(?:\((.*)\))?$")


@dataclass(frozen=True)
class InitialCondition:
    """One of: rest, cosine_density(a,k), sine_velocity(a,k), file(path)."""

    kind: str
    amplitude: float = 0.0
    wavenumber: int = 1
    path: str = ""

    def canonical(self) -> str:
        if self.kind == "rest":
            return "rest"
        if self.kind == "file":
            return f"file({self.path})"
        return f"{self.kind}({fmt(self.amplitude)}, {self.wavenumber})"


def fmt(value: float) -> str:
    """17-significant-digit decimal form (bit-faithful for doubles)."""
    return format(float(value), ".17g")


def parse_initial_condition(text: str) -> InitialCondition:
    match = _IC_PATTERN.match(text.strip())
    if not match:
        raise ValidationError(f"initial_condition: cannot parse {text!r}")
    kind, args = match.group(1), match.group(2)
    if kind == "rest":
        if args:
            raise ValidationError("initial_condition: rest takes no arguments")
        return InitialCondition(kind="rest")
    if kind == "file":
        if not args or not args.strip():
            raise ValidationError("initial_condition: file requires a path")
        return InitialCondition(kind="file", path=args.strip())
    if kind in ("cosine_density", "sine_velocity"):
        parts = [p.strip() for p in (args or "").split(",")]
        if len(parts) != 2:
            raise ValidationError(
                f"initial_condition: {kind} takes (amplitude, wavenumber)"
            )
        try:
            amplitude = float(parts[0])
            wavenumber = int(parts[1])
        except ValueError as exc:
            raise ValidationError(f"initial_condition: {exc}") from exc
        if wavenumber < 1:
            raise ValidationError("initial_condition: wavenumber must be >= 1")
        if kind == "cosine_density" and 1.0 - abs(amplitude) <= 0.0:
            raise ValidationError(
                f"initial_condition: min(1 + eta0) = {1.0 - abs(amplitude):g} "
                "<= 0 violates positivity"
            )
        return InitialCondition(kind=kind, amplitude=amplitude, wavenumber=wavenumber)
    raise ValidationError(f"initial_condition: unknown form {kind!r}")


@dataclass(frozen=True)
class SolverConfig:
    """Fully resolved run parameters."""

    n_points: int
    scheme: str
    dt: float
    t_max: float
    initial_condition: InitialCondition
    epsilon: float = 0.0
    elliptic_tol: float = 1e-10
    cfl_safety: float = 0.5
    vacuum_threshold: float = 1e-6
    slope_threshold: float = 1e6
    output_stride: int = 10
    output_dir: str = "output"
    dealias_products: bool = True
    snapshot_times: tuple[float, ...] = ()

    def step_options(self) -> StepOptions:
        return StepOptions(
            dt=self.dt,
            epsilon=self.epsilon,
            elliptic_tol=self.elliptic_tol,
            dealias_products=self.dealias_products,
            cfl_safety=self.cfl_safety,
            vacuum_threshold=self.vacuum_threshold,
            slope_threshold=self.slope_threshold,
            observer_stride=self.output_stride,
        )


_REQUIRED_KEYS = ("n_points", "scheme", "dt", "t_max", "initial_condition")
_ALL_KEYS = (
    "n_points",
    "scheme",
    "dt",
    "t_max",
    "initial_condition",
    "epsilon",
    "elliptic_tol",
    "cfl_safety",
    "vacuum_threshold",
    "slope_threshold",
    "output_stride",
    "output_dir",
    "dealias_products",
    "snapshot_times",
)


def _parse_bool(value: str, key: str) -> bool:
    low = value.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValidationError(f"{key}: expected true/false, got {value!r}")


def parse_config(text: str) -> SolverConfig:
    """Parse and validate configuration text into a SolverConfig."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(f"expected 'key = value', got {body!r}", line=lineno)
        key, value = (part.strip() for part in body.split("=", 1))
        if key not in _ALL_KEYS:
            raise ParseError(f"unknown key {key!r}", line=lineno)
        if key in raw:
            raise ParseError(f"duplicate key {key!r}", line=lineno)
        if not value:
            raise ParseError(f"empty value for {key!r}", line=lineno)
        raw[key] = value
    for key in _REQUIRED_KEYS:
        if key not in raw:
            raise ValidationError(f"{key}: required key is missing")

    def number(key: str, conv, default=None):
        if key not in raw:
            return default
        try:
            return conv(raw[key])
        except ValueError as exc:
            raise ValidationError(f"{key}: {exc}") from exc

    n_points = number("n_points", int)
    if n_points % 2 != 0:
        raise ValidationError("n_points must be even")
    if n_points < 8:
        raise ValidationError("n_points must be >= 8")
    scheme = raw["scheme"]
    if scheme not in SCHEMES:
        raise ValidationError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    dt = number("dt", float)
    if dt <= 0.0:
        raise ValidationError("dt must be positive")
    t_max = number("t_max", float)
    if t_max <= 0.0:
        raise ValidationError("t_max must be positive")
    ic = parse_initial_condition(raw["initial_condition"])
    epsilon = number("epsilon", float, 0.0)
    if epsilon < 0.0:
        raise ValidationError("epsilon must be nonnegative")
    elliptic_tol = number("elliptic_tol", float, 1e-10)
    if elliptic_tol <= 0.0:
        raise ValidationError("elliptic_tol must be positive")
    cfl_safety = number("cfl_safety", float, 0.5)
    if not 0.0 < cfl_safety <= 1.0:
        raise ValidationError("cfl_safety must lie in (0, 1]")
    vacuum_threshold = number("vacuum_threshold", float, 1e-6)
    if vacuum_threshold <= 0.0:
        raise ValidationError("vacuum_threshold must be positive")
    slope_threshold = number("slope_threshold", float, 1e6)
    if slope_threshold <= 0.0:
        raise ValidationError("slope_threshold must be positive")
    output_stride = number("output_stride", int, 10)
    if output_stride < 1:
        raise ValidationError("output_stride must be >= 1")
    output_dir = raw.get("output_dir", "output")
    if "dealias_products" in raw:
        dealias_products = _parse_bool(raw["dealias_products"], "dealias_products")
    else:
        dealias_products = scheme == "spectral"
    snapshot_times: tuple[float, ...] = ()
    if "snapshot_times" in raw:
        try:
            snapshot_times = tuple(
                float(p) for p in raw["snapshot_times"].split(",") if p.strip()
            )
        except ValueError as exc:
            raise ValidationError(f"snapshot_times: {exc}") from exc
        if any(t < 0.0 for t in snapshot_times):
            raise ValidationError("snapshot_times must be nonnegative")

    return SolverConfig(
        n_points=n_points,
        scheme=scheme,
        dt=dt,
        t_max=t_max,
        initial_condition=ic,
        epsilon=epsilon,
        elliptic_tol=elliptic_tol,
        cfl_safety=cfl_safety,
        vacuum_threshold=vacuum_threshold,
        slope_threshold=slope_threshold,
        output_stride=output_stride,
        output_dir=output_dir,
        dealias_products=dealias_products,
        snapshot_times=snapshot_times,
    )


def load_config(path: str | Path) -> SolverConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def initial_fields(
    config: SolverConfig, grid: Grid, base_dir: str | Path = "."
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the configured initial condition on a grid."""
    ic = config.initial_condition
    x = grid.points
    if ic.kind == "rest":
        return np.zeros_like(x), np.zeros_like(x)
    if ic.kind == "cosine_density":
        return ic.amplitude * np.cos(ic.wavenumber * x), np.zeros_like(x)
    if ic.kind == "sine_velocity":
        return np.zeros_like(x), ic.amplitude * np.sin(ic.wavenumber * x)
    path = Path(ic.path)
    if not path.is_absolute():
        path = Path(base_dir) / path
    try:
        data = np.loadtxt(path)
    except OSError as exc:
        raise ValidationError(f"initial_condition: cannot read {path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] < 3:
        raise ValidationError(
            "initial_condition: file must have columns x, eta, u"
        )
    if data.shape[0] != grid.n_points:
        raise ValidationError(
            f"initial_condition: file has {data.shape[0]} rows, "
            f"grid has {grid.n_points} points"
        )
    eta, u = data[:, 1], data[:, 2]
    if not np.all(np.isfinite(eta)) or not np.all(np.isfinite(u)):
        raise ValidationError("initial_condition: file contains non-finite values")
    if np.min(1.0 + eta) <= 0.0:
        raise ValidationError("initial_condition: min(1 + eta0) <= 0 in file")
    return eta, u


def initial_state(
    config: SolverConfig, grid: Grid, base_dir: str | Path = "."
) -> PlasmaState:
    eta0, u0 = initial_fields(config, grid, base_dir)
    return PlasmaState(eta=eta0, u=u0, t=0.0)


def format_manifest(config: SolverConfig, stop_reason: str | None = None) -> str:
    """
    Resolved configuration in the config grammar.  Extra run metadata is
    carried in comments so the manifest parses back to the same config.
    """
    lines = ["# coldwave run manifest"]
    if stop_reason is not None:
        lines.append(f"# stop_reason = {stop_reason}")
    for field in fields(SolverConfig):
        value = getattr(config, field.name)
        if field.name == "initial_condition":
            text = value.canonical()
        elif field.name == "snapshot_times":
            if not value:
                continue  # default; omitted keys parse to the same config
            text = ",".join(fmt(t) for t in value)
        elif isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = fmt(value)
        else:
            text = str(value)
        lines.append(f"{field.name} = {text}")
    return "\n".join(lines) + "\n"


def with_output_dir(config: SolverConfig, output_dir: str | None) -> SolverConfig:
    if output_dir is None:
        return config
    return replace(config, output_dir=output_dir)
