"""
Periodic spatial discretization on the length-2*pi torus.

Collocation points, differentiation (spectral or 2nd-order finite
differences), Gaussian smoothing, quadrature, and discrete Sobolev norms.
Everything downstream builds on these operations.

Transform convention (fixed once, used everywhere): a real field f sampled
at x_j = -pi + j*dx is expanded as f(x) = sum_k c_k exp(i*k*x) with integer
wavenumbers k in {-n/2+1, ..., n/2} and coefficients c_k = FFT(f)_k / n.
Under this convention the discrete Parseval identity reads

    ||f||_{L2}^2 = dx * sum_j f_j^2 = 2*pi * sum_k |c_k|^2,

so e.g. ||cos(x)||_{L2}^2 = pi.  The H^s norm weights |c_k|^2 by
(1 + k^2)^s.  The Nyquist mode n/2 is zeroed in odd-order derivatives.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

Field = np.ndarray
Scheme = Literal["spectral", "finite_difference_2nd"]

SCHEMES = ("spectral", "finite_difference_2nd")

LENGTH = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class Grid:
    """
    Equispaced periodic grid on [-pi, pi).

    Attributes
    ----------
    n_points : int
        Number of collocation points (even, >= 8).
    scheme : str
        'spectral' or 'finite_difference_2nd'; selects how derivatives
        are evaluated.  Norms and smoothing are Fourier-based either way.
    """

    n_points: int
    scheme: Scheme = "spectral"

    def __post_init__(self) -> None:
        if self.n_points % 2 != 0:
            raise ValueError("n_points must be even")
        if self.n_points < 8:
            raise ValueError("n_points must be >= 8")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        n = self.n_points
        dx = LENGTH / n
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "length", LENGTH)
        object.__setattr__(self, "points", -np.pi + dx * np.arange(n))
        # integer wavenumbers for the one-sided (rfft) spectrum: 0..n/2
        object.__setattr__(self, "rfft_k", np.arange(n // 2 + 1, dtype=float))

    def zeros(self) -> Field:
        return np.zeros(self.n_points)


def make_grid(n_points: int, scheme: Scheme = "spectral") -> Grid:
    """Build a periodic grid with x_j = -pi + 2*pi*j/n_points."""
    return Grid(int(n_points), scheme)


def _check_field(grid: Grid, f: Field) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.n_points,):
        raise ValueError(
            f"field has shape {f.shape}, expected ({grid.n_points},)"
        )
    return f


def derivative(grid: Grid, f: Field, order: int = 1) -> Field:
    """
    d^order/dx^order of f, evaluated by the grid scheme.

    Spectral: exact differentiation of the trigonometric interpolant,
    with the Nyquist mode zeroed for odd orders.  Finite differences:
    2nd-order centered stencils with periodic wrap-around.
    """
    if order not in (1, 2, 3, 4):
        raise ValueError("derivative order must be in {1, 2, 3, 4}")
    f = _check_field(grid, f)
    if grid.scheme == "spectral":
        fh = np.fft.rfft(f)
        fh *= (1j * grid.rfft_k) ** order
        if order % 2 == 1:
            fh[-1] = 0.0
        return np.fft.irfft(fh, n=grid.n_points)
    h = grid.dx
    fp1, fm1 = np.roll(f, -1), np.roll(f, 1)
    if order == 1:
        return (fp1 - fm1) / (2.0 * h)
    if order == 2:
        return (fp1 - 2.0 * f + fm1) / h**2
    fp2, fm2 = np.roll(f, -2), np.roll(f, 2)
    if order == 3:
        return (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h**3)
    return (fp2 - 4.0 * fp1 + 6.0 * f - 4.0 * fm1 + fm2) / h**4


def _mode_energies(grid: Grid, f: Field) -> np.ndarray:
    """|c_k|^2 summed over +/-k pairs (one entry per rfft mode)."""
    c = np.fft.rfft(f) / grid.n_points
    e = np.abs(c) ** 2
    e[1:-1] *= 2.0  # interior modes carry a conjugate partner
    return e


def sobolev_norm(grid: Grid, f: Field, s: int = 0) -> float:
    """
    Discrete H^s norm: sqrt(2*pi * sum_k (1 + k^2)^s |c_k|^2).

    s = 0 is the L2 norm; the weight makes the norm nondecreasing in s.
    """
    if s not in (0, 1, 2, 3):
        raise ValueError("Sobolev index s must be in {0, 1, 2, 3}")
    f = _check_field(grid, f)
    weight = (1.0 + grid.rfft_k**2) ** s
    return float(np.sqrt(LENGTH * np.sum(weight * _mode_energies(grid, f))))


def l2_inner(grid: Grid, f: Field, g: Field) -> float:
    """Quadrature inner product dx * sum f*g (exact for trig polynomials)."""
    f = _check_field(grid, f)
    g = _check_field(grid, g)
    return float(grid.dx * np.dot(f, g))


def mollify(grid: Grid, f: Field, epsilon: float) -> Field:
    """
    Gaussian smoothing: multiply mode k by exp(-epsilon^2 * k^2).

    Self-adjoint for l2_inner, commutes with derivative, preserves the
    mean, and tends to the identity mode-wise as epsilon -> 0.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    f = _check_field(grid, f)
    fh = np.fft.rfft(f)
    fh *= np.exp(-(epsilon**2) * grid.rfft_k**2)
    return np.fft.irfft(fh, n=grid.n_points)


def dealias(grid: Grid, f: Field) -> Field:
    """
    Zero all modes with |k| > n_points/3 (the 2/3 rule).  Idempotent.

    Under the finite-difference scheme this is a no-op with a warning:
    there is no spectral product to stabilize.
    """
    f = _check_field(grid, f)
    if grid.scheme != "spectral":
        warnings.warn("dealias is a no-op under the finite-difference scheme")
        return f.copy()
    fh = np.fft.rfft(f)
    fh[grid.rfft_k > grid.n_points / 3.0] = 0.0
    return np.fft.irfft(fh, n=grid.n_points)
