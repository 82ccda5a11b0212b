"""Exact Fourier-cosine-series solution of the linear Neumann problem.

On [-L, L] with u_xi(t, +-L) = 0 and u(0, xi) = tanh(xi), the equation
i (1 - eps^2 d_xx) u_t + u_xx = 0 separates into the cosine modes
cos(k_n xi + k_n L), k_n = pi n / (2 L), each rotating with unit-modulus phase
exp(-i k_n^2 t / (1 + eps^2 k_n^2)):

    u(t, xi) = a_0 / 2 + sum_n a_n exp(-i k_n^2 t / (1 + eps^2 k_n^2))
               cos(k_n xi + k_n L),
    a_n = (1/L) int_{-L}^{L} tanh(xi) cos(k_n xi + k_n L) dxi.

The partial sum is the ground truth against which the finite-difference
solution is measured; its sampling error at the default truncation is orders
of magnitude below the O(h^2 + tau^2) error being studied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import quad

from rnls.grid import ComplexField, Grid
from rnls.evolve import Trajectory

#: Default series length; the coefficients decay below 1e-12 long before this.
DEFAULT_N_MAX = 2000


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested accuracy."""


@dataclass(frozen=True, eq=False)
class FourierSolution:
    """Coefficients and wavenumbers of the truncated exact solution."""

    half_length: float
    eps: float
    coefficients: NDArray[np.float64]
    wavenumbers: NDArray[np.float64]

    @property
    def n_max(self) -> int:
        return len(self.coefficients) - 1


def _oscillatory_integral(L: float, k: float, kind: str, abs_tol: float) -> float:
    """int_{-L}^{L} tanh(xi) {cos,sin}(k xi) dxi by the QUADPACK oscillatory rule."""
    value, abserr, *_ = quad(
        np.tanh,
        -L,
        L,
        weight=kind,
        wvar=k,
        epsabs=abs_tol,
        epsrel=abs_tol,
        limit=400,
        full_output=1,
    )
    if abserr > 1e-9:
        raise QuadratureError(
            f"coefficient quadrature (k={k:.4g}, {kind}) error estimate {abserr:.2e}"
        )
    return value


def fourier_coefficients(
    half_length: float, n_max: int, abs_tol: float = 1e-13
) -> NDArray[np.float64]:
    """Coefficients a_0 .. a_{n_max} by adaptive quadrature, one mode at a time.

    Expanding cos(k_n xi + k_n L) leaves one even and one odd oscillatory
    integral per mode; both are computed (no parity shortcut), so a_0 and the
    even-n coefficients come out at the quadrature noise level.
    """
    if half_length <= 0:
        raise ValueError(f"half_length must be positive, got {half_length}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    L = float(half_length)
    coeffs = np.empty(n_max + 1)
    value, abserr, *_ = quad(np.tanh, -L, L, epsabs=abs_tol, full_output=1)
    if abserr > 1e-9:
        raise QuadratureError(f"a_0 quadrature error estimate {abserr:.2e}")
    coeffs[0] = value / L
    for n in range(1, n_max + 1):
        k = np.pi * n / (2.0 * L)
        cos_part = _oscillatory_integral(L, k, "cos", abs_tol)
        sin_part = _oscillatory_integral(L, k, "sin", abs_tol)
        coeffs[n] = (np.cos(k * L) * cos_part - np.sin(k * L) * sin_part) / L
    return coeffs


def fourier_solution(
    half_length: float,
    eps: float,
    n_max: int = DEFAULT_N_MAX,
    abs_tol: float = 1e-13,
) -> FourierSolution:
    """Build the truncated exact solution for the given regularization."""
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    coeffs = fourier_coefficients(half_length, n_max, abs_tol)
    wavenumbers = np.pi * np.arange(n_max + 1) / (2.0 * half_length)
    return FourierSolution(
        half_length=float(half_length),
        eps=float(eps),
        coefficients=coeffs,
        wavenumbers=wavenumbers,
    )


def evaluate_exact(sol: FourierSolution, t: float, grid: Grid) -> ComplexField:
    """Partial sum with the unit-modulus phase factors, sampled at the grid nodes."""
    if not np.isclose(grid.half_length, sol.half_length, rtol=0, atol=1e-12):
        raise ValueError(
            f"grid half_length {grid.half_length} does not match solution "
            f"half_length {sol.half_length}"
        )
    k = sol.wavenumbers[1:]
    phases = np.exp(-1j * k**2 * t / (1.0 + sol.eps**2 * k**2))
    modes = np.cos(np.outer(k, grid.nodes + sol.half_length))
    values = 0.5 * sol.coefficients[0] + (sol.coefficients[1:] * phases) @ modes
    return ComplexField(values=values, grid=grid)


def error_function(fd: Trajectory, sol: FourierSolution) -> NDArray[np.float64]:
    """Max-norm distance between a linear-scheme trajectory and the exact solution.

    Returns an array of rows (t, error), one per stored snapshot.
    """
    cfg = fd.config
    if cfg.scheme != "linear":
        raise ValueError("error_function requires a linear-scheme trajectory")
    if abs(cfg.eps - sol.eps) > 1e-12:
        raise ValueError(f"eps mismatch: trajectory {cfg.eps}, solution {sol.eps}")
    if abs(cfg.grid.half_length - sol.half_length) > 1e-12:
        raise ValueError(
            f"half_length mismatch: trajectory {cfg.grid.half_length}, "
            f"solution {sol.half_length}"
        )
    rows = np.empty((len(fd.times), 2))
    for i, (t, snap) in enumerate(zip(fd.times, fd.fields)):
        exact = evaluate_exact(sol, float(t), cfg.grid)
        rows[i] = (t, np.max(np.abs(snap.values - exact.values)))
    return rows
