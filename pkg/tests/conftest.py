"""Shared fixtures: heavy runs and eigensolves reused across test modules."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest

from rnls.evolve import SchemeConfig, run
from rnls.grid import build_grid
from rnls.oracle import FourierSolution, fourier_coefficients
from rnls.spectral import assemble_pencil, solve_pencil

REFERENCE_L = 20.0
REFERENCE_K = 400


@pytest.fixture(scope="session")
def grid_reference():
    """L = 20, K = 400: the resolution every spectral tolerance is calibrated for."""
    return build_grid(REFERENCE_L, REFERENCE_K)


@pytest.fixture(scope="session")
def pencil_solver(grid_reference):
    """Memoized dense eigensolve at the reference resolution, keyed by eps."""

    @lru_cache(maxsize=None)
    def solve(eps: float):
        return solve_pencil(assemble_pencil(eps, grid_reference), tol_unstable=5e-3)

    return solve


@pytest.fixture(scope="session")
def fourier_coeffs_l10():
    """Fourier cosine coefficients of tanh on [-10, 10], 2000 modes."""
    return fourier_coefficients(10.0, 2000)


@pytest.fixture(scope="session")
def fourier_solution_l10(fourier_coeffs_l10):
    """Exact-solution factory on L = 10 reusing the coefficient quadrature."""

    def factory(eps: float) -> FourierSolution:
        n_max = len(fourier_coeffs_l10) - 1
        return FourierSolution(
            half_length=10.0,
            eps=eps,
            coefficients=fourier_coeffs_l10,
            wavenumbers=np.pi * np.arange(n_max + 1) / 20.0,
        )

    return factory


@pytest.fixture(scope="session")
def run_eps05_reference(grid_reference):
    """Nonlinear run at eps = 0.5, a = 0.01, tau = h = 0.05, t in [0, 50]."""
    cfg = SchemeConfig(
        eps=0.5,
        grid=grid_reference,
        tau=grid_reference.h,
        t_final=50.0,
        amp=0.01,
        scheme="nonlinear",
        snapshot_stride=5,
    )
    return run(cfg)


@pytest.fixture(scope="session")
def run_eps05_reference_tau_half(grid_reference):
    """Same physics as run_eps05_reference with the time step halved."""
    cfg = SchemeConfig(
        eps=0.5,
        grid=grid_reference,
        tau=grid_reference.h / 2,
        t_final=50.0,
        amp=0.01,
        scheme="nonlinear",
        snapshot_stride=10,
    )
    return run(cfg)


@pytest.fixture(scope="session")
def run_eps1_reference(grid_reference):
    """Nonlinear run at eps = 1.0, a = 0.01, tau = h = 0.05, t in [0, 10]."""
    cfg = SchemeConfig(
        eps=1.0,
        grid=grid_reference,
        tau=grid_reference.h,
        t_final=10.0,
        amp=0.01,
        scheme="nonlinear",
        snapshot_stride=10,
    )
    return run(cfg)
