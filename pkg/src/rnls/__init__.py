"""Numerical laboratory for the black soliton of the regularized defocusing NLS equation

    i (1 - eps^2 d_xx) u_t + u_xx + 2 (1 - |u|^2) u = 0,   |u| -> 1 as |x| -> oo.

The package provides Crank-Nicolson time evolution on a Neumann-truncated
domain, an exact Fourier-series reference solution for the linear problem,
energy/momentum/mass monitoring, and a spectral stability analyzer that
locates the instability threshold eps0 = (5/8)**(1/4) of the black soliton.
"""

from rnls.grid import (
    BandedOperator,
    ComplexField,
    Grid,
    SolverError,
    build_grid,
    build_neumann_laplacian,
    operator_combination,
    solve_banded,
    weighted_quadratic_form,
)
from rnls.soliton import (
    ThresholdConstants,
    black_soliton,
    dark_soliton,
    dispersion_omega,
    eps_to_mu,
    mu_to_eps,
    pairing_phi_vphi,
    pairing_phi_vphi_quadrature,
    threshold_constants,
    v_phi_profile,
)
from rnls.evolve import (
    BlowUpError,
    SchemeConfig,
    Trajectory,
    initial_condition,
    run,
    step_linear,
    step_nonlinear,
)
from rnls.oracle import (
    FourierSolution,
    QuadratureError,
    error_function,
    evaluate_exact,
    fourier_coefficients,
    fourier_solution,
)
from rnls.conserved import (
    ConservedLog,
    conserved_log,
    conserved_perturbation,
    energy,
    mass,
    momentum,
    semidiscrete_energy,
    wall_activity,
)
from rnls.spectral import (
    EssentialSpectrum,
    LinearizedPencil,
    SpectralReport,
    SpectrumInterval,
    ThresholdResult,
    assemble_pencil,
    essential_spectrum,
    find_threshold,
    lplus_continuous_spectrum,
    solve_pencil,
    verify_vphi_residual,
)

__version__ = "0.1.0"

__all__ = [
    "BandedOperator",
    "BlowUpError",
    "ComplexField",
    "ConservedLog",
    "EssentialSpectrum",
    "FourierSolution",
    "Grid",
    "LinearizedPencil",
    "QuadratureError",
    "SchemeConfig",
    "SolverError",
    "SpectralReport",
    "SpectrumInterval",
    "ThresholdConstants",
    "ThresholdResult",
    "Trajectory",
    "assemble_pencil",
    "black_soliton",
    "build_grid",
    "build_neumann_laplacian",
    "conserved_log",
    "conserved_perturbation",
    "dark_soliton",
    "dispersion_omega",
    "energy",
    "eps_to_mu",
    "error_function",
    "essential_spectrum",
    "evaluate_exact",
    "find_threshold",
    "fourier_coefficients",
    "fourier_solution",
    "initial_condition",
    "lplus_continuous_spectrum",
    "mass",
    "momentum",
    "mu_to_eps",
    "operator_combination",
    "pairing_phi_vphi",
    "pairing_phi_vphi_quadrature",
    "run",
    "semidiscrete_energy",
    "solve_banded",
    "solve_pencil",
    "step_linear",
    "step_nonlinear",
    "threshold_constants",
    "v_phi_profile",
    "verify_vphi_residual",
    "wall_activity",
    "weighted_quadratic_form",
]
