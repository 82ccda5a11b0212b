"""Analytic reference objects for the black soliton of the regularized NLS model.

The model i (1 - eps^2 d_xx) u_t + u_xx + 2 (1 - |u|^2) u = 0 arises from
i (1 - mu^2 d_xx) psi_t + psi_xx - 2 |psi|^2 psi = 0 through
psi = e^{-2it} u(t, x / sqrt(1 - 2 mu^2)) and eps = mu / sqrt(1 - 2 mu^2).
Its stationary black soliton is u = tanh(xi).  The stability threshold is
eps0 = (5/8)**(1/4): the weighted pairing (phi', V_phi)_eps = -1 + (8/5) eps^4
changes sign there, where V_phi is the bounded even solution of
(-d_xx + 2 tanh^2 - 2) V_phi = (1 - eps^2 d_xx) sech^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from rnls.grid import ComplexField, Grid


@dataclass(frozen=True)
class DarkSoliton:
    """Traveling depression wave of the cubic defocusing NLS (eps = 0 family)."""

    speed: float

    def __post_init__(self) -> None:
        if not abs(self.speed) < 1.0:
            raise ValueError(f"|speed| must be < 1, got {self.speed}")

    @property
    def amplitude(self) -> float:
        return math.sqrt(1.0 - self.speed**2)


@dataclass(frozen=True)
class ThresholdConstants:
    """Stability threshold in both parametrizations, from the closed forms."""

    eps0: float
    mu0: float
    mu1: float


def threshold_constants() -> ThresholdConstants:
    """eps0 = (5/8)^{1/4}, mu0 = sqrt(sqrt(5)/(sqrt(8)+2 sqrt(5))), mu1 = 1/sqrt(2)."""
    eps0 = (5.0 / 8.0) ** 0.25
    mu0 = math.sqrt(math.sqrt(5.0) / (math.sqrt(8.0) + 2.0 * math.sqrt(5.0)))
    return ThresholdConstants(eps0=eps0, mu0=mu0, mu1=1.0 / math.sqrt(2.0))


def black_soliton(grid: Grid) -> ComplexField:
    """Samples of the stationary profile tanh(xi); odd about the center node."""
    return ComplexField(values=np.tanh(grid.nodes).astype(np.complex128), grid=grid)


def dark_soliton(c: float, t: float, x: float | NDArray) -> complex | NDArray:
    """[gamma tanh(gamma (x - 2 c t)) + i c] e^{-2 i t} with gamma = sqrt(1 - c^2)."""
    gamma = DarkSoliton(speed=float(c)).amplitude
    value = (gamma * np.tanh(gamma * (np.asarray(x) - 2.0 * c * t)) + 1j * c) * np.exp(
        -2j * t
    )
    return complex(value) if np.ndim(x) == 0 else value


def mu_to_eps(mu: float) -> float:
    """eps = mu / sqrt(1 - 2 mu^2), monotone on 0 <= mu < 1/sqrt(2)."""
    if not 0.0 <= mu < 1.0 / math.sqrt(2.0):
        raise ValueError(f"mu must lie in [0, 1/sqrt(2)), got {mu}")
    return mu / math.sqrt(1.0 - 2.0 * mu**2)


def eps_to_mu(eps: float) -> float:
    """Inverse of mu_to_eps: mu = eps / sqrt(1 + 2 eps^2)."""
    if eps < 0.0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    return eps / math.sqrt(1.0 + 2.0 * eps**2)


def dispersion_omega(k: float | NDArray, mu: float) -> float | NDArray:
    """omega(k) = k^2 / (1 + mu^2 k^2); bounded by mu^{-2}."""
    if mu <= 0.0:
        raise ValueError(f"mu must be > 0, got {mu}")
    k = np.asarray(k, dtype=float)
    omega = k**2 / (1.0 + mu**2 * k**2)
    return float(omega) if omega.ndim == 0 else omega


def v_phi_profile(eps: float, xi: float | NDArray) -> float | NDArray:
    """V_phi(xi) = -(1 + 2 eps^2)/2 + (3/2) eps^2 sech^2(xi); even and bounded."""
    if eps < 0.0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    sech2 = 1.0 / np.cosh(np.asarray(xi, dtype=float)) ** 2
    value = -0.5 * (1.0 + 2.0 * eps**2) + 1.5 * eps**2 * sech2
    return float(value) if value.ndim == 0 else value


def v_phi_derivative(eps: float, xi: float | NDArray) -> float | NDArray:
    """V_phi'(xi) = -3 eps^2 sech^2(xi) tanh(xi)."""
    xi = np.asarray(xi, dtype=float)
    value = -3.0 * eps**2 * np.tanh(xi) / np.cosh(xi) ** 2
    return float(value) if value.ndim == 0 else value


def pairing_phi_vphi(eps: float) -> float:
    """Closed form of the weighted pairing (phi', V_phi)_eps = -1 + (8/5) eps^4."""
    if eps < 0.0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    return -1.0 + 1.6 * eps**4


def pairing_phi_vphi_quadrature(
    eps: float,
    half_width: float = 40.0,
    panels: int = 80,
    order: int = 20,
) -> float:
    """Evaluate (phi', V_phi)_eps = int [phi' V_phi + eps^2 phi'' V_phi'] dxi numerically.

    Composite Gauss-Legendre on [-half_width, half_width]; the integrand decays
    like e^{-2|xi|}, so the truncation error at the default width is far below
    the quadrature tolerance.  Serves as an independent check of the closed form.
    """
    if eps < 0.0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    x_ref, w_ref = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(-half_width, half_width, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    xi = (mid[:, None] + half[:, None] * x_ref[None, :]).ravel()
    weights = (half[:, None] * w_ref[None, :]).ravel()

    sech2 = 1.0 / np.cosh(xi) ** 2
    phi_p = sech2
    phi_pp = -2.0 * sech2 * np.tanh(xi)
    integrand = phi_p * v_phi_profile(eps, xi) + eps**2 * phi_pp * v_phi_derivative(
        eps, xi
    )
    return float(np.sum(weights * integrand))
