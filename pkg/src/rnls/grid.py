"""Uniform spatial grid, Neumann second-difference operator, and banded solves.

The domain [-L, L] is discretized with 2K+1 equally spaced nodes
xi_k = (k - K) h, h = L/K (0-based k).  The second derivative is approximated
by the tridiagonal matrix A_N whose interior rows are the standard central
difference (u_{k+1} - 2 u_k + u_{k-1}) / h^2 and whose first and last rows are
the doubled one-sided rows 2 (u_1 - u_0) / h^2 and 2 (u_{n-2} - u_{n-1}) / h^2
obtained by eliminating a ghost node under u'(+-L) = 0.

A_N annihilates constants exactly in every row.  It is self-adjoint with
respect to the trapezoidal node weights (1/2, 1, ..., 1, 1/2); with the plain
unit weights the two boundary rows break symmetry, so symmetry should only be
relied on for fields vanishing at the walls.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

#: Relative residual accepted from a banded solve before it is reported as
#: ill-conditioned.
TOL_SOLVE = 1e-12


class SolverError(RuntimeError):
    """A banded linear solve failed or left an unacceptable residual."""


@dataclass(frozen=True)
class Grid:
    """Uniform mesh on [-half_length, half_length] with 2*half_intervals + 1 nodes.

    Grids compare equal iff (half_length, half_intervals) agree.
    """

    half_length: float
    half_intervals: int
    h: float = field(init=False, compare=False)
    nodes: NDArray[np.float64] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not np.isfinite(self.half_length) or self.half_length <= 0:
            raise ValueError(f"half_length must be positive, got {self.half_length}")
        if self.half_intervals < 2:
            raise ValueError(f"half_intervals must be >= 2, got {self.half_intervals}")
        h = self.half_length / self.half_intervals
        k = np.arange(2 * self.half_intervals + 1)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "nodes", (k - self.half_intervals) * h)

    @property
    def size(self) -> int:
        return 2 * self.half_intervals + 1

    @property
    def center_index(self) -> int:
        return self.half_intervals


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex nodal values of u(t, .) on a Grid."""

    values: NDArray[np.complex128]
    grid: Grid

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128)
        object.__setattr__(self, "values", values)
        if values.shape != (self.grid.size,):
            raise ValueError(
                f"field has {values.shape} values for a grid of {self.grid.size} nodes"
            )
        if not np.all(np.isfinite(values.real)) or not np.all(np.isfinite(values.imag)):
            raise ValueError("field contains non-finite values")


@dataclass(frozen=True, eq=False)
class BandedOperator:
    """Tridiagonal operator stored as (lower, diag, upper) bands.

    lower has length n-1 and holds entries (k+1, k); upper holds (k, k+1).
    Real or complex bands are allowed.
    """

    lower: NDArray
    diag: NDArray
    upper: NDArray

    def __post_init__(self) -> None:
        n = len(self.diag)
        if len(self.lower) != n - 1 or len(self.upper) != n - 1:
            raise ValueError("band lengths must be (n-1, n, n-1)")

    @property
    def size(self) -> int:
        return len(self.diag)

    def apply(self, values: NDArray) -> NDArray:
        """Tridiagonal matrix-vector product."""
        out = self.diag * values
        out[:-1] += self.upper * values[1:]
        out[1:] += self.lower * values[:-1]
        return out

    def to_dense(self) -> NDArray:
        dtype = np.result_type(self.lower, self.diag, self.upper)
        dense = np.zeros((self.size, self.size), dtype=dtype)
        np.fill_diagonal(dense, self.diag)
        dense[np.arange(self.size - 1), np.arange(1, self.size)] = self.upper
        dense[np.arange(1, self.size), np.arange(self.size - 1)] = self.lower
        return dense


def build_grid(half_length: float, half_intervals: int) -> Grid:
    """Build the uniform grid with nodes (k - K) h, h = half_length / half_intervals."""
    return Grid(float(half_length), int(half_intervals))


def build_neumann_laplacian(grid: Grid) -> BandedOperator:
    """Second-difference operator with doubled one-sided Neumann rows at the walls."""
    n = grid.size
    inv_h2 = 1.0 / grid.h**2
    lower = np.full(n - 1, inv_h2)
    diag = np.full(n, -2.0 * inv_h2)
    upper = np.full(n - 1, inv_h2)
    upper[0] = 2.0 * inv_h2
    lower[-1] = 2.0 * inv_h2
    return BandedOperator(lower=lower, diag=diag, upper=upper)


def operator_combination(
    identity_coeff: complex,
    laplacian_coeff: complex,
    laplacian: BandedOperator,
    extra_diagonal: NDArray | None = None,
) -> BandedOperator:
    """Assemble c0*I + c1*A_N + diag(extra) as a tridiagonal operator."""
    diag = identity_coeff + laplacian_coeff * laplacian.diag
    if extra_diagonal is not None:
        diag = diag + extra_diagonal
    return BandedOperator(
        lower=laplacian_coeff * laplacian.lower,
        diag=diag,
        upper=laplacian_coeff * laplacian.upper,
    )


def solve_banded(
    op: BandedOperator,
    rhs: NDArray | ComplexField,
    tol: float = TOL_SOLVE,
) -> NDArray | ComplexField:
    """Solve op @ x = rhs by banded LU with partial pivoting.

    The solution is accepted only if ||op x - rhs||_inf <= tol * ||rhs||_inf;
    otherwise (or on a singular factorization) SolverError is raised.
    Accepts either a raw array or a ComplexField and returns the same kind.
    """
    wrap = isinstance(rhs, ComplexField)
    b = rhs.values if wrap else np.asarray(rhs)
    n = op.size
    ab = np.zeros((3, n), dtype=np.result_type(op.diag, b, np.complex128))
    ab[0, 1:] = op.upper
    ab[1, :] = op.diag
    ab[2, :-1] = op.lower
    try:
        x = scipy.linalg.solve_banded((1, 1), ab, b)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"banded solve failed: {exc}") from exc
    residual = np.max(np.abs(op.apply(x) - b))
    scale = max(np.max(np.abs(b)), 1e-300)
    if not residual <= tol * scale:
        raise SolverError(
            f"banded solve residual {residual:.3e} exceeds {tol:.1e} * ||rhs||_inf"
        )
    return ComplexField(values=x, grid=rhs.grid) if wrap else x


def trapezoid_weights(n: int) -> NDArray[np.float64]:
    """Node weights (1/2, 1, ..., 1, 1/2); the quadrature rule used throughout."""
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    return w


def weighted_quadratic_form(
    values: NDArray,
    laplacian: BandedOperator,
    eps: float,
    trapezoid: bool = False,
) -> float:
    """Quadratic form sum_k conj(u_k) [(1 - eps^2 A_N) u]_k.

    With trapezoid=True the boundary terms get weight 1/2, which makes the
    form an exact invariant of the linear Crank-Nicolson step (A_N is
    self-adjoint in that weighting); the plain sum is exactly invariant only
    while the walls stay quiescent.
    """
    bu = values - eps**2 * laplacian.apply(values)
    terms = np.conj(values) * bu
    if trapezoid:
        terms = trapezoid_weights(len(values)) * terms
    return float(np.sum(terms).real)
