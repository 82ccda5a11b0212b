import numpy as np
import pytest

from rnls.grid import (
    BandedOperator,
    ComplexField,
    SolverError,
    build_grid,
    build_neumann_laplacian,
    operator_combination,
    solve_banded,
    trapezoid_weights,
)


class TestBuildGrid:
    def test_paper_resolution(self):
        grid = build_grid(10.0, 200)
        assert grid.h == pytest.approx(0.05, abs=0)
        assert grid.size == 401
        assert grid.nodes[0] == -10.0
        assert grid.nodes[-1] == 10.0
        assert grid.nodes[grid.center_index] == 0.0

    def test_tiny_grid_nodes(self):
        grid = build_grid(1.0, 2)
        assert np.array_equal(grid.nodes, [-1.0, -0.5, 0.0, 0.5, 1.0])

    def test_wide_resolution(self):
        grid = build_grid(20.0, 400)
        assert grid.h == pytest.approx(0.05, abs=0)
        assert grid.size == 801

    def test_spacing_constant_and_increasing(self):
        grid = build_grid(7.3, 57)
        steps = np.diff(grid.nodes)
        assert np.all(steps > 0)
        assert np.max(np.abs(steps - grid.h)) < 1e-14

    @pytest.mark.parametrize("L,K", [(0.0, 10), (-1.0, 10), (5.0, 1), (5.0, 0)])
    def test_rejects_bad_arguments(self, L, K):
        with pytest.raises(ValueError):
            build_grid(L, K)


class TestComplexField:
    def test_rejects_wrong_length(self):
        grid = build_grid(1.0, 2)
        with pytest.raises(ValueError):
            ComplexField(values=np.zeros(3, dtype=complex), grid=grid)

    def test_rejects_non_finite(self):
        grid = build_grid(1.0, 2)
        values = np.zeros(5, dtype=complex)
        values[2] = np.nan
        with pytest.raises(ValueError):
            ComplexField(values=values, grid=grid)


class TestNeumannLaplacian:
    def test_annihilates_constants_exactly(self):
        grid = build_grid(10.0, 200)
        lap = build_neumann_laplacian(grid)
        assert np.all(lap.apply(np.ones(grid.size)) == 0.0)

    def test_exact_on_quadratics_in_interior(self):
        grid = build_grid(5.0, 100)
        lap = build_neumann_laplacian(grid)
        result = lap.apply(grid.nodes**2)
        assert np.max(np.abs(result[1:-1] - 2.0)) < 1e-9

    def test_second_order_on_tanh(self):
        errors = {}
        for K in (200, 400):
            grid = build_grid(10.0, K)
            lap = build_neumann_laplacian(grid)
            xi = grid.nodes
            exact = -2.0 * np.tanh(xi) / np.cosh(xi) ** 2
            errors[K] = np.max(np.abs(lap.apply(np.tanh(xi)) - exact)[1:-1])
        assert errors[200] < 5 * (10.0 / 200) ** 2
        assert errors[200] / errors[400] == pytest.approx(4.0, abs=0.5)

    def test_boundary_rows_match_ghost_elimination(self):
        grid = build_grid(2.0, 4)
        lap = build_neumann_laplacian(grid)
        u = np.arange(grid.size, dtype=float)
        h2 = grid.h**2
        applied = lap.apply(u)
        assert applied[0] == pytest.approx(2 * (u[1] - u[0]) / h2)
        assert applied[-1] == pytest.approx(2 * (u[-2] - u[-1]) / h2)

    def test_symmetric_on_interior_supported_fields(self):
        rng = np.random.default_rng(7)
        grid = build_grid(5.0, 50)
        lap = build_neumann_laplacian(grid)
        f = rng.normal(size=grid.size)
        g = rng.normal(size=grid.size)
        f[0] = f[-1] = g[0] = g[-1] = 0.0
        lhs = np.dot(f, lap.apply(g))
        rhs = np.dot(lap.apply(f), g)
        assert abs(lhs - rhs) < 1e-12 * max(abs(lhs), 1.0)

    def test_selfadjoint_under_trapezoid_weights(self):
        # the weighting that restores symmetry of the Neumann rows
        rng = np.random.default_rng(8)
        grid = build_grid(5.0, 50)
        lap = build_neumann_laplacian(grid)
        w = trapezoid_weights(grid.size)
        f = rng.normal(size=grid.size)
        g = rng.normal(size=grid.size)
        lhs = np.dot(w * f, lap.apply(g))
        rhs = np.dot(w * lap.apply(f), g)
        assert abs(lhs - rhs) < 1e-9


class TestSolveBanded:
    def test_identity_returns_rhs(self):
        grid = build_grid(5.0, 20)
        n = grid.size
        identity = BandedOperator(lower=np.zeros(n - 1), diag=np.ones(n), upper=np.zeros(n - 1))
        rhs = np.linspace(-1, 1, n) + 1j * np.linspace(1, -1, n)
        assert np.array_equal(solve_banded(identity, rhs), rhs)

    def test_weight_operator_round_trip(self):
        rng = np.random.default_rng(11)
        grid = build_grid(10.0, 200)
        lap = build_neumann_laplacian(grid)
        op = operator_combination(1.0, -0.5**2, lap)
        f = rng.normal(size=grid.size) + 1j * rng.normal(size=grid.size)
        recovered = solve_banded(op, op.apply(f))
        assert np.max(np.abs(recovered - f)) < 10 * 1e-12 * np.max(np.abs(f))

    def test_crank_nicolson_operator_residual(self):
        grid = build_grid(10.0, 200)
        lap = build_neumann_laplacian(grid)
        eps, tau = 0.5, 0.05
        op = operator_combination(1.0, -(eps**2) - 0.5j * tau, lap)
        rhs = np.tanh(grid.nodes) + 0.01j / np.cosh(grid.nodes) ** 2
        x = solve_banded(op, rhs)
        residual = np.max(np.abs(op.apply(x) - rhs))
        assert residual <= 1e-12 * np.max(np.abs(rhs))

    def test_weight_operator_diagonally_dominant(self):
        for eps in (0.25, 0.5, 1.0):
            grid = build_grid(10.0, 100)
            lap = build_neumann_laplacian(grid)
            op = operator_combination(1.0, -(eps**2), lap)
            off = np.zeros(grid.size)
            off[:-1] += np.abs(op.upper)
            off[1:] += np.abs(op.lower)
            assert np.all(np.abs(op.diag) > off)

    def test_singular_operator_reported(self):
        n = 11
        zero = BandedOperator(lower=np.zeros(n - 1), diag=np.zeros(n), upper=np.zeros(n - 1))
        with pytest.raises(SolverError):
            solve_banded(zero, np.ones(n))

    def test_field_in_field_out(self):
        grid = build_grid(5.0, 20)
        lap = build_neumann_laplacian(grid)
        op = operator_combination(1.0, -0.25, lap)
        field = ComplexField(values=np.cos(grid.nodes).astype(complex), grid=grid)
        result = solve_banded(op, field)
        assert isinstance(result, ComplexField)
        assert result.grid is grid
