import numpy as np
import pytest
from scipy.integrate import quad

from rnls.conserved import (
    conserved_log,
    conserved_perturbation,
    energy,
    mass,
    momentum,
    semidiscrete_energy,
    wall_activity,
)
from rnls.evolve import SchemeConfig, initial_condition, run
from rnls.grid import ComplexField, build_grid
from rnls.soliton import black_soliton


def _unit_background(grid, phase=0.0):
    return ComplexField(
        values=np.full(grid.size, np.exp(1j * phase), dtype=complex), grid=grid
    )


def _smooth_bump(grid, shift=1.0):
    # non-symmetric compactly-concentrated perturbation; no accidental parity
    xi = grid.nodes
    return ComplexField(
        values=(0.1 + 0.05j) * np.exp(-((xi - shift) ** 2)) * (1 + 0.3 * np.cos(xi)),
        grid=grid,
    )


class TestPointValues:
    def test_unit_background_zeroes_exactly(self):
        grid = build_grid(10.0, 100)
        u = _unit_background(grid)
        assert energy(u) == 0.0
        assert mass(u, 0.5) == 0.0
        assert momentum(u, 0.5) == 0.0

    def test_rotated_unit_background_zeroes(self):
        # |e^{i phase}| carries one ulp of roundoff into (1 - |u|^2)^2
        grid = build_grid(10.0, 100)
        u = _unit_background(grid, phase=0.7)
        assert abs(energy(u)) < 1e-25
        assert abs(mass(u, 0.5)) < 1e-12
        assert momentum(u, 0.5) == pytest.approx(0.0, abs=1e-14)

    def test_real_field_momentum_exactly_zero(self):
        grid = build_grid(20.0, 400)
        phi = black_soliton(grid)
        assert momentum(phi, 0.5) == 0.0
        assert momentum(phi, 1.0) == 0.0

    def test_soliton_energy_matches_quadrature_oracle(self):
        grid = build_grid(20.0, 400)
        oracle = quad(lambda x: 2.0 / np.cosh(x) ** 4, -20.0, 20.0, epsabs=1e-13)[0]
        assert abs(energy(black_soliton(grid)) - oracle) < grid.h**2

    @pytest.mark.parametrize("eps", [0.5, 1.0])
    def test_soliton_mass_matches_quadrature_oracle(self, eps):
        grid = build_grid(20.0, 400)
        oracle = quad(
            lambda x: eps**2 / np.cosh(x) ** 4 + (np.tanh(x) ** 2 - 1.0),
            -20.0,
            20.0,
            epsabs=1e-13,
        )[0]
        assert abs(mass(black_soliton(grid), eps) - oracle) < grid.h**2

    def test_gauge_invariance(self):
        grid = build_grid(10.0, 200)
        base = initial_condition(grid, 0.05)
        rotated = ComplexField(values=np.exp(0.9j) * base.values, grid=grid)
        assert abs(energy(rotated) - energy(base)) < 1e-12 * (1 + abs(energy(base)))
        for eps in (0.5, 1.0):
            assert abs(momentum(rotated, eps) - momentum(base, eps)) < 1e-12
            assert abs(mass(rotated, eps) - mass(base, eps)) < 1e-12

    def test_momentum_imag_guard_raises(self):
        grid = build_grid(10.0, 100)
        with pytest.raises(ValueError):
            momentum(initial_condition(grid, 0.05), 0.5, im_tol=-1.0)


class TestPerturbationForms:
    def test_zero_perturbation(self):
        grid = build_grid(10.0, 100)
        zero = ComplexField(values=np.zeros(grid.size, dtype=complex), grid=grid)
        assert conserved_perturbation(zero, 0.5) == (0.0, 0.0, 0.0)

    @pytest.mark.parametrize("eps", [0.5, 1.0])
    def test_consistency_with_full_field_differences(self, eps):
        # E(phi + v) - E(phi) = E_hat(v) etc.; discrete agreement is O(h^2)
        diffs = {}
        for K in (200, 400):
            grid = build_grid(10.0, K)
            v = _smooth_bump(grid)
            phi = black_soliton(grid)
            full = ComplexField(values=phi.values + v.values, grid=grid)
            e_hat, p_hat, m_hat = conserved_perturbation(v, eps)
            diffs[K] = (
                abs((energy(full) - energy(phi)) - e_hat),
                abs((momentum(full, eps) - momentum(phi, eps)) - p_hat),
                abs((mass(full, eps) - mass(phi, eps)) - m_hat),
            )
        h200 = 10.0 / 200
        for which in range(3):
            assert diffs[200][which] < 0.2 * h200**2
            # second-order agreement: quartering under h-halving, with slack
            assert diffs[200][which] > 2.5 * diffs[400][which]


@pytest.fixture(scope="module")
def pre_wall_run():
    # radiation reaches the walls around t ~ L / 2; stay well inside
    grid = build_grid(20.0, 400)
    cfg = SchemeConfig(
        eps=0.5, grid=grid, tau=grid.h, t_final=5.0, amp=0.01, snapshot_stride=2
    )
    return run(cfg)


class TestDriftAlongRuns:
    def test_conserved_before_radiation_hits_walls(self, pre_wall_run):
        log = conserved_log(pre_wall_run)
        assert np.max(np.abs(log.energy_drift)) < 1e-4 * abs(log.energy_values[0])
        assert np.max(np.abs(log.momentum_drift)) < 1.5e-3 * abs(log.momentum_values[0])
        assert np.max(np.abs(log.mass_drift)) < 1e-4 * abs(log.mass_values[0])
        assert np.max(log.wall) < 1e-5

    def test_log_bookkeeping(self, pre_wall_run):
        log = conserved_log(pre_wall_run)
        assert log.energy_drift[0] == 0.0
        assert log.momentum_drift[0] == 0.0
        assert log.mass_drift[0] == 0.0
        assert len(log.times) == len(pre_wall_run.fields)
        assert np.all(np.isfinite(log.energy_values))

    def test_semidiscrete_energy_is_tighter_invariant(self, pre_wall_run):
        values = [semidiscrete_energy(f) for f in pre_wall_run.fields]
        drift = max(abs(v - values[0]) for v in values)
        assert drift < 1e-6 * abs(values[0])

    def test_wall_activity_detects_reflection(self):
        grid = build_grid(10.0, 100)
        quiet = black_soliton(grid)
        assert wall_activity(quiet) < 1e-8
        noisy = ComplexField(values=quiet.values + 0.05j, grid=grid)
        assert wall_activity(noisy) > 1e-3
