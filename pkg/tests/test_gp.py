import numpy as np
import pytest

from bdgz import (
    ConvergenceError,
    Grid,
    PhysicalParams,
    SolverOptions,
    TrapPotential,
    UnsupportedParameterError,
    condensate_energy,
    gp_residual,
    inner_product,
    solve_ground_state,
)
from bdgz.gp import CondensateState
from dataclasses import replace


def homogeneous_setup(n=64, length=5.0, g=1.0, n0=10.0):
    grid = Grid(points_per_axis=(n,), box_lengths=(length,), boundary="periodic")
    params = PhysicalParams(g=g, n0=n0, trap=TrapPotential.zero())
    return grid, params


def trap_setup(n=128, length=16.0, g=1.0, n0=100.0):
    grid = Grid(points_per_axis=(n,), box_lengths=(length,), boundary="periodic")
    params = PhysicalParams(g=g, n0=n0, trap=TrapPotential.harmonic(1.0))
    return grid, params


def test_homogeneous_exact_solution():
    grid, params = homogeneous_setup()
    state = solve_ground_state(params, grid)
    assert state.mu0 == pytest.approx(params.gn / grid.volume, rel=1e-13)
    assert np.max(np.abs(state.phi0 - 1.0 / np.sqrt(grid.volume))) < 1e-12
    assert state.residual <= 1e-10


def test_ideal_gas_oscillator_ground_state_1d():
    grid = Grid(points_per_axis=(128,), box_lengths=(20.0,), boundary="periodic")
    params = PhysicalParams(g=0.0, n0=1.0, trap=TrapPotential.harmonic(1.0))
    state = solve_ground_state(params, grid)
    assert state.mu0 == pytest.approx(0.5, abs=1e-10)


def test_ideal_gas_oscillator_ground_state_2d():
    grid = Grid(points_per_axis=(48, 48), box_lengths=(14.0, 14.0), boundary="periodic")
    params = PhysicalParams(g=0.0, n0=1.0, trap=TrapPotential.harmonic(1.0))
    state = solve_ground_state(params, grid, SolverOptions(tolerance=1e-9))
    assert state.mu0 == pytest.approx(1.0, abs=1e-8)


def test_mu0_against_fine_grid_oracle():
    # oracle: identical equation on a 4x finer grid with 10x tighter tolerance
    grid, params = trap_setup(n=128)
    state = solve_ground_state(params, grid, SolverOptions(tolerance=1e-10))
    fine_grid = Grid(points_per_axis=(512,), box_lengths=(16.0,), boundary="periodic")
    fine = solve_ground_state(params, fine_grid, SolverOptions(tolerance=1e-11))
    assert state.mu0 == pytest.approx(fine.mu0, rel=1e-6)


def test_normalization_and_nodelessness():
    grid, params = trap_setup()
    state = solve_ground_state(params, grid)
    assert inner_product(state.phi0, state.phi0, grid).real == pytest.approx(1.0, abs=1e-12)
    assert np.min(state.phi0) >= -1e-12 * np.max(state.phi0)


def test_variational_consistency():
    # recompute mu0 = <phi|H0|phi> + gN int |phi|^4 from scratch
    from bdgz import build_laplacian

    grid, params = trap_setup(n0=10.0)
    state = solve_ground_state(params, grid)
    lap = build_laplacian(grid, state.scheme)
    h0_phi = -0.5 * lap.apply(state.phi0) + params.trap.values(grid) * state.phi0
    mu_recomputed = inner_product(state.phi0, h0_phi, grid).real + params.gn * (
        grid.weight * float(np.sum(np.abs(state.phi0) ** 4))
    )
    assert state.mu0 == pytest.approx(mu_recomputed, abs=1e-12)
    # and the energy functional relation E = mu0 - (gN/2) int |phi|^4
    quartic = grid.weight * float(np.sum(np.abs(state.phi0) ** 4))
    assert condensate_energy(state) == pytest.approx(
        state.mu0 - 0.5 * params.gn * quartic, abs=1e-12
    )


def test_energy_monotone_over_accepted_iterations():
    grid, params = trap_setup(n0=10.0)
    trace = []
    solve_ground_state(params, grid, SolverOptions(tolerance=1e-10), energy_trace=trace)
    energies = np.array(trace)
    assert np.all(np.diff(energies) <= 1e-12 * (np.abs(energies[:-1]) + 1.0))


def test_gp_residual_zero_for_exact_solution():
    grid, params = homogeneous_setup()
    state = solve_ground_state(params, grid)
    assert gp_residual(state) < 1e-12


def test_gp_residual_oscillator_within_discretization():
    grid = Grid(points_per_axis=(128,), box_lengths=(20.0,), boundary="periodic")
    params = PhysicalParams(g=0.0, n0=1.0, trap=TrapPotential.harmonic(1.0))
    x = grid.coordinates[0]
    phi = np.pi**-0.25 * np.exp(-0.5 * x**2)
    phi = phi / np.sqrt(inner_product(phi, phi, grid).real)
    state = CondensateState(
        phi0=phi, mu0=0.5, params=params, grid=grid, residual=0.0, scheme="spectral"
    )
    assert gp_residual(state) < 1e-10  # spectral accuracy of the exact Gaussian


def test_gp_residual_linear_in_perturbation():
    grid, params = trap_setup(n0=10.0)
    state = solve_ground_state(params, grid)
    rng = np.random.RandomState(5)
    delta = rng.randn(grid.size)
    delta /= np.sqrt(inner_product(delta, delta, grid).real)
    res = []
    eps_values = (1e-6, 2e-6, 4e-6)
    for eps in eps_values:
        perturbed = replace(state, phi0=state.phi0 + eps * delta)
        res.append(gp_residual(perturbed))
    ratios = np.diff(res) / np.diff(eps_values)
    assert ratios[0] == pytest.approx(ratios[1], rel=1e-2)


def test_negative_g_rejected():
    with pytest.raises(UnsupportedParameterError):
        PhysicalParams(g=-1.0, n0=1.0, trap=TrapPotential.zero())


def test_convergence_error_carries_residual():
    grid, params = trap_setup()
    with pytest.raises(ConvergenceError) as err:
        solve_ground_state(params, grid, SolverOptions(tolerance=1e-14, max_iterations=3))
    assert err.value.residual is not None and err.value.residual > 0


def test_hard_wall_solver():
    grid = Grid(points_per_axis=(127,), box_lengths=(16.0,), boundary="hard_wall")
    params = PhysicalParams(g=1.0, n0=100.0, trap=TrapPotential.harmonic(1.0))
    state = solve_ground_state(params, grid)
    assert state.residual <= 1e-10
    assert state.scheme == "finite_difference_2nd"


def test_scattering_length_conversion():
    params = PhysicalParams.from_scattering_length(0.25 / np.pi, 3.0, TrapPotential.zero())
    assert params.g == pytest.approx(1.0)
    assert params.gn == pytest.approx(3.0)
