"""Ground-state solver for the stationary Gross-Pitaevskii equation.

Finds the normalized condensate orbital phi0 and chemical potential mu0 of

    (-laplacian/2 + V(r) + g*N0*|phi0|^2) phi0 = mu0 phi0,   int |phi0|^2 = 1,

by damped gradient flow on the energy functional with the kinetic part
treated implicitly: each accepted step moves against the residual
preconditioned by (T + alpha)^-1, which is diagonal in the Laplacian
transform basis. The discrete ground state is an exact fixed point of the
update, so the iteration can be driven to very small residuals at O(1) step
size; the state is renormalized after every step.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, ConvergenceError, UnsupportedParameterError
from .grid import (
    FINITE_DIFFERENCE,
    PERIODIC,
    SPECTRAL,
    Grid,
    GridOperator,
    TrapPotential,
    l2_norm,
)


@dataclass(frozen=True)
class PhysicalParams:
    """Contact coupling g >= 0, condensate atom number N0 > 0, and the trap."""

    g: float
    n0: float
    trap: TrapPotential

    def __post_init__(self):
        if self.g < 0:
            raise UnsupportedParameterError("attractive coupling g < 0 is not supported")
        if self.n0 <= 0:
            raise ConfigurationError("condensate number N0 must be positive")

    @classmethod
    def from_scattering_length(cls, a_s, n0, trap):
        """g = 4*pi*a_s in hbar = M = 1 units."""
        return cls(g=4.0 * np.pi * float(a_s), n0=float(n0), trap=trap)

    @property
    def gn(self):
        """Interaction strength g*N0 entering every nonlinear term."""
        return self.g * self.n0


@dataclass(frozen=True)
class SolverOptions:
    step: float = 1.0
    tolerance: float = 1e-10
    max_iterations: int = 1_000_000
    scheme: str | None = None  # None: spectral on periodic grids, FD otherwise

    def __post_init__(self):
        if self.step <= 0 or self.tolerance <= 0 or self.max_iterations < 1:
            raise ConfigurationError("solver options must be positive")


@dataclass(frozen=True)
class CondensateState:
    """Converged condensate orbital with its chemical potential.

    phi0 is stored real and non-negative (the ground state of a repulsive
    condensate is nodeless, so the global phase is fixed once and for all).
    """

    phi0: np.ndarray
    mu0: float
    params: PhysicalParams
    grid: Grid
    residual: float
    scheme: str
    iterations: int = 0


def default_scheme(grid: Grid) -> str:
    return SPECTRAL if grid.boundary == PERIODIC else FINITE_DIFFERENCE


def effective_potential(state: CondensateState) -> np.ndarray:
    """Trap plus mean-field potential V + g*N0*|phi0|^2 on the grid."""
    v = state.params.trap.values(state.grid)
    return v + state.params.gn * np.abs(state.phi0) ** 2


def _normalize(psi, grid):
    return psi / l2_norm(psi, grid)


def _thomas_fermi_guess(v, gn, grid):
    """max(0, (mu_TF - V)/gN)^(1/2), with mu_TF fixed by normalization."""
    lo = float(np.min(v))
    hi = float(np.max(v)) + gn / grid.volume + 1.0
    for _ in range(200):
        mu = 0.5 * (lo + hi)
        mass = grid.weight * float(np.sum(np.maximum(mu - v, 0.0))) / gn
        if mass > 1.0:
            hi = mu
        else:
            lo = mu
    profile = np.sqrt(np.maximum(0.5 * (lo + hi) - v, 0.0) / gn)
    return profile


def _initial_guess(params, grid):
    v = params.trap.values(grid)
    gn = params.gn
    if gn >= 5.0:
        psi = _thomas_fermi_guess(v, gn, grid)
        if l2_norm(psi, grid) > 0:
            return _normalize(psi, grid)
    if params.trap.kind == "harmonic":
        freqs = params.trap.frequencies
        if len(freqs) == 1 and grid.dimension > 1:
            freqs = freqs * grid.dimension
        psi = np.ones(grid.size)
        for w, x in zip(freqs, grid.coordinates):
            psi = psi * np.exp(-0.5 * w * x**2)
        return _normalize(psi, grid)
    if params.trap.kind == "zero":
        return _normalize(np.ones(grid.size), grid)
    return _normalize(np.exp(-(v - np.min(v))), grid)


def solve_ground_state(
    params: PhysicalParams,
    grid: Grid,
    opts: SolverOptions = SolverOptions(),
    energy_trace: list | None = None,
) -> CondensateState:
    """Minimize the GP energy on the unit sphere until the residual is small.

    Returns a :class:`CondensateState` whose residual (L2 norm of
    (H0 + gN|phi0|^2 - mu0) phi0) is at most ``opts.tolerance``. Raises
    :class:`ConvergenceError` if the iteration budget is exhausted or the
    residual stalls above tolerance. ``energy_trace``, if given, collects the
    energy after every accepted iteration (it never increases).
    """
    if params.g < 0:
        raise UnsupportedParameterError("attractive coupling g < 0 is not supported")
    scheme = opts.scheme or default_scheme(grid)
    kinetic = GridOperator(grid, scheme, laplace_coeff=-0.5)
    t_sym = -0.5 * kinetic.laplacian_symbol  # kinetic eigenvalues, >= 0
    v = params.trap.values(grid)
    gn = params.gn
    w = grid.weight

    psi = _initial_guess(params, grid)

    def pieces(p):
        tp = kinetic.apply(p)
        dens = p * p
        veff = v + gn * dens
        hp = tp + veff * p
        mu = w * float(np.dot(p, hp))
        energy = w * float(np.dot(p, tp) + np.sum((v + 0.5 * gn * dens) * dens))
        return tp, veff, hp, mu, energy

    dt = opts.step
    tp, veff, hp, mu, energy = pieces(psi)
    best = np.inf
    stall = 0
    iterations = 0
    res = l2_norm(hp - mu * psi, grid)
    if energy_trace is not None:
        energy_trace.append(energy)

    while res > opts.tolerance:
        if iterations >= opts.max_iterations:
            raise ConvergenceError(
                f"no convergence after {iterations} iterations (residual {res:.3e})",
                residual=res,
                iterations=iterations,
            )
        # shift bounding the linearized operator's diagonal, V + 3 gN rho - mu
        alpha = max(1.0, float(np.max(3.0 * veff - 2.0 * v)) - mu)
        direction = kinetic.inverse_transform(
            kinetic.transform(hp - mu * psi) / (t_sym + alpha)
        ).real
        accepted = False
        for _ in range(40):
            cand = _normalize(psi - dt * direction, grid)
            c_tp, c_veff, c_hp, c_mu, c_energy = pieces(cand)
            if c_energy <= energy + 1e-13 * (abs(energy) + 1.0):
                accepted = True
                break
            dt *= 0.5
        if not accepted:  # at the numerical floor of the energy
            cand, c_tp, c_veff, c_hp, c_mu, c_energy = psi, tp, veff, hp, mu, energy
        psi, tp, veff, hp, mu, energy = cand, c_tp, c_veff, c_hp, c_mu, c_energy
        dt = min(opts.step, dt * 1.5)
        res = l2_norm(hp - mu * psi, grid)
        iterations += 1
        if energy_trace is not None:
            energy_trace.append(energy)
        if res < 0.999 * best:
            best = res
            stall = 0
        else:
            stall += 1
            if stall > 500:
                raise ConvergenceError(
                    f"residual stalled at {res:.3e} after {iterations} iterations",
                    residual=res,
                    iterations=iterations,
                )

    if float(np.sum(psi)) < 0:
        psi = -psi
    state = CondensateState(
        phi0=psi,
        mu0=mu,
        params=params,
        grid=grid,
        residual=res,
        scheme=scheme,
        iterations=iterations,
    )
    return replace(state, residual=gp_residual(state))


def gp_residual(state: CondensateState) -> float:
    """L2 norm of (-laplacian/2 + V + gN|phi0|^2 - mu0) phi0."""
    op = GridOperator(
        state.grid,
        state.scheme,
        laplace_coeff=-0.5,
        diagonal=effective_potential(state),
    )
    return l2_norm(op.apply(state.phi0) - state.mu0 * state.phi0, state.grid)


def condensate_energy(state: CondensateState) -> float:
    """GP energy per particle of the stored orbital."""
    grid = state.grid
    kinetic = GridOperator(grid, state.scheme, laplace_coeff=-0.5)
    dens = np.abs(state.phi0) ** 2
    v = state.params.trap.values(grid)
    return grid.weight * float(
        np.real(np.vdot(state.phi0, kinetic.apply(state.phi0)))
        + np.sum((v + 0.5 * state.params.gn * dens) * dens)
    )
