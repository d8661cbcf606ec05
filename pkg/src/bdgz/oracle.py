"""Independent cross-checks: closed-form homogeneous results and a direct
grid-level solver for the linearized condensate equations.

Nothing here shares matrix assembly with the basis-expansion pipeline; the
point of this module is that a bug in one route cannot hide in the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConfigurationError, NumericalError
from .gp import CondensateState
from .grid import PERIODIC, Grid, GridOperator


def _ksq(k) -> float:
    k = np.atleast_1d(np.asarray(k, dtype=float))
    return float(np.dot(k, k))


def dispersion(k, gn: float) -> float:
    """Bogoliubov frequency omega_k = sqrt((k^2/2 + gn)^2 - gn^2)."""
    eps = 0.5 * _ksq(k)
    return float(np.sqrt((eps + gn) ** 2 - gn**2))


def analytic_amplitudes(k, gn: float):
    """(X, Y) amplitudes of the quasiparticle at wavevector k != 0."""
    eps = 0.5 * _ksq(k)
    if eps == 0:
        raise ValueError("k = 0 is the zero mode; it has no (X, Y) amplitudes")
    omega = dispersion(k, gn)
    x_amp = np.sqrt(0.5 * ((eps + gn) / omega + 1.0))
    y_amp = np.sqrt(0.5 * ((eps + gn) / omega - 1.0))
    return float(x_amp), float(y_amp)


def analytic_zero_mode(gn: float):
    """Closed-form zero-mode data (P, Q, mass) of the homogeneous k=0 block."""
    if gn <= 0:
        raise ValueError("gn must be positive; the gn = 0 zero sector is degenerate")
    p = np.array([1.0, -1.0], dtype=complex)
    q = -0.5j * np.array([1.0, 1.0], dtype=complex)
    return p, q, 1.0 / gn


@dataclass(frozen=True)
class HomogeneousParams:
    """Interaction density gn = g*N0/V and the box's commensurate wavevectors."""

    gn: float
    volume: float
    wavevectors: np.ndarray

    def __post_init__(self):
        if self.gn < 0 or self.volume <= 0:
            raise ConfigurationError("gn must be >= 0 and volume positive")

    @classmethod
    def from_state(cls, state: CondensateState):
        grid = state.grid
        if grid.boundary != PERIODIC or state.params.trap.kind != "zero":
            raise ConfigurationError("homogeneous oracle needs a trap-free periodic box")
        return cls(
            gn=state.params.gn / grid.volume,
            volume=grid.volume,
            wavevectors=grid.wavevector_table(),
        )

    def dispersion_table(self):
        """omega_k for every box wavevector, in the table's row order."""
        eps = 0.5 * np.sum(self.wavevectors**2, axis=1)
        return np.sqrt((eps + self.gn) ** 2 - self.gn**2)


def direct_bdg_solve(state: CondensateState, grid: Grid | None = None, zero_tol: float | None = None):
    """Positive excitation frequencies from the grid-level linearized problem.

    Builds the full 2N x 2N generalized eigenproblem with pointwise blocks
    A = H_eff - mu0 + gN|phi0|^2 and B = gN phi0^2 on the grid nodes,
    without any basis expansion; used purely as an oracle for the pipeline.
    """
    grid = grid or state.grid
    gn = state.params.gn
    dens = np.abs(state.phi0) ** 2
    h0 = GridOperator(
        grid, state.scheme, laplace_coeff=-0.5, diagonal=state.params.trap.values(grid)
    ).to_dense()
    a_block = h0 + np.diag(2.0 * gn * dens) - state.mu0 * np.eye(grid.size)
    b_block = np.diag(gn * state.phi0**2)
    k = np.block([[a_block, b_block], [-b_block.conj(), -a_block.conj()]])
    vals = scipy.linalg.eigvals(k)
    tol = zero_tol if zero_tol is not None else 1e-7 * float(np.linalg.norm(a_block, 2))
    real_vals = vals[np.abs(vals.imag) <= tol].real
    positive = np.sort(real_vals[real_vals > tol])
    if positive.size == 0:
        raise NumericalError("direct solve produced no positive frequencies")
    return positive
