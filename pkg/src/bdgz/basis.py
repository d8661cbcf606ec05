"""Expansion basis: lowest eigenpairs of the effective one-body Hamiltonian.

The fluctuation field is expanded in eigenfunctions of

    H_eff = -laplacian/2 + V(r) + g*N0*|phi0|^2,

whose lowest eigenpair reproduces the condensate itself (phi0, mu0). Only
the f lowest levels are retained; the truncation level is a user choice
probed by the convergence scan in the command line layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg

from .errors import ConfigurationError, NumericalError
from .gp import CondensateState, effective_potential
from .grid import PERIODIC, Grid, GridOperator

DENSE_LIMIT = 10_000
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class BasisSet:
    """f lowest orthonormal eigenpairs of the effective Hamiltonian.

    functions has shape (grid.size, f), one eigenfunction per column,
    orthonormal under the grid inner product; mu is ascending. wavevectors
    is populated on the plane-wave fast path only (one k row per column).
    """

    f: int
    mu: np.ndarray
    functions: np.ndarray
    grid: Grid
    wavevectors: np.ndarray | None = None

    def gram_deviation(self) -> float:
        """Max-norm deviation of the Gram matrix from the identity."""
        gram = self.grid.weight * (self.functions.conj().T @ self.functions)
        return float(np.max(np.abs(gram - np.eye(self.f))))


def build_effective_hamiltonian(state: CondensateState, grid: Grid | None = None) -> GridOperator:
    """Self-adjoint operator -laplacian/2 + V + g*N0*|phi0|^2."""
    grid = grid or state.grid
    if grid is not state.grid and grid != state.grid:
        raise ConfigurationError("grid does not match the condensate state")
    return GridOperator(
        grid, state.scheme, laplace_coeff=-0.5, diagonal=effective_potential(state)
    )


def _plane_wave_basis(h_eff: GridOperator, f: int, grid: Grid) -> BasisSet:
    """Exact eigenbasis exp(i k.r)/sqrt(V) for translation-invariant H_eff."""
    v0 = float(np.mean(h_eff.diagonal)) if h_eff.diagonal is not None else 0.0
    kvecs = grid.wavevector_table()
    mu_all = v0 - 0.5 * h_eff.laplacian_symbol
    # ascending energy, ties broken by the lexicographic wavevector order
    order = np.lexsort(tuple(kvecs[:, a] for a in reversed(range(grid.dimension))) + (np.round(mu_all, 12),))
    keep = order[:f]
    coords = np.stack(grid.coordinates, axis=1)
    phases = coords @ kvecs[keep].T
    functions = np.exp(1j * phases) / np.sqrt(grid.volume)
    return BasisSet(
        f=f,
        mu=mu_all[keep].copy(),
        functions=functions,
        grid=grid,
        wavevectors=kvecs[keep].copy(),
    )


def _fix_sign(vec):
    dominant = int(np.argmax(np.abs(vec)))
    pivot = vec[dominant]
    if np.iscomplexobj(vec):
        return vec * (np.conj(pivot) / abs(pivot))
    return vec if pivot > 0 else -vec


def _tie_break(mu, functions):
    """Order degenerate clusters by the index of the dominant coefficient."""
    order = np.arange(len(mu))
    start = 0
    while start < len(mu):
        stop = start + 1
        while stop < len(mu) and abs(mu[stop] - mu[start]) <= DEGENERACY_TOL:
            stop += 1
        if stop - start > 1:
            dominant = [int(np.argmax(np.abs(functions[:, j]))) for j in order[start:stop]]
            order[start:stop] = order[start:stop][np.argsort(dominant, kind="stable")]
        start = stop
    return order


def solve_basis(h_eff: GridOperator, f: int, grid: Grid) -> BasisSet:
    """Compute the f lowest eigenpairs, orthonormal under the grid quadrature.

    Periodic grids with a constant effective potential take an exact
    plane-wave path (complex exponentials, +-k pairs kept explicit); anything
    else is diagonalized densely up to 10^4 nodes and with restarted Lanczos
    above that.
    """
    f = int(f)
    if not 1 <= f <= grid.size:
        raise ConfigurationError(f"truncation f={f} outside 1..{grid.size}")
    if grid is not h_eff.grid and grid != h_eff.grid:
        raise ConfigurationError("grid does not match the operator")

    diag = h_eff.diagonal
    if grid.boundary == PERIODIC and (
        diag is None or np.ptp(diag) <= 1e-11 * (1.0 + abs(float(np.mean(diag))))
    ):
        return _plane_wave_basis(h_eff, f, grid)

    if grid.size <= DENSE_LIMIT:
        w, vecs = np.linalg.eigh(h_eff.to_dense())
        w, vecs = w[:f], vecs[:, :f]
    else:
        matvec = scipy.sparse.linalg.LinearOperator(h_eff.shape, matvec=h_eff.apply)
        try:
            w, vecs = scipy.sparse.linalg.eigsh(matvec, k=f, which="SA")
        except scipy.sparse.linalg.ArpackNoConvergence as exc:
            raise NumericalError(f"Lanczos eigensolver did not converge: {exc}") from exc
        idx = np.argsort(w)
        w, vecs = w[idx], vecs[:, idx]

    order = _tie_break(w, vecs)
    w, vecs = w[order], vecs[:, order]
    functions = vecs / np.sqrt(grid.weight)
    for j in range(f):
        functions[:, j] = _fix_sign(functions[:, j])
    return BasisSet(f=f, mu=w, functions=functions, grid=grid)
