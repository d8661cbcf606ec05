"""Shared helpers for randomized suites."""

import numpy as np

from bdgz import Grid, PhysicalParams, TrapPotential
from bdgz.gp import CondensateState


def random_stable_form(rng, f, complex_entries=True):
    """Random A = A^dag, B = B^T with the block matrix shifted positive definite."""
    if complex_entries:
        a = rng.randn(f, f) + 1j * rng.randn(f, f)
        b = rng.randn(f, f) + 1j * rng.randn(f, f)
    else:
        a = rng.randn(f, f) + 0j
        b = rng.randn(f, f) + 0j
    a = 0.5 * (a + a.conj().T)
    b = 0.5 * (b + b.T)
    m = np.block([[a, b], [b.conj(), a.conj()]])
    shift = -float(np.min(np.linalg.eigvalsh(m))) + 0.3 + rng.rand()
    a = a + shift * np.eye(f)
    m = np.block([[a, b], [b.conj(), a.conj()]])
    eta = np.diag(np.concatenate([np.ones(f), -np.ones(f)]))
    return m, eta


def random_state(rng):
    """Random normalized condensate-like state for snapshot round trips."""
    n = int(rng.randint(8, 40))
    length = float(1.0 + 9.0 * rng.rand())
    boundary = "periodic" if rng.rand() < 0.7 else "hard_wall"
    grid = Grid(points_per_axis=(n,), box_lengths=(length,), boundary=boundary)
    phi = np.abs(rng.randn(n)) + 0.1
    phi = phi / np.sqrt(grid.weight * np.sum(phi**2))
    params = PhysicalParams(
        g=float(rng.rand()), n0=float(1 + 10 * rng.rand()), trap=TrapPotential.zero()
    )
    scheme = "spectral" if boundary == "periodic" else "finite_difference_2nd"
    return CondensateState(
        phi0=phi,
        mu0=float(rng.randn()),
        params=params,
        grid=grid,
        residual=float(abs(rng.randn()) * 1e-11),
        scheme=scheme,
        iterations=int(rng.randint(0, 1000)),
    )
