"""End-to-end excitation pipeline: basis -> matrices -> spectrum -> zero mode."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisSet, build_effective_hamiltonian, solve_basis
from .bogoliubov import SymplecticSpectrum, ZeroMode, diagonalize, extract_zero_mode
from .errors import StructuralError
from .gp import CondensateState
from .quadform import QuadraticForm, assemble, build_M


@dataclass(frozen=True)
class ExcitationResult:
    basis: BasisSet
    qform: QuadraticForm
    m_matrix: np.ndarray
    eta: np.ndarray
    spectrum: SymplecticSpectrum
    zero_mode: ZeroMode | None
    zero_mode_error: str | None


def excitation_spectrum(
    state: CondensateState,
    f: int,
    zero_tol_factor: float = 1e-7,
    pattern_tol: float = 1e-6,
) -> ExcitationResult:
    """Run the full pipeline on a converged condensate state.

    Zero-mode extraction failures of the structural kind (missing or
    degenerate zero sector) are captured in ``zero_mode_error`` rather than
    raised, so callers can report them distinctly; everything else
    propagates.
    """
    h_eff = build_effective_hamiltonian(state)
    basis = solve_basis(h_eff, f, state.grid)
    qform = assemble(basis, state)
    m_matrix, eta = build_M(qform)
    zero_tol = zero_tol_factor * float(np.linalg.norm(m_matrix, 2))
    spectrum = diagonalize(m_matrix, eta, zero_tol=zero_tol)
    zero_mode = None
    zero_mode_error = None
    try:
        zero_mode = extract_zero_mode(
            spectrum, m_matrix, eta, zero_tol=zero_tol, pattern_tol=pattern_tol
        )
    except StructuralError as exc:
        zero_mode_error = str(exc)
    return ExcitationResult(
        basis=basis,
        qform=qform,
        m_matrix=m_matrix,
        eta=eta,
        spectrum=spectrum,
        zero_mode=zero_mode,
        zero_mode_error=zero_mode_error,
    )
