"""Matrix data of the truncated quadratic fluctuation Hamiltonian.

In the retained basis {Phi_n} the quadratic Hamiltonian is fixed by

    A_mn = (mu_m - mu_0) delta_mn + d_mn,
    d_mn = g N0 int Phi_m^* |Phi_0|^2 Phi_n,
    B_mn = g N0 int Phi_0^2 Phi_m^* Phi_n^*,

all evaluated with the same uniform quadrature as the basis orthonormality,
plus the scalar constant -B_00 N0 / 2. The 2f x 2f coefficient matrix is
M = [[A, B], [B*, A*]] with the indefinite metric eta = diag(1_f, -1_f).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .basis import BasisSet
from .errors import ConfigurationError, NumericalError
from .gp import CondensateState, PhysicalParams

ASYMMETRY_TOL = 1e-8


def _array_hash(*arrays) -> str:
    digest = hashlib.sha256()
    for arr in arrays:
        digest.update(np.ascontiguousarray(arr).tobytes())
    return digest.hexdigest()


@dataclass(frozen=True)
class QuadraticForm:
    a: np.ndarray  # f x f Hermitian
    b: np.ndarray  # f x f symmetric
    d: np.ndarray  # f x f Hermitian, kept for diagnostics
    b00: float
    constant_term: float  # -B00 * N0 / 2
    trace_a: float
    f: int
    params: PhysicalParams
    asymmetry: float  # worst pre-symmetrization defect of A (= d) and B
    basis_hash: str
    state_hash: str


def assemble(basis: BasisSet, state: CondensateState, asym_tol: float = ASYMMETRY_TOL) -> QuadraticForm:
    """Quadrature of the A, B, d matrices from a basis and its condensate.

    Hermiticity of d (hence A) and symmetry of B are enforced by averaging
    after assembly; the pre-symmetrization defect is kept as a diagnostic and
    raises :class:`NumericalError` above ``asym_tol``, which signals an
    unconverged condensate or mismatched quadrature.
    """
    if basis.grid != state.grid:
        raise ConfigurationError("basis and state live on different grids")
    grid = basis.grid
    gn = state.params.gn
    w = grid.weight
    phi = state.phi0
    fmat = basis.functions

    dens = np.abs(phi) ** 2
    d_raw = gn * w * (fmat.conj().T @ (dens[:, None] * fmat))
    b_raw = gn * w * (fmat.conj().T @ ((phi * phi)[:, None] * fmat.conj()))

    asym = max(
        float(np.max(np.abs(d_raw - d_raw.conj().T))),
        float(np.max(np.abs(b_raw - b_raw.T))),
    )
    if asym > asym_tol:
        raise NumericalError(
            f"A/B asymmetry {asym:.3e} exceeds {asym_tol:.1e}; "
            "condensate not converged or quadrature inconsistent with the basis"
        )

    d = 0.5 * (d_raw + d_raw.conj().T)
    b = 0.5 * (b_raw + b_raw.T)
    a = np.diag(basis.mu - state.mu0).astype(d.dtype) + d

    b00 = b[0, 0]
    if abs(np.imag(b00)) > asym_tol:
        raise NumericalError(f"B00 has imaginary part {np.imag(b00):.3e}")
    b00 = float(np.real(b00))

    return QuadraticForm(
        a=a,
        b=b,
        d=d,
        b00=b00,
        constant_term=-0.5 * b00 * state.params.n0,
        trace_a=float(np.real(np.trace(a))),
        f=basis.f,
        params=state.params,
        asymmetry=asym,
        basis_hash=_array_hash(basis.mu, basis.functions),
        state_hash=_array_hash(state.phi0, np.array([state.mu0, state.params.g, state.params.n0])),
    )


def build_M(q: QuadraticForm):
    """Coefficient matrix M = [[A, B], [B*, A*]] and metric eta = diag(1, -1).

    M is Hermitian by construction. No definiteness is required or checked;
    indefinite M simply produces an unstable spectrum downstream.
    """
    m = np.block([[q.a, q.b], [q.b.conj(), q.a.conj()]])
    eta = np.diag(np.concatenate([np.ones(q.f), -np.ones(q.f)]))
    return m, eta


@dataclass(frozen=True)
class GroundEnergyConstants:
    mean_field: float  # -B00 N0 / 2
    zero_point: float  # sum(omega_n)/2 - tr(A)/2 at the given truncation


def ground_energy_constants(q: QuadraticForm, spectrum) -> GroundEnergyConstants:
    """Scalar pieces of the diagonalized Hamiltonian (no regularization)."""
    return GroundEnergyConstants(
        mean_field=q.constant_term,
        zero_point=0.5 * float(np.sum(spectrum.omega)) - 0.5 * q.trace_a,
    )


def _matrix_to_json(mat) -> dict:
    mat = np.asarray(mat)
    return {"re": np.real(mat).tolist(), "im": np.imag(mat).tolist()}


def matrix_from_json(obj) -> np.ndarray:
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    mat = re + 1j * im
    return re if np.max(np.abs(im)) == 0 else mat


def export_quadratic_form(q: QuadraticForm, path) -> None:
    """Write the matrices row-major with metadata as an inspectable JSON file."""
    doc = {
        "f": q.f,
        "b00": q.b00,
        "constant_term": q.constant_term,
        "trace_a": q.trace_a,
        "asymmetry": q.asymmetry,
        "g": q.params.g,
        "n0": q.params.n0,
        "basis_hash": q.basis_hash,
        "state_hash": q.state_hash,
        "a": _matrix_to_json(q.a),
        "b": _matrix_to_json(q.b),
        "d": _matrix_to_json(q.d),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
