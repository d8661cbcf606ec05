"""Symplectic diagonalization of the quadratic Hamiltonian and zero mode.

The excitation problem is the non-Hermitian eigenproblem

    eta M V^n = omega_n V^n,        V^n = (X^n; Y^n),

whose eigenvalues come in +-omega pairs. Physical (retained) modes are the
positive-frequency family normalized to V^dag eta V = +1; the broken-phase
zero mode appears as a defective pair {P, R} with

    eta M P = 0,   P^dag eta P = 0,   eta M Q = -i P / mu,   Q^dag eta P = i,

where mu > 0 is the collective mass of the momentum-like coordinate
alpha^dag eta P. Conventions fixed here:

- eigenvalues sorted ascending; eigenvector phases fixed by making the
  largest-magnitude component real positive;
- degenerate positive-frequency clusters are eta-orthonormalized
  (Gram-Schmidt in the indefinite metric);
- Q is eta-orthogonal to every proper eigenvector, and the leftover gauge
  freedom Q -> Q + c P is removed by the minimum-norm least-squares solve
  (Q is then Euclidean-orthogonal to P), which reproduces the closed-form
  homogeneous solution;
- unstable spectra (complex frequencies) are reported, never rejected.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    ConfigurationError,
    NumericalError,
    StructureWarning,
    UnsupportedStructureError,
    ZeroModeMissingError,
)

DEFAULT_ZERO_TOL_FACTOR = 1e-7
DEFECTIVE_NORM_CUTOFF = 0.1


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Positive-frequency family of eta*M plus stability bookkeeping.

    omega has one entry per retained proper mode (ascending). When a
    defective zero pair is present it is excluded, so omega has length f-1;
    a diagonalizable zero sector (g = 0 edge case) is kept as a proper
    omega ~ 0 mode instead. x and y hold the mode vectors column-wise.
    """

    omega: np.ndarray
    x: np.ndarray
    y: np.ndarray
    eta_norms: np.ndarray
    stable: bool
    unstable_modes: tuple
    zero_cluster_size: int
    zero_defective: bool
    max_eigen_residual: float
    m_norm: float
    zero_tol: float

    @property
    def n_modes(self):
        return self.omega.size


@dataclass(frozen=True)
class ZeroMode:
    """Defective zero-frequency sector: null vector P, partner Q, mass mu."""

    p: np.ndarray
    q: np.ndarray
    mass_mu: float
    omega0_residual: float
    momentum_coefficients: np.ndarray
    pattern_deviation: float
    p_eta_norm: float
    q_residual: float
    pairing_residual: float


def _eta_diagonal(eta) -> np.ndarray:
    eta = np.asarray(eta)
    d = np.diag(eta) if eta.ndim == 2 else eta
    return np.real(d).astype(float)


def _swap_halves(vec):
    f = vec.size // 2
    return np.concatenate([vec[f:], vec[:f]])


def _eta_gram_schmidt(columns, eta_diag):
    """Sequential eta-orthonormalization of positive-norm columns."""
    out = columns.astype(complex, copy=True)
    for j in range(out.shape[1]):
        v = out[:, j]
        for i in range(j):
            u = out[:, i]
            v = v - u * np.vdot(u, eta_diag * v)
        nu = float(np.real(np.vdot(v, eta_diag * v)))
        if nu <= 0:
            raise NumericalError("positive-frequency mode lost its positive eta-norm")
        out[:, j] = v / np.sqrt(nu)
    return out


def _fix_phase(vec):
    pivot = vec[int(np.argmax(np.abs(vec)))]
    return vec * (np.conj(pivot) / abs(pivot))


def _disentangle_clusters(omega, cols, cluster_tol):
    """Canonical unitary mixing inside degenerate frequency clusters.

    Any unitary remix of a degenerate cluster is an equally valid
    eta-orthonormal eigenbasis; diagonalizing the component-index weight
    V^dag diag(0..2f-1) V picks the member vectors with the most localized
    support (for a homogeneous box, the pure single-pair modes) and makes
    the output independent of the eigensolver's arbitrary mixing.
    """
    weights = np.arange(cols.shape[0], dtype=float)
    start = 0
    while start < omega.size:
        stop = start + 1
        while stop < omega.size and omega[stop] - omega[start] <= cluster_tol:
            stop += 1
        if stop - start > 1:
            block = cols[:, start:stop]
            c = block.conj().T @ (weights[:, None] * block)
            _, u = np.linalg.eigh(0.5 * (c + c.conj().T))
            cols[:, start:stop] = block @ u
        start = stop
    return cols


def diagonalize(M, eta, zero_tol: float | None = None) -> SymplecticSpectrum:
    """Eigen-decompose eta*M and return the normalized positive family.

    Eigenvalues are sorted into the zero cluster (|lambda| <= zero_tol),
    complex/unstable ones, and real +-omega families by the sign of the
    eta-norm. The zero cluster is inspected before any normalization: a
    defective (Jordan) pair has vanishing eta-norms and is set aside for
    :func:`extract_zero_mode`, while a diagonalizable one (B = 0 inputs) is
    folded back into the proper families as omega ~ 0 modes.
    """
    m = np.asarray(M)
    two_f = m.shape[0]
    if m.shape != (two_f, two_f) or two_f % 2:
        raise ConfigurationError("M must be square with even dimension")
    eta_diag = _eta_diagonal(eta)
    if eta_diag.size != two_f:
        raise ConfigurationError("eta dimension does not match M")
    m_norm = float(np.linalg.norm(m, 2))
    if m_norm > 0 and float(np.max(np.abs(m - m.conj().T))) > 1e-10 * m_norm:
        raise ConfigurationError("M must be Hermitian")
    tol = float(zero_tol) if zero_tol is not None else DEFAULT_ZERO_TOL_FACTOR * max(m_norm, 1e-300)

    k = eta_diag[:, None] * m
    try:
        vals, vecs = scipy.linalg.eig(k)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"eigensolver failed on eta*M: {exc}") from exc

    zero_idx, unstable, plus_idx = [], [], []
    for i, lam in enumerate(vals):
        if abs(lam) <= tol:
            zero_idx.append(i)
        elif abs(lam.imag) > tol:
            unstable.append(complex(lam))
        elif float(np.real(np.vdot(vecs[:, i], eta_diag * vecs[:, i]))) > 0:
            plus_idx.append(i)

    zero_defective = False
    if len(zero_idx) > 2:
        raise UnsupportedStructureError(
            f"zero cluster of size {len(zero_idx)}: more than one zero mode"
        )
    if zero_idx:
        norms = [
            float(np.real(np.vdot(vecs[:, i], eta_diag * vecs[:, i]))) for i in zero_idx
        ]
        if max(abs(n) for n in norms) < DEFECTIVE_NORM_CUTOFF:
            zero_defective = True  # Jordan pair; handled by extract_zero_mode
        else:
            plus_idx.extend(i for i, n in zip(zero_idx, norms) if n > 0)

    order = sorted(plus_idx, key=lambda i: float(np.real(vals[i])))
    omega = np.array([float(np.real(vals[i])) for i in order])
    if order:
        cols = _eta_gram_schmidt(vecs[:, order], eta_diag)
        cols = _disentangle_clusters(omega, cols, 1e-10 * max(m_norm, 1.0))
        for j in range(cols.shape[1]):
            cols[:, j] = _fix_phase(cols[:, j])
    else:
        cols = np.zeros((two_f, 0), dtype=complex)

    eta_norms = np.array(
        [float(np.real(np.vdot(cols[:, j], eta_diag * cols[:, j]))) for j in range(cols.shape[1])]
    )
    residual = 0.0
    for j in range(cols.shape[1]):
        r = k @ cols[:, j] - omega[j] * cols[:, j]
        residual = max(residual, float(np.linalg.norm(r) / np.linalg.norm(cols[:, j])))

    f = two_f // 2
    return SymplecticSpectrum(
        omega=omega,
        x=cols[:f, :],
        y=cols[f:, :],
        eta_norms=eta_norms,
        stable=not unstable,
        unstable_modes=tuple(unstable),
        zero_cluster_size=len(zero_idx),
        zero_defective=zero_defective,
        max_eigen_residual=residual,
        m_norm=m_norm,
        zero_tol=tol,
    )


def extract_zero_mode(
    spectrum: SymplecticSpectrum,
    M,
    eta,
    zero_tol: float | None = None,
    pattern_tol: float = 1e-6,
) -> ZeroMode:
    """Solve the defective zero sector: P, its partner Q, and the mass mu.

    P is the numerical null vector of eta*M (via SVD, which is robust against
    the Jordan structure), rescaled so its first component is +1; for a
    converged condensate it reproduces the (delta_m0, -delta_m0) pattern, and
    deviations beyond ``pattern_tol`` raise a :class:`StructureWarning`. Q
    solves eta M Q = -i P / mu in the least-squares sense, projected
    eta-orthogonal to every proper eigenvector, with mu then fixed by
    Q^dag eta P = i. Raises :class:`ZeroModeMissingError` when eta*M has no
    numerical null vector (an unconverged condensate looks exactly like
    that) and :class:`UnsupportedStructureError` for zero sectors that are
    not a single defective pair.
    """
    m = np.asarray(M)
    eta_diag = _eta_diagonal(eta)
    tol = float(zero_tol) if zero_tol is not None else spectrum.zero_tol
    k = eta_diag[:, None] * m
    two_f = m.shape[0]
    f = two_f // 2

    _, svals, vh = np.linalg.svd(k)
    null_count = int(np.sum(svals <= tol))
    if null_count == 0:
        raise ZeroModeMissingError(
            f"no eigenvalue of eta*M within {tol:.3e} of zero "
            f"(smallest singular value {svals[-1]:.3e}); "
            "the condensate input is probably not converged"
        )
    if null_count > 1:
        null_vecs = vh[-null_count:].conj().T
        gram = null_vecs.conj().T @ (eta_diag[:, None] * null_vecs)
        if float(np.min(np.abs(np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))))) > DEFECTIVE_NORM_CUTOFF:
            raise UnsupportedStructureError(
                "zero-frequency sector is diagonalizable (eta-norms +-1); "
                "a non-interacting input has no collective zero mode"
            )
        raise UnsupportedStructureError(
            f"{null_count}-dimensional defective zero sector; only one zero mode is supported"
        )

    p = vh[-1].conj()
    if abs(p[0]) < 1e-3 * float(np.max(np.abs(p))):
        warnings.warn(
            "zero-mode vector has a vanishing first component; rescaling by its "
            "largest entry instead",
            StructureWarning,
            stacklevel=2,
        )
        p = p / p[int(np.argmax(np.abs(p)))]
    else:
        p = p / p[0]

    pattern = np.zeros(two_f, dtype=complex)
    pattern[0] = 1.0
    pattern[f] = -1.0
    pattern_deviation = float(np.linalg.norm(p - pattern) / np.sqrt(2.0))
    if pattern_deviation > pattern_tol:
        warnings.warn(
            f"zero-mode vector deviates from the (delta, -delta) pattern by "
            f"{pattern_deviation:.3e}",
            StructureWarning,
            stacklevel=2,
        )

    omega0_residual = float(np.linalg.norm(k @ p) / np.linalg.norm(p))

    rcond = max(tol / max(svals[0], 1e-300), 1e-14)
    r = np.linalg.lstsq(k, p.astype(complex), rcond=rcond)[0]
    if spectrum.x.size:
        v_plus = np.vstack([spectrum.x, spectrum.y])
        w_minus = np.vstack([spectrum.y.conj(), spectrum.x.conj()])
        r = r - v_plus @ (v_plus.conj().T @ (eta_diag * r))
        r = r + w_minus @ (w_minus.conj().T @ (eta_diag * r))

    mass = np.vdot(r, eta_diag * p)
    if abs(mass.imag) > 1e-6 * max(abs(mass.real), 1.0):
        raise NumericalError(f"collective mass is not real: {mass:.6e}")
    mass_mu = float(mass.real)
    if mass_mu <= 0:
        raise NumericalError(f"collective mass must be positive, got {mass_mu:.6e}")

    q = (-1j / mass_mu) * r
    q_residual = float(np.linalg.norm(k @ q + 1j * p / mass_mu))
    pairing_residual = float(abs(np.vdot(q, eta_diag * p) - 1j))
    p_eta_norm = float(abs(np.vdot(p, eta_diag * p)))
    guard = 1e-6 * max(1.0, spectrum.m_norm)
    if q_residual > guard or pairing_residual > guard:
        raise NumericalError(
            f"zero-mode partner equations violated (residuals {q_residual:.3e}, "
            f"{pairing_residual:.3e})"
        )

    return ZeroMode(
        p=p,
        q=q,
        mass_mu=mass_mu,
        omega0_residual=omega0_residual,
        momentum_coefficients=_swap_halves(eta_diag * p),
        pattern_deviation=pattern_deviation,
        p_eta_norm=p_eta_norm,
        q_residual=q_residual,
        pairing_residual=pairing_residual,
    )


def canonical_transform(
    spectrum: SymplecticSpectrum,
    zero_mode: ZeroMode | None = None,
    tol: float = 1e-10,
):
    """Assemble T with rows [[X*, -Y*], [-Y, X]] and verify T eta T^dag eta = 1.

    The proper modes fill f-1 (or all f, when no defective zero pair exists)
    rows per half; with a zero mode the remaining pair of rows carries the
    canonical (P, Q) coordinates of the collective sector, which have zero
    eta-norm and are therefore excluded from the verification block.
    """
    if not spectrum.stable:
        raise UnsupportedStructureError(
            "unstable spectrum (complex frequencies); no canonical transform"
        )
    f = spectrum.x.shape[0]
    n_modes = spectrum.x.shape[1]
    eta_diag = np.concatenate([np.ones(f), -np.ones(f)])

    if zero_mode is None:
        if n_modes != f:
            raise ConfigurationError(
                f"{n_modes} proper modes for f={f}: the zero-mode sector is required"
            )
        x_full, y_full = spectrum.x, spectrum.y
    else:
        if n_modes != f - 1:
            raise ConfigurationError(
                f"expected f-1={f - 1} proper modes alongside a zero mode, got {n_modes}"
            )
        x_full = np.hstack([zero_mode.p[:f, None], spectrum.x])
        y_full = np.hstack([zero_mode.p[f:, None], spectrum.y])

    xm = x_full.T  # row n = mode vector X^n
    ym = y_full.T
    t = np.block([[xm.conj(), -ym.conj()], [-ym, xm]])
    if zero_mode is not None:
        # collective rows: momentum alpha^dag eta P and its conjugate from Q
        t[0, :] = _swap_halves(eta_diag * zero_mode.p)
        t[f, :] = _swap_halves(eta_diag * zero_mode.q)

    check = (t * eta_diag[None, :]) @ t.conj().T * eta_diag[None, :]
    if zero_mode is None:
        idx = np.arange(2 * f)
    else:
        idx = np.array([i for i in range(2 * f) if i not in (0, f)])
    dev = float(np.max(np.abs(check[np.ix_(idx, idx)] - np.eye(idx.size))))
    if dev > tol:
        raise NumericalError(
            f"canonical condition violated on the proper block: max deviation {dev:.3e}"
        )
    return t
