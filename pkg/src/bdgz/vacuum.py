"""Approximate condensate vacuum in truncated number-state spaces.

Two factors are representable in closed form: the two-mode squeezed vacuum
annihilated by each paired quasiparticle (a geometric series over
|n>_k |n>_{-k} with ratio r = (eps + gn - omega)/(eps + gn + omega)), and
the zero-mode factor, a quadrature eigenstate of a0 + a0^dag whose
number-basis coefficients are harmonic-oscillator eigenfunctions evaluated
at sqrt(2 N0). The latter is delta-normalized (not square-summable); its
divergent partial norms are exposed, never hidden by a fake normalization.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, TruncationWarning, UnsupportedParameterError


def hermite_function_values(n_levels: int, x: float) -> np.ndarray:
    """psi_n(x) for n = 0..n_levels-1 by the stable three-term recurrence.

    psi_n are the orthonormal oscillator eigenfunctions; the recurrence
    psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1} avoids the
    factorial overflow of the polynomial formula.
    """
    if n_levels < 1:
        raise ConfigurationError("need at least one level")
    out = np.zeros(n_levels)
    out[0] = np.pi**-0.25 * np.exp(-0.5 * x * x)
    if n_levels > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(1, n_levels - 1):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1.0)) * out[n - 1]
    return out


@dataclass(frozen=True)
class PairedModeVacuum:
    """Two-mode squeezed vacuum over |n>_k |n>_{-k}, truncated at n_max."""

    ratio_r: float
    norm_a: float
    n_max: int
    coefficients: np.ndarray  # c_n = norm_a * r^(n/2), n = 0..n_max
    truncation_error: float  # missing tail of sum c_n^2, r^(n_max+1)

    @property
    def depletion(self) -> float:
        """Expected occupation per mode of the pair, r/(1-r)."""
        return self.ratio_r / (1.0 - self.ratio_r)


@dataclass(frozen=True)
class ZeroModeVacuum:
    """Quadrature eigenstate of a0 + a0^dag at eigenvalue 2*sqrt(N0)."""

    n0: float
    n_max: int
    coefficients: np.ndarray
    phase_convention: str  # "direct" or "fourier", whichever minimizes the residual
    quadrature_residual: float
    partial_norms: np.ndarray  # divergent running sums of |c_n|^2
    delta_normalized: bool = True

    def boundary_term(self) -> float:
        """Magnitude bound of the coupling dropped at the truncation edge."""
        top = abs(self.coefficients[-1])
        return float((np.sqrt(self.n_max) + 2.0 * np.sqrt(self.n0)) * top)


def pair_vacuum(epsilon: float, gn: float, n_max: int) -> PairedModeVacuum:
    """Squeezed vacuum of one (k, -k) pair with kinetic energy eps = k^2/2.

    Requires eps > 0; the eps = 0 pair is the zero mode and is handled by
    :func:`zero_mode_vacuum` instead.
    """
    if epsilon < 0 or gn < 0:
        raise ConfigurationError("epsilon and gn must be non-negative")
    if n_max < 1:
        raise ConfigurationError("n_max must be at least 1")
    if epsilon == 0:
        if gn > 0:
            raise UnsupportedParameterError(
                "epsilon = 0 with gn > 0 is the zero-mode pair; use zero_mode_vacuum"
            )
        raise UnsupportedParameterError("epsilon = 0 has no gapped pair vacuum")
    omega = np.sqrt((epsilon + gn) ** 2 - gn**2)
    ratio = (epsilon + gn - omega) / (epsilon + gn + omega)
    norm_a = np.sqrt(1.0 - ratio)
    n = np.arange(n_max + 1)
    coefficients = norm_a * ratio ** (n / 2.0)
    return PairedModeVacuum(
        ratio_r=float(ratio),
        norm_a=float(norm_a),
        n_max=int(n_max),
        coefficients=coefficients,
        truncation_error=float(ratio ** (n_max + 1)),
    )


def annihilation_residual(coefficients, x_amp: float, y_amp: float, n_max: int | None = None) -> float:
    """Norm of (X a_k - Y a_{-k}^dag)|vac> below the truncation boundary.

    The state is sum_n c_n |n>_k |n>_{-k}; each interior recurrence row
    contributes sqrt(m+1) (X c_{m+1} - Y c_m), and the unpaired coupling out
    of the top retained level is excluded.
    """
    c = np.asarray(coefficients, dtype=float)
    top = c.size - 1 if n_max is None else min(int(n_max), c.size - 1)
    m = np.arange(top)
    rows = np.sqrt(m + 1.0) * (x_amp * c[m + 1] - y_amp * c[m])
    return float(np.sqrt(np.sum(rows**2)))


def _quadrature_residual(c: np.ndarray, n0: float) -> float:
    """Norm of ((a0 + a0^dag) - 2 sqrt(N0)) c over rows below the top level."""
    n = c.size
    rows = np.zeros(n - 1, dtype=complex)
    for m in range(n - 1):
        val = np.sqrt(m + 1.0) * c[m + 1] - 2.0 * np.sqrt(n0) * c[m]
        if m > 0:
            val += np.sqrt(float(m)) * c[m - 1]
        rows[m] = val
    return float(np.linalg.norm(rows))


def zero_mode_vacuum(n0: float, n_max: int) -> ZeroModeVacuum:
    """Zero-mode vacuum coefficients over the condensate number basis.

    Both phase conventions compatible with |c_n| = |psi_n(sqrt(2 N0))| are
    constructed (plain Hermite values, and the i^n Fourier-transform phase);
    the one with the smaller quadrature residual is kept and recorded. A
    :class:`TruncationWarning` carrying the residual is issued when n_max is
    too small to resolve the classical turning point of the state.
    """
    if n0 < 0:
        raise ConfigurationError("N0 must be non-negative")
    if n_max < 2:
        raise ConfigurationError("n_max must be at least 2")
    x0 = np.sqrt(2.0 * n0)
    psi = hermite_function_values(n_max, x0)
    candidates = {
        "direct": psi.astype(complex),
        "fourier": (1j ** np.arange(n_max)) * psi,
    }
    residuals = {name: _quadrature_residual(c, n0) for name, c in candidates.items()}
    convention = min(residuals, key=residuals.get)
    coefficients = candidates[convention]
    residual = residuals[convention]
    if n_max < int(np.ceil(2.0 * n0)) + 8:
        warnings.warn(
            f"n_max={n_max} barely resolves N0={n0} (turning point at n ~ 2*N0); "
            f"quadrature residual {residual:.3e}",
            TruncationWarning,
            stacklevel=2,
        )
    return ZeroModeVacuum(
        n0=float(n0),
        n_max=int(n_max),
        coefficients=coefficients,
        phase_convention=convention,
        quadrature_residual=residual,
        partial_norms=np.cumsum(np.abs(coefficients) ** 2),
    )
