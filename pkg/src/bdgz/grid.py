"""Uniform tensor-product grids, trap potentials, and discrete operators.

Conventions, fixed once for the whole package:

- Units: hbar = M = 1. Energies are in box/trap units, lengths in the same
  dimensionless units as the box edges.
- Grid functions are flat complex or real arrays of length ``grid.size``
  (C-order flattening of the tensor product); ``grid.shape`` restores the
  tensor layout.
- Quadrature is the uniform midpoint rule: every node carries the same
  weight, the cell volume. With that choice plane waves exp(i k.r)/sqrt(V)
  on a periodic box are exactly orthonormal under :func:`inner_product`,
  and the spectral Laplacian is exactly diagonal on them.
- Periodic boxes keep all n nodes per axis at spacing h = L/n, coordinates
  centered on the box. Hard walls (Dirichlet) keep the n interior nodes at
  spacing h = L/(n+1); functions implicitly vanish on the excluded faces.
- Periodic wavenumbers are k = 2*pi*m/L with integer m in the discrete
  Brillouin zone (FFT frequency ordering).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.linalg

from .errors import ConfigurationError

PERIODIC = "periodic"
HARD_WALL = "hard_wall"
BOUNDARIES = (PERIODIC, HARD_WALL)

SPECTRAL = "spectral"
FINITE_DIFFERENCE = "finite_difference_2nd"
SCHEMES = (SPECTRAL, FINITE_DIFFERENCE)


@dataclass(frozen=True)
class Grid:
    """Uniform tensor-product grid in 1, 2 or 3 dimensions.

    Parameters
    ----------
    points_per_axis : tuple of int
        Number of retained nodes per axis (interior nodes for hard walls).
    box_lengths : tuple of float
        Edge lengths of the computational box.
    boundary : str
        ``"periodic"`` or ``"hard_wall"``.
    """

    points_per_axis: tuple
    box_lengths: tuple
    boundary: str = PERIODIC

    def __post_init__(self):
        pts = tuple(int(n) for n in np.atleast_1d(self.points_per_axis))
        lens = tuple(float(l) for l in np.atleast_1d(self.box_lengths))
        object.__setattr__(self, "points_per_axis", pts)
        object.__setattr__(self, "box_lengths", lens)
        if not 1 <= len(pts) <= 3:
            raise ConfigurationError(f"dimension must be 1, 2 or 3, got {len(pts)}")
        if len(lens) != len(pts):
            raise ConfigurationError("points_per_axis and box_lengths disagree")
        if any(n < 2 for n in pts):
            raise ConfigurationError("need at least 2 nodes per axis")
        if any(l <= 0 for l in lens):
            raise ConfigurationError("box lengths must be positive")
        if self.boundary not in BOUNDARIES:
            raise ConfigurationError(f"unknown boundary {self.boundary!r}")

    @property
    def dimension(self):
        return len(self.points_per_axis)

    @property
    def shape(self):
        return self.points_per_axis

    @property
    def size(self):
        return int(np.prod(self.points_per_axis))

    @functools.cached_property
    def spacings(self):
        """Node spacing per axis; hard walls exclude the boundary nodes."""
        if self.boundary == PERIODIC:
            return tuple(l / n for n, l in zip(self.points_per_axis, self.box_lengths))
        return tuple(l / (n + 1) for n, l in zip(self.points_per_axis, self.box_lengths))

    @property
    def weight(self):
        """Uniform quadrature weight (cell volume)."""
        return float(np.prod(self.spacings))

    @property
    def volume(self):
        return float(np.prod(self.box_lengths))

    @functools.cached_property
    def axes(self):
        """Per-axis node coordinates, centered on the box."""
        out = []
        for n, l, h in zip(self.points_per_axis, self.box_lengths, self.spacings):
            if self.boundary == PERIODIC:
                out.append(-l / 2 + h * np.arange(n))
            else:
                out.append(-l / 2 + h * (1 + np.arange(n)))
        return tuple(out)

    @functools.cached_property
    def coordinates(self):
        """Flattened coordinate arrays, one per axis, each of length size."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return tuple(m.reshape(-1) for m in mesh)

    def wavevector_table(self):
        """All grid-commensurate wavevectors, shape (size, dimension).

        Rows follow the C-order enumeration of per-axis FFT frequencies.
        Only periodic boxes carry a plane-wave basis.
        """
        if self.boundary != PERIODIC:
            raise ConfigurationError("wavevectors are defined on periodic grids only")
        axes = [
            2 * np.pi * scipy.fft.fftfreq(n, d=h)
            for n, h in zip(self.points_per_axis, self.spacings)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1)


@dataclass(frozen=True)
class TrapPotential:
    """External potential sampled on the grid.

    kind is one of ``"zero"``, ``"harmonic"`` (V = sum_a w_a^2 x_a^2 / 2) or
    ``"tabulated"`` (explicit node values).
    """

    kind: str
    frequencies: tuple = ()
    table: np.ndarray | None = None

    @classmethod
    def zero(cls):
        return cls(kind="zero")

    @classmethod
    def harmonic(cls, *frequencies):
        freqs = tuple(float(w) for w in frequencies)
        if not freqs or any(w <= 0 for w in freqs):
            raise ConfigurationError("harmonic trap needs positive frequencies")
        return cls(kind="harmonic", frequencies=freqs)

    @classmethod
    def tabulated(cls, values):
        vals = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ConfigurationError("tabulated trap contains non-finite values")
        return cls(kind="tabulated", table=vals)

    def values(self, grid: Grid) -> np.ndarray:
        """Potential values on every node, flat array of length grid.size."""
        if self.kind == "zero":
            return np.zeros(grid.size)
        if self.kind == "harmonic":
            freqs = self.frequencies
            if len(freqs) == 1 and grid.dimension > 1:
                freqs = freqs * grid.dimension
            if len(freqs) != grid.dimension:
                raise ConfigurationError("one trap frequency per axis required")
            v = np.zeros(grid.size)
            for w, x in zip(freqs, grid.coordinates):
                v += 0.5 * (w * x) ** 2
            return v
        if self.kind == "tabulated":
            vals = self.table.reshape(-1)
            if vals.size != grid.size:
                raise ConfigurationError(
                    f"tabulated trap has {vals.size} values, grid has {grid.size} nodes"
                )
            if not np.all(np.isfinite(vals)):
                raise ConfigurationError("tabulated trap contains non-finite values")
            return vals.astype(float)
        raise ConfigurationError(f"unknown trap kind {self.kind!r}")


def inner_product(f, g, grid: Grid) -> complex:
    """Discrete L2 inner product, conjugate-linear in the first argument."""
    f = np.asarray(f).reshape(-1)
    g = np.asarray(g).reshape(-1)
    if f.size != grid.size or g.size != grid.size:
        raise ValueError(
            f"grid function sizes {f.size}, {g.size} do not match grid size {grid.size}"
        )
    return complex(grid.weight * np.vdot(f, g))


def l2_norm(f, grid: Grid) -> float:
    return float(np.sqrt(abs(inner_product(f, f, grid))))


def _axis_symbol(n, h, boundary, scheme):
    """Eigenvalues of the per-axis 1D Laplacian in its transform basis."""
    if boundary == PERIODIC:
        k = 2 * np.pi * scipy.fft.fftfreq(n, d=h)
        if scheme == SPECTRAL:
            return -(k**2)
        return -(2.0 - 2.0 * np.cos(k * h)) / h**2
    # Dirichlet: DST-I modes sin(j*pi*x/L), j = 1..n
    j = np.arange(1, n + 1)
    return -(2.0 - 2.0 * np.cos(j * np.pi / (n + 1))) / h**2


def _axis_dense(n, h, boundary, scheme):
    """Dense per-axis 1D Laplacian matching :func:`_axis_symbol` exactly."""
    if boundary == PERIODIC and scheme == SPECTRAL:
        col = scipy.fft.ifft(_axis_symbol(n, h, boundary, scheme)).real
        mat = scipy.linalg.circulant(col)
        return 0.5 * (mat + mat.T)
    mat = (np.diag(-2.0 * np.ones(n)) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)) / h**2
    if boundary == PERIODIC:
        mat[0, -1] += 1.0 / h**2
        mat[-1, 0] += 1.0 / h**2
    return mat


class GridOperator:
    """Self-adjoint operator c * Laplacian + diag(v) on flattened grid functions.

    The Laplacian part is applied through its diagonalizing transform (FFT on
    periodic grids, DST-I on hard walls), so application costs O(N log N) and
    plane waves / sine modes are exact eigenvectors. ``to_dense`` builds the
    matching dense matrix for direct diagonalization; the two paths agree to
    rounding.
    """

    def __init__(self, grid: Grid, scheme: str, laplace_coeff=1.0, diagonal=None):
        if scheme not in SCHEMES:
            raise ConfigurationError(f"unknown Laplacian scheme {scheme!r}")
        if scheme == SPECTRAL and grid.boundary != PERIODIC:
            raise ConfigurationError("spectral scheme requires a periodic grid")
        self.grid = grid
        self.scheme = scheme
        self.laplace_coeff = float(laplace_coeff)
        self.diagonal = None if diagonal is None else np.asarray(diagonal, dtype=float).reshape(-1)
        if self.diagonal is not None and self.diagonal.size != grid.size:
            raise ValueError("diagonal size does not match grid size")
        axis_syms = [
            _axis_symbol(n, h, grid.boundary, scheme)
            for n, h in zip(grid.points_per_axis, grid.spacings)
        ]
        sym = np.zeros(grid.shape)
        for a, s in enumerate(axis_syms):
            shp = [1] * grid.dimension
            shp[a] = s.size
            sym = sym + s.reshape(shp)
        self._symbol_grid = sym
        self._dense = None

    @property
    def shape(self):
        return (self.grid.size, self.grid.size)

    @property
    def laplacian_symbol(self):
        """Flat transform-space eigenvalues of the bare Laplacian (<= 0)."""
        return self._symbol_grid.reshape(-1)

    def transform(self, f):
        """Forward transform to the Laplacian eigenbasis (flat in, flat out)."""
        arr = np.asarray(f).reshape(self.grid.shape)
        if self.grid.boundary == PERIODIC:
            out = scipy.fft.fftn(arr)
        else:
            out = scipy.fft.dstn(arr, type=1)
        return out.reshape(-1)

    def inverse_transform(self, F):
        arr = np.asarray(F).reshape(self.grid.shape)
        if self.grid.boundary == PERIODIC:
            out = scipy.fft.ifftn(arr)
        else:
            out = scipy.fft.idstn(arr, type=1)
        return out.reshape(-1)

    def apply_laplacian(self, f):
        f = np.asarray(f).reshape(-1)
        out = self.inverse_transform(self._symbol_grid.reshape(-1) * self.transform(f))
        if np.isrealobj(f):
            out = out.real
        return out

    def apply(self, f):
        f = np.asarray(f).reshape(-1)
        out = self.laplace_coeff * self.apply_laplacian(f)
        if self.diagonal is not None:
            out = out + self.diagonal * f
        return out

    def __call__(self, f):
        return self.apply(f)

    def to_dense(self):
        if self._dense is None:
            g = self.grid
            blocks = [
                _axis_dense(n, h, g.boundary, self.scheme)
                for n, h in zip(g.points_per_axis, g.spacings)
            ]
            lap = np.zeros((g.size, g.size))
            for a, blk in enumerate(blocks):
                factors = [np.eye(n) for n in g.points_per_axis]
                factors[a] = blk
                term = factors[0]
                for fac in factors[1:]:
                    term = np.kron(term, fac)
                lap += term
            dense = self.laplace_coeff * lap
            if self.diagonal is not None:
                dense = dense + np.diag(self.diagonal)
            self._dense = 0.5 * (dense + dense.T)
        return self._dense


def build_laplacian(grid: Grid, scheme: str = SPECTRAL) -> GridOperator:
    """Discrete Laplacian as a self-adjoint, negative-semidefinite operator.

    ``scheme="spectral"`` (periodic only) makes plane waves exp(i k.r) exact
    eigenvectors with eigenvalue -k^2; ``"finite_difference_2nd"`` is the
    standard second-order stencil with periodic wrap or Dirichlet truncation.
    """
    return GridOperator(grid, scheme, laplace_coeff=1.0, diagonal=None)
