"""Bogoliubov excitations, zero mode, and approximate vacuum of a trapped
Bose-Einstein condensate near T = 0.

The pipeline: solve the stationary Gross-Pitaevskii equation (:mod:`gp`),
expand fluctuations in the lowest eigenfunctions of the effective one-body
Hamiltonian (:mod:`basis`), assemble the quadratic-form matrices
(:mod:`quadform`), diagonalize eta*M symplectically and extract the
broken-symmetry zero mode (:mod:`bogoliubov`), and build the closed-form
vacuum factors (:mod:`vacuum`). :mod:`oracle` provides independent
cross-checks, :mod:`snapshot` bit-exact persistence, and :mod:`cli` a
configuration-driven command line.

Submodules are loaded on first attribute access so that ``import bdgz``
stays lightweight and the command line can cap the BLAS/FFT thread pools
(BDGZ_THREADS) before numpy is first imported.
"""

import importlib

__version__ = "0.1.0"

_EXPORTS = {
    "basis": ["BasisSet", "build_effective_hamiltonian", "solve_basis"],
    "bogoliubov": [
        "SymplecticSpectrum",
        "ZeroMode",
        "canonical_transform",
        "diagonalize",
        "extract_zero_mode",
    ],
    "errors": [
        "BdgzError",
        "ConfigurationError",
        "ConvergenceError",
        "NumericalError",
        "StructuralError",
        "StructureWarning",
        "TruncationWarning",
        "UnsupportedParameterError",
        "UnsupportedStructureError",
        "ZeroModeMissingError",
    ],
    "gp": [
        "CondensateState",
        "PhysicalParams",
        "SolverOptions",
        "condensate_energy",
        "gp_residual",
        "solve_ground_state",
    ],
    "grid": [
        "FINITE_DIFFERENCE",
        "HARD_WALL",
        "PERIODIC",
        "SPECTRAL",
        "Grid",
        "GridOperator",
        "TrapPotential",
        "build_laplacian",
        "inner_product",
        "l2_norm",
    ],
    "oracle": [
        "HomogeneousParams",
        "analytic_amplitudes",
        "analytic_zero_mode",
        "direct_bdg_solve",
        "dispersion",
    ],
    "pipeline": ["ExcitationResult", "excitation_spectrum"],
    "quadform": [
        "GroundEnergyConstants",
        "QuadraticForm",
        "assemble",
        "build_M",
        "export_quadratic_form",
        "ground_energy_constants",
    ],
    "snapshot": ["load_basis", "load_state", "save_basis", "save_state"],
    "vacuum": [
        "PairedModeVacuum",
        "ZeroModeVacuum",
        "annihilation_residual",
        "hermite_function_values",
        "pair_vacuum",
        "zero_mode_vacuum",
    ],
}

_ATTR_TO_MODULE = {name: mod for mod, names in _EXPORTS.items() for name in names}

__all__ = sorted(_ATTR_TO_MODULE) + sorted(_EXPORTS)


def __getattr__(name):
    module_name = _ATTR_TO_MODULE.get(name)
    if module_name is None:
        if name in _EXPORTS:
            return importlib.import_module(f".{name}", __name__)
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    value = getattr(importlib.import_module(f".{module_name}", __name__), name)
    globals()[name] = value
    return value


def __dir__():
    return sorted(set(globals()) | set(__all__))
