"""Exception hierarchy shared by the whole package.

The command line layer maps these onto distinct exit codes, so raising the
right class matters more than the message text.
"""


class BdgzError(Exception):
    """Base class for all package errors."""


class ConfigurationError(BdgzError):
    """Invalid grid/trap/solver configuration or incompatible inputs."""


class UnsupportedParameterError(ConfigurationError):
    """Physically valid but unsupported parameter range (e.g. g < 0)."""


class ConvergenceError(BdgzError):
    """Iterative solver failed to reach the requested tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class StructuralError(BdgzError):
    """The spectrum does not have the expected zero-mode structure."""


class ZeroModeMissingError(StructuralError):
    """No eigenvalue of eta*M within the zero tolerance."""


class UnsupportedStructureError(StructuralError):
    """Zero sector is not a single defective pair (e.g. g = 0 input)."""


class NumericalError(BdgzError):
    """Eigensolver failure or a violated numerical consistency check."""


class TruncationWarning(UserWarning):
    """Requested truncation is too small for the requested state."""


class StructureWarning(UserWarning):
    """Numerical structure deviates from the expected closed-form pattern."""
