"""Exception types shared across the package."""


class QbmError(Exception):
    """Base class for all package errors."""


class QuadratureError(QbmError):
    """Numerical quadrature did not reach the requested tolerance.

    Carries the achieved absolute error estimate and the partial result.
    """

    def __init__(self, message, result=None, error_estimate=None):
        super().__init__(message)
        self.result = result
        self.error_estimate = error_estimate


class MappingError(QbmError):
    """Squeezed-bath parameter mapping is singular or degenerate."""


class TruncationError(QbmError):
    """Fock-space truncation too small for the requested computation.

    ``required_dim`` is a hint for a dimension that would suffice, when one
    can be estimated.
    """

    def __init__(self, message, required_dim=None, diagnostics=None):
        super().__init__(message)
        self.required_dim = required_dim
        self.diagnostics = diagnostics


class EvolutionError(QbmError):
    """Time integration failed (step-size underflow, solver breakdown)."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class GridError(QbmError):
    """Phase-space grid cannot support the requested operation."""


class PeakError(QbmError):
    """Wigner-grid peak could not be located near the hinted position."""


class ConfigError(QbmError):
    """Scenario configuration file is missing or malformed."""
