"""
Exception hierarchy for qfs_heights.

Every error raised on purpose by the library derives from QFSError, so the
CLI can turn any of them into a usage-style exit status with one handler.
"""

from typing import Optional


class QFSError(Exception):
    """Base class for all qfs_heights errors."""
    pass


class ConfigError(QFSError):
    """Malformed configuration value (usually an environment variable)."""
    pass


class UnsupportedParametersError(QFSError):
    """Parameters outside a configured cost cap or supported range."""
    pass


class FieldError(QFSError):
    """Invalid finite-field request or field-element literal."""
    pass


class DivisorError(QFSError):
    """Invalid divisor for the requested operation."""
    pass


class DivisorLiteralError(DivisorError):
    """Malformed `coeff:point` divisor literal."""
    pass


class NotLogFanoError(DivisorError):
    """The pair is not log Fano (deg(K+D) >= 0 or a coefficient >= 1)."""
    pass


class MissingSupportError(DivisorError):
    """A computation needs point coordinates but got labeled points."""
    pass


class SingularCurveError(QFSError):
    """The Weierstrass cubic is not squarefree."""
    pass


class ExcludedCharacteristicError(QFSError):
    """The requested object is not available in this characteristic."""
    pass


class PrecisionError(QFSError):
    """A p-adic computation changed its answer when precision was raised."""
    pass


class UnresolvedHeightError(QFSError):
    """Neither the cover oracle nor the vanishing route decides the height."""
    pass


class WindowOverflowError(QFSError):
    """A normal form needs a larger window than the configured cap."""

    def __init__(self, message: str, required: Optional[int] = None):
        super().__init__(message)
        self.required = required
