"""Exception hierarchy shared across the package."""


class InvVolError(Exception):
    """Base class for all errors raised by invvol."""


class DomainError(InvVolError, ValueError):
    """Input lies outside the region where an operation is defined."""


class NoConvergence(InvVolError, RuntimeError):
    """An iterative solver hit its iteration cap."""


class DegenerateVega(InvVolError, ArithmeticError):
    """Vega too small to divide by."""


class CovarianceError(InvVolError, ArithmeticError):
    """Cholesky factorization failed even after jitter."""


class QuoteParseError(InvVolError, ValueError):
    """Malformed quote file."""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class QuoteValidationError(InvVolError, ValueError):
    """Quote rows parse but violate value constraints."""


class SignError(InvVolError, ValueError):
    """Skews with mixed signs or zeros cannot be fitted in log space."""


class InsufficientData(InvVolError, ValueError):
    """Too few points for a fit."""
