"""Exception hierarchy.

Validation errors signal bad inputs (CLI exit code 2); numerical failures
signal that a computation could not reach its target (CLI exit code 3).
"""


class GaborLabError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ValidationError(GaborLabError, ValueError):
    exit_code = 2


class NumericalFailure(GaborLabError, ArithmeticError):
    exit_code = 3


class ParameterDomain(ValidationError):
    pass


class NotPainlessEligible(ValidationError):
    pass


class InvalidLattice(ValidationError):
    pass


class BudgetExceeded(ValidationError):
    pass


class PreconditionFailed(ValidationError):
    pass


class DyadicBreakpoint(ValidationError):
    pass


class AtomFormatError(ValidationError):
    pass


class QuadratureFailure(NumericalFailure):
    pass


class FrameLowerBoundZero(NumericalFailure):
    pass


class GridTooCoarse(NumericalFailure):
    pass


class TruncationTooShallow(NumericalFailure):
    pass


class DomainTruncationWarning(UserWarning):
    """The STFT grid does not contain the bulk of |V f|."""
