"""Exception types raised by the evaluators and audits."""


class CritlineError(Exception):
    """Base class for every error raised by this package."""


class PoleError(CritlineError, ValueError):
    """Evaluation requested at (or numerically on top of) a pole."""


class PreconditionError(CritlineError, ValueError):
    """An argument violates the documented precondition of an operation."""


class ConvergenceRegionError(PreconditionError):
    """A direct series was asked for a point outside its convergence region."""


class InsufficientZerosError(PreconditionError):
    pass


class NoSignChangeError(CritlineError, ValueError):
    pass


class ScanExhaustedError(CritlineError, RuntimeError):
    """A zero scan could not find the requested number of zeros."""


class NotPrimitiveError(PreconditionError):
    pass


class DenominatorZeroError(CritlineError, ZeroDivisionError):
    pass


class BoundaryTooCoarseError(CritlineError, RuntimeError):
    """Argument-principle boundary still has a phase jump >= pi/2."""
