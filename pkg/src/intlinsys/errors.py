"""Exception hierarchy shared by all modules."""


class IntervalError(Exception):
    """Base class for every error raised by the package."""


class DomainError(IntervalError, ValueError):
    """An operation was applied outside its domain, e.g. division by an interval containing 0."""


class IntervalOverflowError(IntervalError, OverflowError):
    pass


class DimensionError(IntervalError, ValueError):
    pass


class NonSquareError(DimensionError):
    pass


class EmptyIntersectionError(IntervalError):
    """Raised where an intersection is guaranteed non-empty in exact arithmetic but came out empty."""


class SingularMidpointError(IntervalError, ArithmeticError):
    pass


class VerificationFailedError(IntervalError, ArithmeticError):
    """A contraction or positivity check needed for a rigorous bound did not pass."""


class NotCertifiedError(VerificationFailedError):
    """The system is not certified regular, so no solver may run on it."""


class DegenerateBoundError(IntervalError, ArithmeticError):
    pass


class DegenerateHullError(IntervalError, ZeroDivisionError):
    pass


class GenerationExhaustedError(IntervalError, RuntimeError):
    pass
