"""Exception hierarchy shared by all epspline modules."""


class SplineError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(SplineError, ValueError):
    """Malformed user input: unsorted knots, duplicate points, bad sizes."""


class DomainError(SplineError, ValueError):
    """Evaluation or construction outside the supported numerical domain."""


class BasisConstructionError(SplineError):
    """A local basis system is singular or too ill-conditioned to trust."""


class SingularSystemError(SplineError):
    """The collocation system is singular to working precision."""
