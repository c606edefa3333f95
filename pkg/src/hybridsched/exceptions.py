"""Exception hierarchy shared by the schedulers."""


class SchedulingError(Exception):
    """Base class for all errors raised by hybridsched."""


class InfeasibleDemand(SchedulingError, ValueError):
    """A row or column of the demand matrix exceeds the scheduling window."""


class DimensionMismatch(SchedulingError, ValueError):
    """Matrices or matchings disagree on the port count."""


class EmptyDemand(SchedulingError, ValueError):
    """A greedy step was requested on an all-zero demand matrix."""


class NotDoublyBalanced(SchedulingError, ValueError):
    """Row and column sums of a matrix are not all equal."""


class SpecMismatch(SchedulingError, ValueError):
    """A traffic spec is internally inconsistent (e.g. block sizes vs n)."""


class TooLarge(SchedulingError, ValueError):
    """Instance exceeds the size limits of a brute-force oracle."""


class NotFittedError(SchedulingError, AttributeError):
    """An estimator was used before ``fit``."""
