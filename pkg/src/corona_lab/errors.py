"""Exception types shared across the package."""


class CoronaLabError(Exception):
    """Base class for all corona_lab errors."""


class IndexOutOfRange(CoronaLabError):
    """An index past the horizon was queried on a sequence with no tail rule."""


class PreconditionViolation(CoronaLabError):
    """An operation was called with arguments outside its contract."""


class TruncationExceeded(CoronaLabError):
    """A request went past the finite truncation of a set or matrix."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class HorizonTooSmall(CoronaLabError):
    """The working horizon cannot accommodate the requested construction.

    ``min_horizon``, when known, is the smallest horizon that would suffice.
    """

    def __init__(self, message, min_horizon=None):
        super().__init__(message)
        self.min_horizon = min_horizon


class InsufficientBlock(CoronaLabError):
    """A scheduled block does not contain enough sub-intervals."""


class WitnessNotFound(CoronaLabError):
    """A norm-witness search failed; the model violates its hypothesis."""


class NoStratification(CoronaLabError):
    """No chain level admits a certified near-block-diagonal decomposition."""


class ConstructionError(CoronaLabError):
    """A constructed object failed its own invariants."""


class InvalidSes(CoronaLabError):
    """A short-exact-sequence tower failed exactness or commutation checks."""
