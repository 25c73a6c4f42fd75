"""Exception hierarchy shared across the package."""


class EvtriskError(Exception):
    """Base class for all errors raised by evtrisk."""


class DataError(EvtriskError):
    """Malformed or inconsistent input data (bad CSV rows, duplicate dates, ...)."""


class EstimationError(EvtriskError):
    """An estimator could not produce a usable result on the given input."""


class NegativeGammaError(EstimationError):
    """Bias correction drove the extreme value index to a nonpositive value.

    Carries the uncorrected fit so callers can inspect it; we never silently
    substitute the uncorrected estimate for the corrected one.
    """

    def __init__(self, message, fallback=None):
        super().__init__(message)
        self.fallback = fallback


class ConvergenceError(EstimationError):
    """An iterative optimizer failed to converge from every starting point."""
