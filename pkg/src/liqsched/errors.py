"""Exception hierarchy.

``ValidationError`` subclasses signal malformed input (CLI exit code 2);
``NumericalError`` subclasses signal a degenerate model (CLI exit code 3).
"""


class LiqschedError(Exception):
    """Base class for all package errors."""


class ValidationError(LiqschedError, ValueError):
    pass


class NumericalError(LiqschedError, ArithmeticError):
    pass


class DimensionError(ValidationError):
    pass


class InvalidStepCount(ValidationError):
    pass


class InvalidTau(ValidationError):
    pass


class UnsupportedKind(ValidationError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class DegenerateVolatility(NumericalError):
    pass


class DegenerateRisk(NumericalError):
    pass


class DegenerateMarket(NumericalError):
    pass


class ZeroNotional(NumericalError):
    pass


class NoInteriorMinimum(NumericalError):
    """The VaR objective is already increasing at M = 1.

    ``horizon`` carries the immediate-liquidation answer (M* = 1) so callers
    that want a number instead of an error can still use it.
    """

    def __init__(self, message, horizon=None):
        super().__init__(message)
        self.horizon = horizon
