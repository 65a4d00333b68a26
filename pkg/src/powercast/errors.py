"""Exception hierarchy shared by every powercast module."""


class PowercastError(Exception):
    """Base class for all errors raised by this package."""


class MalformedCsv(PowercastError, ValueError):
    pass


class DuplicateDate(PowercastError, ValueError):
    pass


class NonNumericValue(PowercastError, ValueError):
    pass


class UnknownTarget(PowercastError, KeyError):
    pass


class AllMissing(PowercastError, ValueError):
    pass


class WindowTooLarge(PowercastError, ValueError):
    pass


class BadOrder(PowercastError, ValueError):
    pass


class NonPositiveAfterOffset(PowercastError, ValueError):
    pass


class NoLogStep(PowercastError, ValueError):
    pass


class TooShort(PowercastError, ValueError):
    pass


class HeadMismatch(PowercastError, ValueError):
    pass


class ConstantSeries(PowercastError, ValueError):
    pass


class LagTooLarge(PowercastError, ValueError):
    pass


class SingularRegression(PowercastError, ValueError):
    pass


class NonInvertible(PowercastError, ValueError):
    pass


class SingularExog(PowercastError, ValueError):
    pass


class MissingFutureExog(PowercastError, ValueError):
    pass


class NoValidModel(PowercastError, RuntimeError):
    pass


class AlphaOutOfRange(PowercastError, ValueError):
    pass


class ShapeMismatch(PowercastError, ValueError):
    pass


class NonFiniteLoss(PowercastError, FloatingPointError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class EmptyData(PowercastError, ValueError):
    pass


class BadHyperparameter(PowercastError, ValueError):
    pass


class LengthMismatch(PowercastError, ValueError):
    pass


class SplitOutOfRange(PowercastError, ValueError):
    pass


class EmptyGrid(PowercastError, ValueError):
    pass


class UnknownFamily(PowercastError, KeyError):
    pass


class BadConfig(PowercastError, ValueError):
    pass


class ConfigError(PowercastError, ValueError):
    pass


class NoConvergenceWarning(UserWarning):
    """Iteration cap hit during estimation; the best iterate is returned."""
