"""Exception types raised across the package."""


class ShiftConvError(Exception):
    """Base class for all package errors."""


class NotInvertible(ShiftConvError, ValueError):
    pass


class NotCoprime(ShiftConvError, ValueError):
    pass


class NonpositiveBase(ShiftConvError, ValueError):
    pass


class OutOfRange(ShiftConvError, IndexError):
    pass


class TableTooSmall(ShiftConvError, ValueError):
    pass


class InsufficientSourceTable(ShiftConvError, ValueError):
    pass


class WindowMismatch(ShiftConvError, ValueError):
    pass


class EmptyShiftSet(ShiftConvError, ValueError):
    pass


class EmptySupport(ShiftConvError, ValueError):
    pass


class DegenerateFit(ShiftConvError, ValueError):
    pass


class ConfigError(ShiftConvError, ValueError):
    pass


class NumericalInconsistency(ShiftConvError, ArithmeticError):
    """A quantity that must be real (or integral) came out otherwise."""


class QuadratureFailure(ShiftConvError, ArithmeticError):
    """Adaptive integration exhausted its panel budget."""
