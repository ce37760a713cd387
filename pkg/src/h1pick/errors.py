"""Exception types raised across the package."""


class H1PickError(Exception):
    """Base class for all package errors."""


class DegenerateTriangle(H1PickError, ValueError):
    """The origin is not strictly inside the triangle; use a diameter instead."""


class NotZeroMeanProbability(H1PickError, ValueError):
    pass


class NumericalStall(H1PickError, RuntimeError):
    pass


class PoleOnBoundary(H1PickError, ZeroDivisionError):
    pass


class PoleAtOne(H1PickError, ZeroDivisionError):
    pass


class RootOnBoundary(H1PickError, ValueError):
    pass


class DimensionMismatch(H1PickError, ValueError):
    pass


class IllConditionedGram(H1PickError, ArithmeticError):
    pass


class GridEmpty(H1PickError, ValueError):
    pass


class TargetOnBoundaryOfMap(H1PickError, ZeroDivisionError):
    pass


class IterationCapExceeded(RuntimeWarning):
    """Emitted (as a warning) when a solver stops on its iteration cap."""
