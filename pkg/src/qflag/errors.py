"""Exception types raised across the package."""


class QFlagError(Exception):
    """Base class for all package errors."""


class InvalidArgument(QFlagError, ValueError):
    pass


class DivisionByZero(QFlagError, ZeroDivisionError):
    pass


class PoleAtPoint(QFlagError, ArithmeticError):
    pass


class ZeroBase(QFlagError, ArithmeticError):
    pass


class NoSolution(QFlagError, ArithmeticError):
    pass


class NotIrreducibleFlag(QFlagError, ValueError):
    pass


class NotInPositiveCone(QFlagError, ValueError):
    pass


class NonDominantWeight(QFlagError, ValueError):
    pass


class DecompositionIncomplete(QFlagError, RuntimeError):
    pass


class PropagationFailure(QFlagError, RuntimeError):
    pass


class NotASubmodule(QFlagError, ValueError):
    pass


class RankMismatch(QFlagError, RuntimeError):
    pass


class FiltrationUnset(QFlagError, ValueError):
    pass


class DegreeMismatch(QFlagError, ValueError):
    pass
