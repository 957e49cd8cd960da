# errors.py


class AccelerationError(Exception):
    """Base class for every error raised by sobolev_anderson"""


class InvalidDimensionError(AccelerationError, ValueError):
    """A grid or matrix dimension is out of range"""


class InvalidParameterError(AccelerationError, ValueError):
    """A scalar parameter (memory, CFL, counts) is out of range"""


class DimensionMismatchError(AccelerationError, ValueError):
    """Operands have incompatible lengths"""


class InvalidIntervalError(AccelerationError, ValueError):
    """A spectral interval contains 0 or 1, or is empty"""


class NotPositiveDefiniteError(AccelerationError, ArithmeticError):
    """A Cholesky-type factorization met a non-positive pivot"""


class SingularSystemError(AccelerationError, ArithmeticError):
    """A linear system is singular after pivoting"""


class SingularGramError(AccelerationError, ArithmeticError):
    """The weighted Gram matrix of a difference window is singular"""


class EmptyWindowError(AccelerationError, ArithmeticError):
    """Every column of the difference window had to be dropped"""


class DegenerateKrylovError(AccelerationError, ArithmeticError):
    """A Krylov matrix lost rank"""


class UnsupportedProblemError(AccelerationError, NotImplementedError):
    """The requested operation is not defined for this problem"""
