# chebyshev.py
import numpy as np

from sobolev_anderson.errors import InvalidIntervalError, InvalidParameterError


def check_interval(a: float, b: float) -> None:
    """Raise unless a < b and neither 0 nor 1 lies in [a, b]"""
    if not a < b:
        raise InvalidIntervalError(f"interval [{a}, {b}] is empty")
    for point in (0.0, 1.0):
        if a <= point <= b:
            raise InvalidIntervalError(f"interval [{a}, {b}] contains {point:g}")


def chebyshev_T(m: int, x: float) -> float:
    """Chebyshev polynomial T_m(x), via cos inside [-1, 1] and cosh outside"""
    if m < 0:
        raise InvalidParameterError(f"Chebyshev degree must be nonnegative, got {m}")
    if abs(x) <= 1.0:
        return float(np.cos(m * np.arccos(x)))
    return float(np.sign(x) ** m * np.cosh(m * np.arccosh(abs(x))))


def bound_C(a: float, b: float, m: int) -> float:
    """
    One-step Anderson contraction bound C(a, b, m) = 1/|T_m((2ab − a − b)/(b − a))|.

    Args:
        a: Lower end of the spectrum interval
        b: Upper end of the spectrum interval
        m: Memory

    Returns:
        C(a, b, m), nonincreasing in m
    """
    check_interval(a, b)
    return 1.0 / abs(chebyshev_T(m, (2.0 * a * b - a - b) / (b - a)))
