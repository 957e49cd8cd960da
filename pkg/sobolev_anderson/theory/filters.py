# filters.py
import numpy as np

from sobolev_anderson.errors import InvalidParameterError


def waveholtz_beta(lam, omega: float):
    """
    WaveHoltz filter transfer function β(λ) = (2/T)∫₀ᵀ (cos ωt − ¼) cos λt dt, T = 2π/ω.

    With r = λ/ω this is sinc(2(1 − r)) + sinc(2(1 + r)) − ½·sinc(2r), using the
    normalized sinc, so λ = 0 and λ = ω need no special casing.
    """
    if omega <= 0:
        raise InvalidParameterError(f"omega must be positive, got {omega}")
    r = np.asarray(lam, dtype=float) / omega
    if np.any(r < 0):
        raise InvalidParameterError("frequencies must be nonnegative")
    beta = np.sinc(2.0 * (1.0 - r)) + np.sinc(2.0 * (1.0 + r)) - 0.5 * np.sinc(2.0 * r)
    return float(beta) if beta.ndim == 0 else beta
