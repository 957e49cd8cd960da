# poisson.py
import logging
from typing import Callable, Literal

import numpy as np

from sobolev_anderson.anderson import FixedPointProblem
from sobolev_anderson.errors import DimensionMismatchError, InvalidDimensionError
from sobolev_anderson.grid import SymmetricBandMatrix, laplacian_dirichlet, spd_band_factor, spd_band_solve
from .config import POISSON_ERROR_MODES, POISSON_N

logger = logging.getLogger(__name__)


class PoissonProblem(FixedPointProblem):
    """
    Discrete 1D Poisson problem M x = b on (0, 1) with homogeneous Dirichlet ends.

    variant "jacobi" is damped Jacobi with weight 2/3, G(x) = x + (h²/3)(Mx − b);
    variant "richardson" is G(x) = (I − M)x + b, which is not a contraction.
    """

    name: str = "poisson"
    variant: Literal["jacobi", "richardson"] = "jacobi"
    M: SymmetricBandMatrix
    b: np.ndarray
    x_grid: np.ndarray
    error_modes: int = POISSON_ERROR_MODES
    is_linear: bool = True

    def apply_G(self, x):
        Mx = self.M.matvec(x)
        b = self.b if x.ndim == 1 else self.b[:, None]
        if self.variant == "jacobi":
            return x + (self.h**2 / 3.0) * (Mx - b)
        return x - Mx + b

    def reference_solution(self):
        # −M is SPD
        negated = SymmetricBandMatrix(bands=-self.M.bands)
        return spd_band_solve(spd_band_factor(negated), -self.b)

    def initial_error(self) -> np.ndarray:
        """(e0)_j = Σ_{i=1}^{modes} sin(2πi·x_j)"""
        i = np.arange(1, self.error_modes + 1)
        return np.sin(2.0 * np.pi * np.outer(self.x_grid, i)).sum(axis=1)

    def initial_guess(self):
        return self.exact_solution() + self.initial_error()

    def iteration_eigenvalues(self) -> np.ndarray:
        """Closed-form eigenvalues of the linear part of G"""
        cosines = np.cos(np.arange(1, self.n + 1) * np.pi / (self.n + 1))
        if self.variant == "jacobi":
            return 1.0 / 3.0 + (2.0 / 3.0) * cosines
        return 1.0 + (2.0 - 2.0 * cosines) / self.h**2


def build_poisson(
    variant: Literal["jacobi", "richardson"] = "jacobi",
    n: int = POISSON_N,
    f: Callable[[np.ndarray], np.ndarray] | np.ndarray | None = None,
    error_modes: int = POISSON_ERROR_MODES,
) -> PoissonProblem:
    """
    Build the Poisson fixed-point problem.

    Args:
        variant: "jacobi" or "richardson"
        n: Number of interior unknowns (n >= 2), h = 1/(n+1)
        f: Right-hand side as a callable of x or as samples; f ≡ 1 when omitted
        error_modes: Number of sine modes in the initial error

    Returns:
        PoissonProblem
    """
    if n < 2:
        raise InvalidDimensionError(f"Poisson problem needs n >= 2, got {n}")
    h = 1.0 / (n + 1)
    x = h * np.arange(1, n + 1)
    if f is None:
        b = np.ones(n)
    elif callable(f):
        b = np.asarray(f(x), dtype=float)
    else:
        b = np.asarray(f, dtype=float)
    if b.shape != (n,):
        raise DimensionMismatchError(f"right-hand side has shape {b.shape}, expected ({n},)")

    logger.debug("Built Poisson %s problem, n=%d", variant, n)
    return PoissonProblem(
        name=f"poisson_{variant}",
        variant=variant,
        n=n,
        h=h,
        M=laplacian_dirichlet(n, h),
        b=b,
        x_grid=x,
        error_modes=error_modes,
    )
