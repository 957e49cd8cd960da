# helmholtz.py
import logging
from typing import Callable

import numpy as np

from sobolev_anderson.anderson import FixedPointProblem
from sobolev_anderson.errors import DimensionMismatchError, InvalidParameterError
from sobolev_anderson.grid import complex_tridiag_solve
from .config import NHL_H, NHL_K0

logger = logging.getLogger(__name__)


def kerr_profile(x: np.ndarray) -> np.ndarray:
    """Piecewise-constant grated Kerr coefficient ε(x) on [0, 1]"""
    x = np.asarray(x, dtype=float)
    return np.select(
        [x <= 0.1, x <= 0.2, x <= 0.3, x <= 0.7],
        [0.0, 1.0, 2.0, 3.0],
        default=4.0,
    )


class NonlinearHelmholtzProblem(FixedPointProblem):
    """
    u'' + k0²(1 + ε|u|²)u = 0 on [0, 1] with u'(0) + ik0u(0) = 2ik0 and u'(1) − ik0u(1) = 0.

    One application of G freezes the coefficient at the current iterate and
    solves the resulting linear tridiagonal system. Both Robin conditions are
    closed with a ghost point eliminated through a centered difference.
    """

    name: str = "nlh"
    k0: float
    x_grid: np.ndarray
    eps: np.ndarray
    is_complex: bool = True

    def _operator(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        h, k0 = self.h, self.k0
        inv_h2 = 1.0 / h**2
        q = k0**2 * (1.0 + self.eps * np.abs(u) ** 2)

        diag = (-2.0 * inv_h2 + q).astype(complex)
        lower = np.full(self.n - 1, inv_h2, dtype=complex)
        upper = np.full(self.n - 1, inv_h2, dtype=complex)
        rhs = np.zeros(self.n, dtype=complex)

        # ghost points u_{-1} and u_{N+1} eliminated from the Robin conditions
        diag[0] += 2j * k0 / h
        upper[0] = 2.0 * inv_h2
        rhs[0] = 4j * k0 / h
        diag[-1] += 2j * k0 / h
        lower[-1] = 2.0 * inv_h2
        return lower, diag, upper, rhs

    def apply_G(self, x):
        if x.ndim != 1:
            raise DimensionMismatchError("nonlinear Helmholtz map acts on single vectors only")
        lower, diag, upper, rhs = self._operator(x)
        return complex_tridiag_solve(lower, diag, upper, rhs)

    def initial_guess(self):
        return np.exp(1j * self.k0 * self.x_grid)


def build_nonlinear_helmholtz(
    k0: float = NHL_K0,
    h: float = NHL_H,
    eps: Callable[[np.ndarray], np.ndarray] | np.ndarray | None = None,
) -> NonlinearHelmholtzProblem:
    """
    Build the nonlinear Helmholtz fixed-point problem.

    Args:
        k0: Linear wavenumber (k0 > 0)
        h: Grid spacing; the grid x_j = jh covers [0, 1]
        eps: Kerr coefficient as a callable or samples (kerr_profile when omitted)

    Returns:
        NonlinearHelmholtzProblem with initial guess e^{ik0x}
    """
    if k0 <= 0:
        raise InvalidParameterError(f"wavenumber must be positive, got {k0}")
    if h <= 0 or h >= 0.5:
        raise InvalidParameterError(f"grid spacing must lie in (0, 0.5), got {h}")
    points = int(round(1.0 / h)) + 1
    x = h * np.arange(points)
    if eps is None:
        eps_values = kerr_profile(x)
    elif callable(eps):
        eps_values = np.asarray(eps(x), dtype=float)
    else:
        eps_values = np.broadcast_to(np.asarray(eps, dtype=float), x.shape).copy()

    logger.debug("Built nonlinear Helmholtz problem, k0=%g, %d points", k0, points)
    return NonlinearHelmholtzProblem(n=points, h=h, k0=k0, x_grid=x, eps=eps_values)
