# least_squares.py
import logging

import numpy as np
import scipy.linalg as sla

from sobolev_anderson.errors import EmptyWindowError, InvalidParameterError, SingularGramError
from sobolev_anderson.grid import as_array
from sobolev_anderson.norms import WeightBase, gram_system
from .config import AA_RIDGE

logger = logging.getLogger(__name__)

# Pivot ratio below which a Cholesky factor is treated as numerically singular
PIVOT_RATIO = np.sqrt(np.finfo(float).eps)


def hermitian_solve(G: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Solve G y = rhs for Hermitian positive definite G after symmetric diagonal scaling.

    Raises:
        SingularGramError: if the scaled Cholesky factorization fails or a pivot collapses
    """
    d = np.sqrt(np.abs(np.real(np.diag(G))))
    d[~(d > 0)] = 1.0
    S = G / np.outer(d, d)
    try:
        c, low = sla.cho_factor(S, lower=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularGramError(f"Gram matrix of order {G.shape[0]} is not positive definite") from exc

    pivots = np.abs(np.diag(c))
    if pivots.min() <= PIVOT_RATIO * pivots.max():
        raise SingularGramError(f"Gram matrix of order {G.shape[0]} is numerically singular")
    scaled_rhs = rhs / (d[:, None] if rhs.ndim == 2 else d)
    y = sla.cho_solve((c, low), scaled_rhs)
    return y / (d[:, None] if y.ndim == 2 else d)


def solve_gamma(D, f, wop: WeightBase, reg: float = AA_RIDGE) -> np.ndarray:
    """
    Coefficients γ minimizing ‖f − Dγ‖ in the weighted norm.

    The normal equations are tried as they are, then with a ridge of
    reg·trace(G)/m, then with the oldest remaining column removed, until a
    solve succeeds. Removed columns get γ_i = 0.

    Args:
        D: n x m residual differences, oldest column first
        f: Current residual
        wop: Weight operator for the inner product
        reg: Relative ridge parameter

    Returns:
        γ of length m

    Raises:
        EmptyWindowError: if every column had to be removed
    """
    D = np.asarray(as_array(D))
    if D.ndim == 1:
        D = D[:, None]
    m = D.shape[1]
    if m < 1:
        raise EmptyWindowError("no residual differences to combine")
    if reg < 0:
        raise InvalidParameterError(f"ridge parameter must be nonnegative, got {reg}")

    G, g = gram_system(wop, D, f)
    gamma = np.zeros(m, dtype=np.result_type(G, g))
    active = list(range(m))
    while active:
        Ga = G[np.ix_(active, active)]
        ga = g[active]
        try:
            gamma[active] = hermitian_solve(Ga, ga)
            return gamma
        except SingularGramError:
            pass

        if reg > 0:
            ridge = reg * np.real(np.trace(Ga)) / len(active)
            try:
                gamma[active] = hermitian_solve(Ga + ridge * np.eye(len(active)), ga)
                logger.warning("Gram matrix needed a ridge of %.3e (window %d)", ridge, len(active))
                return gamma
            except SingularGramError:
                pass

        logger.warning("Dropping oldest column from a singular window of %d", len(active))
        active.pop(0)

    raise EmptyWindowError("every column of the window was linearly dependent")


def constrained_alpha(F, wop: WeightBase, reg: float = AA_RIDGE) -> np.ndarray:
    """
    Affine weights α (Σα = 1) minimizing ‖F α‖ in the weighted norm.

    The constraint is removed with γ_i = α_0 + ... + α_i, which turns the
    problem into the unconstrained one over the differences of F's columns.

    Args:
        F: n x (m+1) residuals f_{k-m}, ..., f_k, oldest first

    Returns:
        α of length m+1
    """
    F = np.asarray(as_array(F))
    if F.ndim == 1:
        F = F[:, None]
    if F.shape[1] < 1:
        raise InvalidParameterError("constrained weights need at least one residual")
    if F.shape[1] == 1:
        return np.ones(1, dtype=F.dtype)

    D = np.diff(F, axis=1)
    gamma = solve_gamma(D, F[:, -1], wop, reg)
    alpha = np.empty(F.shape[1], dtype=gamma.dtype)
    alpha[0] = gamma[0]
    alpha[1:-1] = np.diff(gamma)
    alpha[-1] = 1.0 - np.sum(alpha[:-1])
    return alpha
