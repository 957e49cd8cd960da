# spectral.py
from typing import Callable, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from sobolev_anderson.errors import DimensionMismatchError, InvalidDimensionError, InvalidParameterError
from .functions import as_array, like

ORTHOGONALITY_TOL = 1e-12


class SpectralOperator(BaseModel):
    """Symmetric operator W Λ Wᵀ given by an orthogonal W and real eigenvalues Λ"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    W: np.ndarray
    Lambda: np.ndarray

    @field_validator("W", mode="before")
    @classmethod
    def _as_matrix(cls, value):
        return np.atleast_2d(np.asarray(value, dtype=float))

    @field_validator("Lambda", mode="before")
    @classmethod
    def _as_vector(cls, value):
        return np.asarray(value, dtype=float).reshape(-1)

    @model_validator(mode="after")
    def _check_orthogonal(self):
        W, lam = self.W, self.Lambda
        if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] != lam.size:
            raise DimensionMismatchError(f"W of shape {W.shape} does not match {lam.size} eigenvalues")
        defect = np.max(np.abs(W.T @ W - np.eye(lam.size)))
        if defect > ORTHOGONALITY_TOL:
            raise InvalidParameterError(f"W is not orthogonal (defect {defect:.2e})")
        return self

    @property
    def n(self) -> int:
        return self.Lambda.size

    def to_dense(self) -> np.ndarray:
        return (self.W * self.Lambda) @ self.W.T


def spectral_apply(S: SpectralOperator, v):
    """Apply W·Λ·(Wᵀv); a 2D v is a block of columns"""
    values = as_array(v)
    if values.shape[0] != S.n:
        raise DimensionMismatchError(f"operator of order {S.n} applied to length {values.shape[0]}")
    return like(v, (S.W * S.Lambda) @ (S.W.T @ values))


def krylov_matrix(apply_A: Union[Callable, np.ndarray], b, m: int) -> np.ndarray:
    """
    Krylov matrix with columns b, Ab, ..., A^{m-1}b.

    Args:
        apply_A: Linear operator, either a callable v -> Av or a dense matrix
        b: Starting vector
        m: Number of columns (m >= 1)

    Returns:
        n x m array
    """
    if m < 1:
        raise InvalidParameterError(f"Krylov matrix needs m >= 1 columns, got {m}")
    if not callable(apply_A):
        matrix = np.asarray(apply_A)
        apply_A = lambda v: matrix @ v  # noqa: E731

    column = np.asarray(as_array(b))
    columns = [column]
    for _ in range(m - 1):
        column = np.asarray(as_array(apply_A(column)))
        columns.append(column)
    return np.column_stack(columns)


def random_orthogonal(n: int, seed: int) -> np.ndarray:
    """
    Seeded random orthogonal matrix.

    QR of a standard-normal matrix with the signs of R's diagonal folded into Q,
    so the result is unique for a given (n, seed).
    """
    if n < 1:
        raise InvalidDimensionError(f"orthogonal matrix needs n >= 1, got {n}")
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs
