# bands.py
import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, field_validator

from sobolev_anderson.errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    InvalidParameterError,
    NotPositiveDefiniteError,
    SingularSystemError,
)
from .functions import as_array, like


class SymmetricBandMatrix(BaseModel):
    """
    Symmetric band matrix kept as its lower diagonals.

    bands[d, j] holds B[j + d, j]; the last d entries of row d are padding.
    This is the layout scipy.linalg.cholesky_banded expects with lower=True.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bands: np.ndarray

    @field_validator("bands", mode="before")
    @classmethod
    def _as_lower_bands(cls, value):
        arr = np.atleast_2d(np.asarray(value, dtype=float))
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise InvalidDimensionError(f"band storage must be (bw+1, n) with n >= 1, got {arr.shape}")
        return arr

    @property
    def n(self) -> int:
        return self.bands.shape[1]

    @property
    def bw(self) -> int:
        return self.bands.shape[0] - 1

    @classmethod
    def from_sparse(cls, matrix, bw: int) -> "SymmetricBandMatrix":
        matrix = sp.csr_matrix(matrix)
        n = matrix.shape[0]
        bands = np.zeros((bw + 1, n))
        for d in range(bw + 1):
            bands[d, : n - d] = matrix.diagonal(-d)
        return cls(bands=bands)

    def diagonal(self, offset: int = 0) -> np.ndarray:
        d = abs(offset)
        return self.bands[d, : self.n - d]

    def to_sparse(self) -> sp.csr_matrix:
        offsets, diagonals = [0], [self.bands[0]]
        for d in range(1, self.bw + 1):
            diagonals += [self.diagonal(d), self.diagonal(d)]
            offsets += [-d, d]
        return sp.diags(diagonals, offsets, shape=(self.n, self.n), format="csr")

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def matvec(self, x) -> np.ndarray:
        x = as_array(x)
        if x.shape[0] != self.n:
            raise DimensionMismatchError(f"matrix of order {self.n} applied to length {x.shape[0]}")
        scale = (lambda v: v) if x.ndim == 1 else (lambda v: v[:, None])
        y = scale(self.bands[0]) * x
        for d in range(1, self.bw + 1):
            sub = scale(self.diagonal(d))
            y[d:] += sub * x[:-d]
            y[:-d] += sub * x[d:]
        return y


class BandFactor(BaseModel):
    """Lower Cholesky factor L of an SPD band matrix, B = L Lᵀ, in band storage"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lower: np.ndarray

    @property
    def n(self) -> int:
        return self.lower.shape[1]

    @property
    def bw(self) -> int:
        return self.lower.shape[0] - 1


def laplacian_neumann(n: int, h: float) -> SymmetricBandMatrix:
    """
    Half-sample Neumann Laplacian K_n: diagonal (-1, -2, ..., -2, -1)/h², off-diagonals 1/h².

    Args:
        n: Number of grid points (n >= 2)
        h: Grid spacing

    Returns:
        Tridiagonal SymmetricBandMatrix whose rows sum to zero
    """
    if n < 2:
        raise InvalidDimensionError(f"Neumann Laplacian needs n >= 2, got {n}")
    if h <= 0:
        raise InvalidParameterError(f"grid spacing must be positive, got {h}")
    inv_h2 = 1.0 / h**2
    main = np.full(n, -2.0 * inv_h2)
    main[0] = main[-1] = -inv_h2
    sub = np.full(n, inv_h2)
    sub[-1] = 0.0
    return SymmetricBandMatrix(bands=np.vstack([main, sub]))


def laplacian_dirichlet(n: int, h: float) -> SymmetricBandMatrix:
    """
    Second-order Dirichlet Laplacian M: constant diagonal -2/h², off-diagonals 1/h².

    Args:
        n: Number of interior unknowns (n >= 1)
        h: Grid spacing

    Returns:
        Tridiagonal SymmetricBandMatrix
    """
    if n < 1:
        raise InvalidDimensionError(f"Dirichlet Laplacian needs n >= 1, got {n}")
    if h <= 0:
        raise InvalidParameterError(f"grid spacing must be positive, got {h}")
    inv_h2 = 1.0 / h**2
    main = np.full(n, -2.0 * inv_h2)
    sub = np.full(n, inv_h2)
    sub[-1] = 0.0
    return SymmetricBandMatrix(bands=np.vstack([main, sub]))


def spd_band_factor(matrix: SymmetricBandMatrix) -> BandFactor:
    """Banded Cholesky factorization without pivoting"""
    try:
        lower = sla.cholesky_banded(matrix.bands, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"band matrix of order {matrix.n} is not positive definite") from exc
    return BandFactor(lower=lower)


def spd_band_solve(factor: BandFactor, rhs):
    """
    Solve B y = rhs given the band Cholesky factor of B.

    Complex right-hand sides are solved part by part, since B is real.
    A 2D rhs is treated as a block of columns.
    """
    values = as_array(rhs)
    if values.shape[0] != factor.n:
        raise DimensionMismatchError(f"factor of order {factor.n} applied to length {values.shape[0]}")
    if np.iscomplexobj(values):
        y = sla.cho_solve_banded((factor.lower, True), values.real.copy()) + 1j * sla.cho_solve_banded(
            (factor.lower, True), values.imag.copy()
        )
    else:
        y = sla.cho_solve_banded((factor.lower, True), np.asarray(values, dtype=float))
    return like(rhs, y)


def complex_tridiag_solve(lower, diag, upper, rhs):
    """
    Solve a (possibly indefinite) complex tridiagonal system with partial pivoting.

    Args:
        lower: Sub-diagonal, length n-1
        diag: Main diagonal, length n
        upper: Super-diagonal, length n-1
        rhs: Right-hand side, length n

    Returns:
        Solution with the same wrapper type as rhs

    Raises:
        SingularSystemError: if a zero pivot remains after pivoting
    """
    diag = np.asarray(diag, dtype=complex)
    lower = np.asarray(lower, dtype=complex)
    upper = np.asarray(upper, dtype=complex)
    values = np.asarray(as_array(rhs), dtype=complex)
    n = diag.size
    if lower.size != n - 1 or upper.size != n - 1 or values.shape[0] != n:
        raise DimensionMismatchError(
            f"tridiagonal lengths disagree: lower={lower.size}, diag={n}, upper={upper.size}, rhs={values.shape[0]}"
        )

    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = upper
    ab[1] = diag
    ab[2, :-1] = lower
    try:
        y = sla.solve_banded((1, 1), ab, values)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"tridiagonal system of order {n} is singular") from exc
    return like(rhs, y)
