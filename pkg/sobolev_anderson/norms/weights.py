# weights.py
import logging
import re
from typing import Tuple

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, Field

from sobolev_anderson.errors import DimensionMismatchError, InvalidDimensionError, InvalidParameterError
from sobolev_anderson.grid import (
    BandFactor,
    SymmetricBandMatrix,
    as_array,
    laplacian_neumann,
    spd_band_factor,
    spd_band_solve,
)

logger = logging.getLogger(__name__)

_NORM_PATTERN = re.compile(r"^(?:l2|hm(\d+))$")


class NormKind(BaseModel):
    """Sobolev order s of the H⁻ˢ weight; s = 0 is plain L²"""

    model_config = ConfigDict(frozen=True)

    s: int = Field(default=0, ge=0)

    @classmethod
    def parse(cls, label: str) -> "NormKind":
        """
        Parse a norm label: l2, hm1, hm2, ... hm{s}.

        Raises:
            InvalidParameterError: for anything else
        """
        match = _NORM_PATTERN.match(label.strip().lower())
        if not match:
            raise InvalidParameterError(f"unknown norm '{label}', expected l2 or hm<s>")
        return cls(s=int(match.group(1) or 0))

    @property
    def label(self) -> str:
        return "l2" if self.s == 0 else f"hm{self.s}"


class WeightBase(BaseModel):
    """Anything that can apply P² to a vector or to a block of columns"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int = Field(ge=1)
    h: float = Field(gt=0)

    def apply_p2(self, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check(self, v: np.ndarray) -> np.ndarray:
        v = as_array(v)
        if v.shape[0] != self.n:
            raise DimensionMismatchError(f"weight of order {self.n} applied to length {v.shape[0]}")
        return v


class WeightOperator(WeightBase):
    """
    Discrete H⁻ˢ weight: W_s = Σ_{r=0}^{s} (−K_n)^r with K_n the Neumann Laplacian.

    The inner product is ⟨u, v⟩ = h·u*·W_s⁻¹·v, so P² = W_s⁻¹ is only ever
    applied through band solves.
    """

    kind: NormKind
    matrix: SymmetricBandMatrix | None = None
    factor: BandFactor | None = None

    def apply_p2(self, v):
        v = self._check(v)
        if self.factor is None:
            return np.array(v, copy=True)
        return spd_band_solve(self.factor, v)


class SpectralWeight(WeightBase):
    """P² = W Σ² Wᵀ for a weight sharing the eigenvectors W of a symmetric operator"""

    W: np.ndarray
    sigma: np.ndarray

    def apply_p2(self, v):
        v = self._check(v)
        sigma2 = self.sigma**2
        coords = self.W.T @ v
        scaled = sigma2[:, None] * coords if coords.ndim == 2 else sigma2 * coords
        return self.W @ scaled


def assemble_weight_matrix(s: int, n: int, h: float) -> SymmetricBandMatrix:
    """W_s as a band matrix of half-bandwidth s"""
    K = laplacian_neumann(n, h).to_sparse()
    term = sp.identity(n, format="csr")
    total = sp.identity(n, format="csr")
    for _ in range(s):
        term = (term @ (-K)).tocsr()
        total = total + term
    return SymmetricBandMatrix.from_sparse(total, bw=min(s, n - 1))


def build_weight(kind: NormKind, n: int, h: float) -> WeightOperator:
    """
    Assemble and factor the H⁻ˢ weight for an n-point grid with spacing h.

    Args:
        kind: Sobolev order
        n: Grid size (n >= 2)
        h: Grid spacing

    Returns:
        WeightOperator ready to apply W_s⁻¹
    """
    if n < 2:
        raise InvalidDimensionError(f"weight needs n >= 2, got {n}")
    if h <= 0:
        raise InvalidParameterError(f"grid spacing must be positive, got {h}")
    if kind.s == 0:
        return WeightOperator(kind=kind, n=n, h=h)

    matrix = assemble_weight_matrix(kind.s, n, h)
    factor = spd_band_factor(matrix)
    logger.debug("Built %s weight, n=%d, h=%.3e", kind.label, n, h)
    return WeightOperator(kind=kind, n=n, h=h, matrix=matrix, factor=factor)


def weighted_inner(wop: WeightBase, u, v) -> complex:
    """h·u*·P²·v, conjugate-linear in u"""
    u = wop._check(u)
    value = wop.h * np.vdot(u, wop.apply_p2(v))
    return value if np.iscomplexobj(u) or np.iscomplexobj(v) else float(np.real(value))


def weighted_norm(wop: WeightBase, u) -> float:
    return float(np.sqrt(max(np.real(weighted_inner(wop, u, u)), 0.0)))


def gram_system(wop: WeightBase, D, f) -> Tuple[np.ndarray, np.ndarray]:
    """
    Weighted Gram matrix and right-hand side of the AA least-squares problem.

    Args:
        wop: Weight operator
        D: n x m block of residual differences
        f: Current residual

    Returns:
        (G, g) with G_ij = ⟨D_i, D_j⟩ and g_i = ⟨D_i, f⟩
    """
    D = np.asarray(as_array(D))
    if D.ndim == 1:
        D = D[:, None]
    if D.shape[1] < 1:
        raise InvalidParameterError("Gram system needs at least one column")
    f = wop._check(f)

    Y = wop.apply_p2(D)
    G = wop.h * (Y.conj().T @ D)
    G = 0.5 * (G + G.conj().T)
    g = wop.h * (Y.conj().T @ f)
    return G, g
