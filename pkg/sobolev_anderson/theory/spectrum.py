# spectrum.py
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from sobolev_anderson.grid import random_orthogonal
from .chebyshev import check_interval


class SpectrumSpec(BaseModel):
    """Synthetic symmetric A = WΛWᵀ with eigenvalues in [a, b] and a seeded initial error"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    a: float
    b: float
    placement: Literal["equispaced", "chebyshev", "random"] = "equispaced"
    basis: Literal["identity", "random"] = "random"
    seed: int = 0

    @model_validator(mode="after")
    def _check_interval(self):
        check_interval(self.a, self.b)
        return self


def eigenvalues(spec: SpectrumSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.n == 1:
        return np.array([0.5 * (spec.a + spec.b)])
    if spec.placement == "equispaced":
        return np.linspace(spec.a, spec.b, spec.n)
    if spec.placement == "chebyshev":
        j = np.arange(1, spec.n + 1)
        nodes = np.cos((2 * j - 1) * np.pi / (2 * spec.n))
        return np.sort(0.5 * (spec.a + spec.b) + 0.5 * (spec.b - spec.a) * nodes)
    return np.sort(rng.uniform(spec.a, spec.b, spec.n))


def spectrum_realization(spec: SpectrumSpec, trial: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Eigenbasis, eigenvalues and initial error for one seeded trial.

    Returns:
        (W, lam, e0)
    """
    rng = np.random.default_rng([spec.seed, trial])
    lam = eigenvalues(spec, rng)
    W = np.eye(spec.n) if spec.basis == "identity" else random_orthogonal(spec.n, spec.seed * 100_003 + trial)
    e0 = rng.standard_normal(spec.n)
    return W, lam, e0


def inverse_square_sigma(n: int) -> np.ndarray:
    """Σ_jj = 1/j², a weight sharing A's eigenvectors with max |Σ_jj| = 1"""
    return 1.0 / np.arange(1, n + 1) ** 2
