# problem.py
from typing import Callable

import numpy as np
import scipy.linalg as sla
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from sobolev_anderson.errors import DimensionMismatchError, SingularSystemError, UnsupportedProblemError
from sobolev_anderson.grid import as_array


class FixedPointProblem(BaseModel):
    """
    A fixed-point map x -> G(x) on vectors of length n.

    Subclasses implement apply_G, and reference_solution when the map is affine.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str = "problem"
    n: int = Field(ge=1)
    h: float = Field(default=1.0, gt=0)
    is_linear: bool = False
    is_complex: bool = False

    _x_star: np.ndarray | None = PrivateAttr(default=None)

    def apply_G(self, x) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x) -> np.ndarray:
        x = as_array(x)
        if x.shape[0] != self.n:
            raise DimensionMismatchError(f"{self.name} expects length {self.n}, got {x.shape[0]}")
        return self.apply_G(x)

    def initial_guess(self) -> np.ndarray:
        return np.zeros(self.n, dtype=complex if self.is_complex else float)

    def reference_solution(self) -> np.ndarray:
        raise UnsupportedProblemError(f"{self.name} has no direct reference solution")

    def exact_solution(self) -> np.ndarray | None:
        """Cached reference solution, or None when the problem has none"""
        if self._x_star is None:
            try:
                self._x_star = self.reference_solution()
            except UnsupportedProblemError:
                return None
        return self._x_star


class MapProblem(FixedPointProblem):
    """Wraps a plain callable as a fixed-point problem"""

    fn: Callable[[np.ndarray], np.ndarray]

    def apply_G(self, x):
        return np.asarray(self.fn(x))


class AffineProblem(FixedPointProblem):
    """G(x) = A x + b with a dense A"""

    A: np.ndarray
    b: np.ndarray
    is_linear: bool = True

    @model_validator(mode="after")
    def _check_shapes(self):
        if self.A.shape != (self.n, self.n) or self.b.shape != (self.n,):
            raise DimensionMismatchError(f"A {self.A.shape} and b {self.b.shape} do not match n={self.n}")
        return self

    def apply_G(self, x):
        return self.A @ x + self.b

    def reference_solution(self):
        try:
            return sla.solve(np.eye(self.n) - self.A, self.b)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError(f"I - A is singular for {self.name}") from exc
