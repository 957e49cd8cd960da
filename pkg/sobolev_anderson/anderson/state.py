# state.py
from enum import Enum

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from sobolev_anderson.norms import NormKind
from .config import AA_DEFAULT_MAX_ITERS, AA_DEFAULT_TOL, AA_RIDGE


class RunStatus(str, Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    DIVERGED = "diverged"


class AAConfig(BaseModel):
    """Anderson acceleration settings; m=None keeps every difference (unbounded memory)"""

    model_config = ConfigDict(frozen=True)

    m: int | None = Field(default=10, ge=0)
    beta: float = Field(default=1.0, gt=0.0, le=1.0)
    norm: NormKind = Field(default_factory=NormKind)
    tol: float = Field(default=AA_DEFAULT_TOL, gt=0.0)
    max_iters: int = Field(default=AA_DEFAULT_MAX_ITERS, ge=0)
    reg: float = Field(default=AA_RIDGE, ge=0.0)


class AAHistory(BaseModel):
    """Rolling windows of Δx and Δf, oldest column first"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    capacity: int | None = None
    dx_cols: list[np.ndarray] = Field(default_factory=list)
    df_cols: list[np.ndarray] = Field(default_factory=list)
    prev_x: np.ndarray | None = None
    prev_f: np.ndarray | None = None
    prev_g: np.ndarray | None = None

    def push(self, x: np.ndarray, g: np.ndarray) -> None:
        """Record a new iterate x and its image g = G(x)"""
        f = g - x
        if self.prev_x is not None and self.capacity != 0:
            self.dx_cols.append(x - self.prev_x)
            self.df_cols.append(f - self.prev_f)
            if self.capacity is not None and len(self.dx_cols) > self.capacity:
                self.dx_cols.pop(0)
                self.df_cols.pop(0)
        self.prev_x, self.prev_f, self.prev_g = x, f, g

    @property
    def size(self) -> int:
        return len(self.df_cols)

    @property
    def X(self) -> np.ndarray:
        return np.column_stack(self.dx_cols)

    @property
    def D(self) -> np.ndarray:
        return np.column_stack(self.df_cols)


class IterationRow(BaseModel):
    iter: int
    res_l2: float
    res_w: float
    err_l2: float | None = None
    ls_res_l2: float | None = None


class ConvergenceRecord(BaseModel):
    """Per-iteration residual and error norms of one solver run"""

    label: str = ""
    rows: list[IterationRow] = Field(default_factory=list)
    status: RunStatus = RunStatus.MAX_ITERS
    message: str | None = None

    @property
    def iterations(self) -> int:
        return self.rows[-1].iter if self.rows else 0

    @property
    def initial_residual(self) -> float:
        return self.rows[0].res_l2

    def residuals(self) -> np.ndarray:
        return np.array([row.res_l2 for row in self.rows])

    def iterations_to(self, rel_tol: float) -> int | None:
        """First iteration whose residual is within rel_tol of the initial one"""
        if not self.rows:
            return None
        target = rel_tol * self.initial_residual
        for row in self.rows:
            if row.res_l2 <= target:
                return row.iter
        return None

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            [row.model_dump(include={"iter", "res_l2", "res_w", "err_l2"}) for row in self.rows],
            columns=["iter", "res_l2", "res_w", "err_l2"],
        )
        return frame.astype({"iter": int})
