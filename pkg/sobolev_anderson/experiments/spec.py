# spec.py
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from sobolev_anderson.anderson.config import AA_DEFAULT_MAX_ITERS, AA_DEFAULT_TOL
from sobolev_anderson.norms import NormKind
from .config import AA_OUTPUT_DIR, AA_SEED, THEORY_N, THEORY_TRIALS

Subcommand = Literal["poisson", "nlh", "waveholtz1d", "waveholtz2d", "theory-bound", "gmres-compare"]
SolverKind = Literal["picard", "aa", "gmres", "one-step"]


class SolverSpec(BaseModel):
    """One solver of an experiment run"""

    model_config = ConfigDict(frozen=True)

    kind: SolverKind
    m: int | None = Field(default=10, ge=0)
    norm: NormKind = Field(default_factory=NormKind)
    beta: float = Field(default=1.0, gt=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_memory(self):
        if self.kind in ("gmres", "one-step") and (self.m is None or self.m < 1):
            raise ValueError(f"{self.kind} needs a memory m >= 1")
        return self

    @property
    def label(self) -> str:
        memory = "inf" if self.m is None else self.m
        if self.kind == "picard":
            return "picard"
        if self.kind == "gmres":
            return f"gmres_m{memory}"
        prefix = "aa" if self.kind == "aa" else "onestep"
        beta = "" if self.beta == 1.0 else f"_beta{self.beta:g}"
        return f"{prefix}_{self.norm.label}_m{memory}{beta}"


class TheorySpec(BaseModel):
    """Parameters of a one-step bound verification"""

    n: int = Field(default=THEORY_N, ge=1)
    a: float = 0.3
    b: float = 0.9
    k: int | None = Field(default=None, ge=1)
    m: int = Field(default=10, ge=1)
    trials: int = Field(default=THEORY_TRIALS, ge=1)
    sigma: Literal["none", "inverse-square"] = "none"
    placement: Literal["equispaced", "chebyshev", "random"] = "equispaced"


class RunSpec(BaseModel):
    """A full experiment: which problem, which solvers, where results go"""

    subcommand: Subcommand
    problem: str | None = None
    problem_params: dict[str, Any] = Field(default_factory=dict)
    solvers: list[SolverSpec] = Field(default_factory=list)
    tol: float = Field(default=AA_DEFAULT_TOL, gt=0.0)
    max_iters: int = Field(default=AA_DEFAULT_MAX_ITERS, ge=0)
    seed: int = AA_SEED
    output: str = AA_OUTPUT_DIR
    with_reference: bool = False
    one_step: int | None = Field(default=None, ge=1)
    theory: TheorySpec | None = None

    @property
    def problem_name(self) -> str:
        if self.problem:
            return self.problem
        return "waveholtz1d" if self.subcommand == "gmres-compare" else self.subcommand
