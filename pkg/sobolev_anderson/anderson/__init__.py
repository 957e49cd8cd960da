# __init__.py
from .state import AAConfig, AAHistory, ConvergenceRecord, IterationRow, RunStatus
from .problem import AffineProblem, FixedPointProblem, MapProblem
from .least_squares import constrained_alpha, hermitian_solve, solve_gamma
from .solver import aa_run, aa_step, anderson_update, constrained_update, default_weight, mixed_map, picard_run
from .one_step import one_step_aa, one_step_curve
from .multisecant import multisecant_operator

__all__ = [
    "AAConfig",
    "AAHistory",
    "ConvergenceRecord",
    "IterationRow",
    "RunStatus",
    "AffineProblem",
    "FixedPointProblem",
    "MapProblem",
    "constrained_alpha",
    "hermitian_solve",
    "solve_gamma",
    "aa_run",
    "aa_step",
    "anderson_update",
    "constrained_update",
    "default_weight",
    "mixed_map",
    "picard_run",
    "one_step_aa",
    "one_step_curve",
    "multisecant_operator",
]
