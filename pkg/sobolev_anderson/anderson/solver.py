# solver.py
import logging
from typing import Callable

import numpy as np

from sobolev_anderson.errors import (
    DimensionMismatchError,
    EmptyWindowError,
    InvalidParameterError,
    SingularSystemError,
)
from sobolev_anderson.grid import as_array
from sobolev_anderson.norms import NormKind, WeightBase, WeightOperator, build_weight, weighted_norm
from .config import AA_DIVERGENCE_FACTOR, AA_RIDGE
from .least_squares import constrained_alpha, solve_gamma
from .problem import FixedPointProblem
from .state import AAConfig, AAHistory, ConvergenceRecord, IterationRow, RunStatus

logger = logging.getLogger(__name__)


def mixed_map(apply_G: Callable, beta: float) -> Callable:
    """G_β(x) = (1 − β)x + βG(x); β = 1 returns G itself"""
    if not 0.0 < beta <= 1.0:
        raise InvalidParameterError(f"mixing parameter must lie in (0, 1], got {beta}")
    if beta == 1.0:
        return apply_G

    def mapped(x):
        return (1.0 - beta) * x + beta * apply_G(x)

    return mapped


def all_finite(*arrays) -> bool:
    return all(np.all(np.isfinite(a)) for a in arrays)


def row_finite(row: IterationRow) -> bool:
    return all_finite(row.res_l2, row.res_w) and (row.err_l2 is None or np.isfinite(row.err_l2))


def default_weight(problem: FixedPointProblem, norm: NormKind) -> WeightBase:
    if norm.s == 0:
        return WeightOperator(kind=norm, n=problem.n, h=problem.h)
    return build_weight(norm, problem.n, problem.h)


def _picard_step(history: AAHistory, beta: float) -> np.ndarray:
    if beta == 1.0:
        return history.prev_g
    return history.prev_x + beta * history.prev_f


def anderson_update(
    history: AAHistory, wop: WeightBase, reg: float = AA_RIDGE, beta: float = 1.0
) -> tuple[np.ndarray, float]:
    """
    Next iterate from the current window, plus the ℓ² norm of the least-squares residual f − Dγ.

    The window holds undamped images G(x_i). With β < 1 the step is the
    Anderson step for G_β, whose residuals and differences are β times the
    stored ones; γ does not change under that scaling.

    An empty window, or one whose columns all had to be dropped, gives the
    (damped) Picard step.
    """
    if history.prev_x is None:
        raise InvalidParameterError("history holds no iterate yet")
    if not 0.0 < beta <= 1.0:
        raise InvalidParameterError(f"mixing parameter must lie in (0, 1], got {beta}")
    if history.size == 0:
        return _picard_step(history, beta), float(np.linalg.norm(history.prev_f))

    D = history.D
    try:
        gamma = solve_gamma(D, history.prev_f, wop, reg)
    except EmptyWindowError:
        logger.warning("Window collapsed, taking a Picard step instead")
        return _picard_step(history, beta), float(np.linalg.norm(history.prev_f))

    if beta == 1.0:
        x_next = history.prev_g - (history.X + D) @ gamma
    else:
        x_next = history.prev_x + beta * history.prev_f - (history.X + beta * D) @ gamma
    ls_res = float(np.linalg.norm(history.prev_f - D @ gamma))
    return x_next, ls_res


def aa_step(history: AAHistory, problem: FixedPointProblem, wop: WeightBase, config: AAConfig) -> np.ndarray:
    """
    One Anderson step x_{k+1} = G_β(x_k) − Σ γ_i ΔG_β,i with ΔG_β,i = Δx_i + βΔf_i.

    Args:
        history: Window of iterates and their images under the problem's map G
        problem: Fixed-point problem the history was built from
        wop: Weight of the least-squares problem
        config: Memory, mixing and ridge settings; β = 1 gives the plain step

    Returns:
        x_{k+1}
    """
    if history.prev_x is not None and history.prev_x.shape[0] != problem.n:
        raise DimensionMismatchError(f"{problem.name} expects length {problem.n}, got {history.prev_x.shape[0]}")
    x_next, _ = anderson_update(history, wop, config.reg, config.beta)
    return x_next


def _drive(
    problem: FixedPointProblem,
    x0,
    capacity: int | None,
    wop: WeightBase,
    beta: float,
    reg: float,
    tol: float | None,
    max_iters: int,
    x_star: np.ndarray | None,
    label: str,
) -> tuple[ConvergenceRecord, np.ndarray]:
    """Shared loop for Picard (capacity 0) and Anderson runs"""
    x = np.array(as_array(x0))
    x = x.astype(complex if problem.is_complex or np.iscomplexobj(x) else float)
    if x.shape[0] != problem.n:
        raise DimensionMismatchError(f"{problem.name} expects length {problem.n}, got {x.shape[0]}")

    history = AAHistory(capacity=capacity)
    record = ConvergenceRecord(label=label)
    history.push(x, problem(x))
    x_good = x
    res0 = None
    k = 0

    while True:
        f = history.prev_f
        if not all_finite(f, x):
            record.status = RunStatus.DIVERGED
            record.message = f"non-finite iterate at iteration {k}"
            break

        res = float(np.linalg.norm(f))
        err = float(np.linalg.norm(x - x_star)) if x_star is not None else None
        row = IterationRow(iter=k, res_l2=res, res_w=weighted_norm(wop, f), err_l2=err)
        if not row_finite(row):
            record.status = RunStatus.DIVERGED
            record.message = f"norms overflowed at iteration {k}"
            break
        x_good = x
        if res0 is None:
            res0 = res

        if tol is not None and res <= tol * res0:
            record.rows.append(row)
            record.status = RunStatus.CONVERGED
            break
        if res > AA_DIVERGENCE_FACTOR * res0:
            record.rows.append(row)
            record.status = RunStatus.DIVERGED
            record.message = f"residual grew past {AA_DIVERGENCE_FACTOR:.0e} times its initial value"
            break
        if k >= max_iters:
            record.rows.append(row)
            record.status = RunStatus.MAX_ITERS
            break

        x_next, ls_res = anderson_update(history, wop, reg, beta)
        row.ls_res_l2 = ls_res
        record.rows.append(row)
        logger.debug("%s iter %d: res_l2=%.6e res_w=%.6e", label, k, res, row.res_w)

        try:
            g_next = problem(x_next)
        except SingularSystemError as exc:
            record.status = RunStatus.DIVERGED
            record.message = str(exc)
            logger.error("%s halted at iteration %d: %s", label, k + 1, exc)
            break
        history.push(x_next, g_next)
        x = x_next
        k += 1

    logger.info("%s finished: %s after %d iterations", label, record.status.value, record.iterations)
    return record, x_good


def picard_run(
    problem: FixedPointProblem,
    x0,
    iters: int,
    tol: float | None = None,
    wop: WeightBase | None = None,
    x_star: np.ndarray | None = None,
    label: str = "picard",
) -> tuple[ConvergenceRecord, np.ndarray]:
    """
    Plain fixed-point iteration x_{k+1} = G(x_k).

    Args:
        problem: Fixed-point problem
        x0: Initial iterate
        iters: Maximum number of steps
        tol: Optional relative residual stopping threshold
        wop: Weight used for the res_w column (L² by default)
        x_star: Exact solution for the err_l2 column

    Returns:
        (record, final iterate)
    """
    if iters < 0:
        raise InvalidParameterError(f"iteration count must be nonnegative, got {iters}")
    wop = wop or default_weight(problem, NormKind())
    return _drive(problem, x0, 0, wop, 1.0, AA_RIDGE, tol, iters, x_star, label)


def aa_run(
    problem: FixedPointProblem,
    config: AAConfig,
    x0=None,
    wop: WeightBase | None = None,
    x_star: np.ndarray | None = None,
    label: str | None = None,
) -> tuple[ConvergenceRecord, np.ndarray]:
    """
    Anderson acceleration: x1 = G(x0), then one Anderson step per iteration
    with the oldest differences evicted once the window holds m of them.

    Args:
        problem: Fixed-point problem
        config: Memory, mixing, norm and stopping settings
        x0: Initial iterate (problem.initial_guess() when omitted)
        wop: Weight for the least-squares problem (built from config.norm when omitted)
        x_star: Exact solution for the err_l2 column

    Returns:
        (record, final iterate)
    """
    x0 = problem.initial_guess() if x0 is None else x0
    wop = wop or default_weight(problem, config.norm)
    memory = "inf" if config.m is None else config.m
    label = label or f"aa_{config.norm.label}_m{memory}"
    return _drive(problem, x0, config.m, wop, config.beta, config.reg, config.tol, config.max_iters, x_star, label)


def constrained_update(iterates, mapped, wop: WeightBase, beta: float = 1.0, reg: float = AA_RIDGE) -> np.ndarray:
    """
    Constrained Anderson update x_{k+1} = (1 − β)Σα_i x_i + βΣα_i G(x_i).

    Args:
        iterates: n x (m+1) iterates x_{k-m}, ..., x_k
        mapped: n x (m+1) images G(x_i) in the same order
        wop: Weight operator
        beta: Mixing parameter

    Returns:
        Next iterate
    """
    X = np.asarray(iterates)
    GX = np.asarray(mapped)
    if X.shape != GX.shape:
        raise DimensionMismatchError(f"iterates {X.shape} and images {GX.shape} differ")
    if not 0.0 < beta <= 1.0:
        raise InvalidParameterError(f"mixing parameter must lie in (0, 1], got {beta}")
    alpha = constrained_alpha(GX - X, wop, reg)
    return (1.0 - beta) * (X @ alpha) + beta * (GX @ alpha)
