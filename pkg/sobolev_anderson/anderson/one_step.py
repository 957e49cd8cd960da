# one_step.py
import logging

import numpy as np

from sobolev_anderson.errors import InvalidParameterError, UnsupportedProblemError
from sobolev_anderson.grid import as_array
from sobolev_anderson.norms import WeightBase, weighted_norm
from .config import AA_DIVERGENCE_FACTOR, AA_RIDGE
from .problem import FixedPointProblem
from .solver import all_finite, anderson_update, row_finite
from .state import AAHistory, ConvergenceRecord, IterationRow, RunStatus

logger = logging.getLogger(__name__)


def _picard_trajectory(problem: FixedPointProblem, x0, k: int, guard: bool = False) -> tuple[list, list, str | None]:
    """
    Iterates x_0..x_k and their images G(x_0)..G(x_k).

    With guard set, the trajectory ends at the first non-finite pair (dropped)
    or at the first residual past the divergence factor (kept), and the reason
    is returned alongside.
    """
    x = np.array(as_array(x0))
    x = x.astype(complex if problem.is_complex or np.iscomplexobj(x) else float)
    xs, gs = [], []
    res0 = None
    for i in range(k + 1):
        g = problem(x)
        if guard and not all_finite(x, g):
            return xs, gs, f"non-finite Picard iterate at iteration {i}"
        xs.append(x)
        gs.append(g)
        if guard:
            res = float(np.linalg.norm(g - x))
            res0 = res if res0 is None else res0
            if res > AA_DIVERGENCE_FACTOR * res0:
                return xs, gs, f"Picard residual grew past {AA_DIVERGENCE_FACTOR:.0e} times its initial value"
        x = g
    return xs, gs, None


def _window_step(xs: list, gs: list, k: int, m: int, wop: WeightBase, reg: float) -> np.ndarray:
    history = AAHistory(capacity=m)
    for i in range(k - m, k + 1):
        history.push(xs[i], gs[i])
    x_next, _ = anderson_update(history, wop, reg)
    return x_next


def _check_memory(k: int, m: int) -> None:
    if m < 1:
        raise InvalidParameterError(f"one-step Anderson needs m >= 1, got {m}")
    if k < m:
        raise InvalidParameterError(f"one-step Anderson needs k >= m, got k={k}, m={m}")


def one_step_aa(
    problem: FixedPointProblem,
    x0,
    k: int,
    m: int,
    wop: WeightBase,
    x_star: np.ndarray | None = None,
    reg: float = AA_RIDGE,
) -> np.ndarray:
    """
    Error after k Picard steps followed by a single Anderson step with memory m.

    Args:
        problem: Affine fixed-point problem
        x0: Initial iterate
        k: Number of Picard steps (k >= m)
        m: Memory of the Anderson step
        wop: Weight of the least-squares problem
        x_star: Fixed point (taken from the problem when omitted)

    Returns:
        e_{k+1} = x_{k+1} − x*
    """
    _check_memory(k, m)
    x_star = problem.exact_solution() if x_star is None else np.asarray(x_star)
    if x_star is None:
        raise UnsupportedProblemError(f"{problem.name} has no exact solution for error tracking")

    xs, gs, _ = _picard_trajectory(problem, x0, k)
    return _window_step(xs, gs, k, m, wop, reg) - x_star


def one_step_curve(
    problem: FixedPointProblem,
    x0,
    m: int,
    wop: WeightBase,
    k_max: int,
    x_star: np.ndarray | None = None,
    tol: float | None = None,
    reg: float = AA_RIDGE,
    label: str | None = None,
) -> ConvergenceRecord:
    """
    One-step Anderson curve: for every k in [m, k_max) a single Anderson step
    is taken from the Picard iterate x_k, and row k+1 holds that iterate's
    residual and error. Rows 0..m are the Picard iterates themselves.

    A Picard trajectory that blows up cuts the curve short at its last finite
    row and the record is marked diverged.
    """
    _check_memory(k_max, m)
    xs, gs, message = _picard_trajectory(problem, x0, k_max, guard=True)
    label = label or f"one_step_m{m}"
    record = ConvergenceRecord(label=label)

    def add_row(i, x, g) -> bool:
        f = g - x
        err = float(np.linalg.norm(x - x_star)) if x_star is not None else None
        row = IterationRow(iter=i, res_l2=float(np.linalg.norm(f)), res_w=weighted_norm(wop, f), err_l2=err)
        if not row_finite(row):
            return False
        record.rows.append(row)
        return True

    last = len(xs) - 1
    for i in range(min(m, last) + 1):
        if not add_row(i, xs[i], gs[i]):
            message = message or f"norms overflowed at iteration {i}"
            break
    else:
        for k in range(m, min(k_max, last + 1)):
            x_next = _window_step(xs, gs, k, m, wop, reg)
            g_next = problem(x_next)
            if not (all_finite(x_next, g_next) and add_row(k + 1, x_next, g_next)):
                message = f"non-finite one-step iterate at iteration {k + 1}"
                break
            if record.rows[-1].res_l2 > AA_DIVERGENCE_FACTOR * record.initial_residual:
                message = f"residual grew past {AA_DIVERGENCE_FACTOR:.0e} times its initial value"
                break

    if message is not None:
        record.status = RunStatus.DIVERGED
        record.message = message
        logger.warning("%s stopped after %d rows: %s", label, len(record.rows), message)
        return record

    record.status = RunStatus.MAX_ITERS
    if tol is not None and record.iterations_to(tol) is not None:
        record.status = RunStatus.CONVERGED
    logger.info("%s finished with %d rows", label, len(record.rows))
    return record
