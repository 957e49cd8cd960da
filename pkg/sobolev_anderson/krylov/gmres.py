# gmres.py
import logging
from typing import Callable

import numpy as np
import scipy.linalg as sla
from pydantic import BaseModel, ConfigDict, Field

from sobolev_anderson.anderson import ConvergenceRecord, FixedPointProblem, IterationRow, RunStatus
from sobolev_anderson.errors import DimensionMismatchError, InvalidParameterError
from sobolev_anderson.grid import as_array
from sobolev_anderson.norms import WeightBase, WeightOperator, NormKind, weighted_norm
from .arnoldi import arnoldi_step

logger = logging.getLogger(__name__)


class AffineSystem(BaseModel):
    """Linear system (I − A)x = b behind an affine fixed-point map G(x) = Ax + b"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int = Field(ge=1)
    h: float = Field(default=1.0, gt=0)
    rhs: np.ndarray
    apply_linear: Callable[[np.ndarray], np.ndarray]

    @classmethod
    def from_problem(cls, problem: FixedPointProblem) -> "AffineSystem":
        """b = G(0) is evaluated once; (I − A)v = v − (G(v) − b)"""
        if not problem.is_linear:
            raise InvalidParameterError(f"{problem.name} is not affine")
        b = problem(np.zeros(problem.n, dtype=complex if problem.is_complex else float))

        def apply_linear(v):
            return v - (problem(v) - b)

        return cls(n=problem.n, h=problem.h, rhs=b, apply_linear=apply_linear)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, rhs: np.ndarray, h: float = 1.0) -> "AffineSystem":
        matrix = np.asarray(matrix)
        return cls(n=matrix.shape[0], h=h, rhs=np.asarray(rhs), apply_linear=lambda v: matrix @ v)


def _rotation(a, b) -> tuple[float, complex]:
    """Givens pair (c, s) with [c s; −s̄ c]·[a; b] = [ρ; 0]"""
    if b == 0:
        return 1.0, 0.0
    if a == 0:
        return 0.0, 1.0
    rho = np.hypot(abs(a), abs(b))
    return abs(a) / rho, (a / abs(a)) * np.conj(b) / rho


def gmres_restarted(
    system: AffineSystem,
    x0=None,
    restart: int = 10,
    tol: float = 1e-8,
    max_outer: int = 100,
    max_iters: int | None = None,
    wop: WeightBase | None = None,
    x_star: np.ndarray | None = None,
    label: str | None = None,
) -> tuple[ConvergenceRecord, np.ndarray]:
    """
    Restarted GMRES on (I − A)x = b.

    Arnoldi uses modified Gram-Schmidt and the small least-squares problem is
    reduced with plane rotations. The basis is discarded every `restart` inner
    steps. One row is recorded per inner step with the residual vector
    r0 − V H̄ y rebuilt from the basis, except the last step of each cycle,
    which records b − Ax recomputed directly; that vector also starts the
    next cycle. ls_res_l2 always holds the rebuilt value.

    Args:
        system: Linear system
        x0: Initial guess (zero when omitted)
        restart: Inner steps per cycle
        tol: Relative residual stopping threshold
        max_outer: Maximum number of cycles
        max_iters: Optional cap on the total number of inner steps
        wop: Weight for the res_w column (L² by default)
        x_star: Exact solution for the err_l2 column

    Returns:
        (record, final iterate)
    """
    if restart < 1:
        raise InvalidParameterError(f"restart length must be >= 1, got {restart}")
    if max_outer < 1:
        raise InvalidParameterError(f"max_outer must be >= 1, got {max_outer}")
    n = system.n
    b = np.asarray(system.rhs)
    x = np.zeros_like(b) if x0 is None else np.array(as_array(x0), dtype=np.result_type(b, as_array(x0)))
    if x.shape[0] != n:
        raise DimensionMismatchError(f"system of order {n} given initial guess of length {x.shape[0]}")
    wop = wop or WeightOperator(kind=NormKind(), n=n, h=system.h)
    label = label or f"gmres_{restart}"
    dtype = np.result_type(b, x, float)
    max_iters = max_iters if max_iters is not None else restart * max_outer

    def error(v):
        return float(np.linalg.norm(v - x_star)) if x_star is not None else None

    r = b - system.apply_linear(x)
    res0 = float(np.linalg.norm(r))
    record = ConvergenceRecord(label=label)
    record.rows.append(IterationRow(iter=0, res_l2=res0, res_w=weighted_norm(wop, r), err_l2=error(x), ls_res_l2=res0))
    total = 0

    if res0 <= tol * res0:
        record.status = RunStatus.CONVERGED
        return record, x

    for outer in range(max_outer):
        beta = np.linalg.norm(r)
        V = np.zeros((n, restart + 1), dtype=dtype)
        H = np.zeros((restart + 1, restart), dtype=dtype)
        R = np.zeros_like(H)
        cs = np.zeros(restart)
        sn = np.zeros(restart, dtype=dtype)
        e = np.zeros(restart + 1, dtype=dtype)
        e[0] = beta
        V[:, 0] = r / beta
        done = False

        for j in range(restart):
            breakdown = arnoldi_step(system.apply_linear, V, H, j)
            total += 1

            R[: j + 2, j] = H[: j + 2, j]
            for i in range(j):
                upper = cs[i] * R[i, j] + sn[i] * R[i + 1, j]
                R[i + 1, j] = -np.conj(sn[i]) * R[i, j] + cs[i] * R[i + 1, j]
                R[i, j] = upper
            cs[j], sn[j] = _rotation(R[j, j], R[j + 1, j])
            R[j, j] = cs[j] * R[j, j] + sn[j] * R[j + 1, j]
            R[j + 1, j] = 0.0
            e[j + 1] = -np.conj(sn[j]) * e[j]
            e[j] = cs[j] * e[j]

            y = sla.solve_triangular(R[: j + 1, : j + 1], e[: j + 1])
            basis = V[:, : j + 2]
            r_vec = r - basis @ (H[: j + 2, : j + 1] @ y)
            x_j = x + V[:, : j + 1] @ y

            if not (np.all(np.isfinite(r_vec)) and np.all(np.isfinite(x_j))):
                record.status = RunStatus.DIVERGED
                record.message = f"non-finite GMRES iterate at step {total}"
                return record, x

            ls_res = float(np.linalg.norm(r_vec))
            if j == restart - 1 or total >= max_iters:
                # end of cycle: log b − Ax so drift in the recurrence shows
                r_vec = b - system.apply_linear(x_j)
            res = float(np.linalg.norm(r_vec))
            record.rows.append(
                IterationRow(iter=total, res_l2=res, res_w=weighted_norm(wop, r_vec), err_l2=error(x_j), ls_res_l2=ls_res)
            )
            logger.debug("%s step %d (cycle %d): res_l2=%.6e", label, total, outer, res)

            if breakdown or res <= tol * res0:
                record.status = RunStatus.CONVERGED
                done = True
                break
            if total >= max_iters:
                done = True
                break

        x = x_j
        if done:
            break
        r = r_vec

    if record.status != RunStatus.CONVERGED:
        record.status = RunStatus.MAX_ITERS
    logger.info("%s finished: %s after %d steps", label, record.status.value, total)
    return record, x
