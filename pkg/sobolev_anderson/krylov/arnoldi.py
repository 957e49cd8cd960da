# arnoldi.py
from typing import Callable

import numpy as np

BREAKDOWN_TOL = 1e-14


def arnoldi_step(apply_A: Callable, V: np.ndarray, H: np.ndarray, j: int) -> bool:
    """
    Extend an orthonormal Krylov basis by one column with modified Gram-Schmidt.

    Fills H[:j+2, j] and, unless the new direction vanishes, V[:, j+1].

    Returns:
        True on breakdown (A V[:, j] already lies in the span of V[:, :j+1])
    """
    w = np.array(apply_A(V[:, j]), dtype=V.dtype)
    for i in range(j + 1):
        H[i, j] = np.vdot(V[:, i], w)
        w -= H[i, j] * V[:, i]
    H[j + 1, j] = np.linalg.norm(w)
    if H[j + 1, j] <= BREAKDOWN_TOL * np.linalg.norm(H[: j + 2, j]):
        H[j + 1, j] = 0.0
        return True
    V[:, j + 1] = w / H[j + 1, j]
    return False


def arnoldi(apply_A: Callable, v0, steps: int) -> tuple[np.ndarray, np.ndarray, int]:
    """
    Arnoldi factorization A V_k = V_{k+1} H̄_k.

    Args:
        apply_A: Linear operator v -> Av
        v0: Starting vector (nonzero)
        steps: Number of Arnoldi steps

    Returns:
        (V, H, k) with k <= steps the number of completed steps; on breakdown
        V has k columns and H is k x k, otherwise V has k+1 columns and H is (k+1) x k
    """
    v0 = np.asarray(v0)
    dtype = complex if np.iscomplexobj(v0) else float
    V = np.zeros((v0.shape[0], steps + 1), dtype=dtype)
    H = np.zeros((steps + 1, steps), dtype=dtype)
    V[:, 0] = v0 / np.linalg.norm(v0)
    for j in range(steps):
        if arnoldi_step(apply_A, V, H, j):
            return V[:, : j + 1], H[: j + 1, : j + 1], j + 1
    return V, H, steps
