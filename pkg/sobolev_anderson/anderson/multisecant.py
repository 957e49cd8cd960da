# multisecant.py
import numpy as np

from sobolev_anderson.errors import DimensionMismatchError
from sobolev_anderson.grid import as_array
from sobolev_anderson.norms import WeightBase
from .least_squares import hermitian_solve


def multisecant_operator(Xk, Dk, wop: WeightBase) -> np.ndarray:
    """
    Dense S̃ = (X + D)(D* P² D)⁻¹ D* P², the weighted multisecant matrix of an Anderson step.

    Meant for verification at small n.

    Raises:
        SingularGramError: if D does not have full column rank
    """
    X = np.asarray(as_array(Xk))
    D = np.asarray(as_array(Dk))
    if X.ndim == 1:
        X = X[:, None]
    if D.ndim == 1:
        D = D[:, None]
    if X.shape != D.shape:
        raise DimensionMismatchError(f"X {X.shape} and D {D.shape} differ")

    Y = wop.apply_p2(D)
    gram = wop.h * (Y.conj().T @ D)
    gram = 0.5 * (gram + gram.conj().T)
    return (X + D) @ hermitian_solve(gram, wop.h * Y.conj().T)
