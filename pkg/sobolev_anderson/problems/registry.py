# registry.py
from typing import Any, Callable

from sobolev_anderson.anderson import FixedPointProblem
from sobolev_anderson.errors import InvalidParameterError
from .helmholtz import build_nonlinear_helmholtz
from .poisson import build_poisson
from .waveholtz import build_waveholtz


def _waveholtz_1d(**params: Any) -> FixedPointProblem:
    return build_waveholtz(dim=1, **params)


def _waveholtz_2d(**params: Any) -> FixedPointProblem:
    return build_waveholtz(dim=2, **params)


BUILDERS: dict[str, Callable[..., FixedPointProblem]] = {
    "poisson": build_poisson,
    "nlh": build_nonlinear_helmholtz,
    "waveholtz1d": _waveholtz_1d,
    "waveholtz2d": _waveholtz_2d,
}


def build_problem(name: str, **params: Any) -> FixedPointProblem:
    """
    Build a named problem; parameters left as None fall back to the builder defaults.

    Args:
        name: One of poisson, nlh, waveholtz1d, waveholtz2d
        **params: Builder keyword arguments

    Returns:
        FixedPointProblem
    """
    try:
        builder = BUILDERS[name]
    except KeyError:
        raise InvalidParameterError(f"unknown problem '{name}', expected one of {sorted(BUILDERS)}") from None
    return builder(**{key: value for key, value in params.items() if value is not None})


def apply_G(problem: FixedPointProblem, x):
    """One application of the problem's fixed-point map"""
    return problem(x)


def reference_solution(problem: FixedPointProblem):
    """Direct solution of an affine problem; raises UnsupportedProblemError otherwise"""
    return problem.reference_solution()
