# __init__.py
from .poisson import PoissonProblem, build_poisson
from .helmholtz import NonlinearHelmholtzProblem, build_nonlinear_helmholtz, kerr_profile
from .waveholtz import (
    WaveHoltzProblem,
    build_waveholtz,
    cross_speed_2d,
    flux_laplacian,
    helmholtz_pilot,
    steps_per_period,
    wave_speed_1d,
)
from .registry import BUILDERS, apply_G, build_problem, reference_solution

__all__ = [
    "PoissonProblem",
    "build_poisson",
    "NonlinearHelmholtzProblem",
    "build_nonlinear_helmholtz",
    "kerr_profile",
    "WaveHoltzProblem",
    "build_waveholtz",
    "cross_speed_2d",
    "flux_laplacian",
    "helmholtz_pilot",
    "steps_per_period",
    "wave_speed_1d",
    "BUILDERS",
    "apply_G",
    "build_problem",
    "reference_solution",
]
