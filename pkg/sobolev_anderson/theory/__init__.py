# __init__.py
from .chebyshev import bound_C, chebyshev_T, check_interval
from .spectrum import SpectrumSpec, inverse_square_sigma, spectrum_realization
from .one_step import BoundReport, predicted_one_step_error, verify_one_step_bound
from .filters import waveholtz_beta

__all__ = [
    "bound_C",
    "chebyshev_T",
    "check_interval",
    "SpectrumSpec",
    "inverse_square_sigma",
    "spectrum_realization",
    "BoundReport",
    "predicted_one_step_error",
    "verify_one_step_bound",
    "waveholtz_beta",
]
