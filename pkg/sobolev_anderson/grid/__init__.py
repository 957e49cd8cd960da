# __init__.py
from .functions import GridFunction, as_array, like
from .bands import (
    BandFactor,
    SymmetricBandMatrix,
    complex_tridiag_solve,
    laplacian_dirichlet,
    laplacian_neumann,
    spd_band_factor,
    spd_band_solve,
)
from .spectral import SpectralOperator, krylov_matrix, random_orthogonal, spectral_apply

__all__ = [
    "GridFunction",
    "as_array",
    "like",
    "BandFactor",
    "SymmetricBandMatrix",
    "complex_tridiag_solve",
    "laplacian_dirichlet",
    "laplacian_neumann",
    "spd_band_factor",
    "spd_band_solve",
    "SpectralOperator",
    "krylov_matrix",
    "random_orthogonal",
    "spectral_apply",
]
