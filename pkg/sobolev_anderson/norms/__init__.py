# __init__.py
from .weights import (
    NormKind,
    SpectralWeight,
    WeightBase,
    WeightOperator,
    assemble_weight_matrix,
    build_weight,
    gram_system,
    weighted_inner,
    weighted_norm,
)

__all__ = [
    "NormKind",
    "SpectralWeight",
    "WeightBase",
    "WeightOperator",
    "assemble_weight_matrix",
    "build_weight",
    "gram_system",
    "weighted_inner",
    "weighted_norm",
]
