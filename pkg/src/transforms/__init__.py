# Deflation projection and filter transform, on sampled fields and on dense matrices.
from .function_level import (
    SolvedPair,
    TransformState,
    deflate_values,
    discrete_inner,
    discrete_norm,
    filter_apply,
    filtered_values,
    project_out,
    transform_values,
)
from .matrix import (
    filter_polynomial,
    matrix_deflate,
    matrix_filter,
    matrix_shift_invert_spectrum,
    spectral_gap_ratio,
)

__all__ = [
    "SolvedPair",
    "TransformState",
    "deflate_values",
    "discrete_inner",
    "discrete_norm",
    "filter_apply",
    "filtered_values",
    "project_out",
    "transform_values",
    "filter_polynomial",
    "matrix_deflate",
    "matrix_filter",
    "matrix_shift_invert_spectrum",
    "spectral_gap_ratio",
]
