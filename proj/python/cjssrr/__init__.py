"""Interval eigensolver with Chebyshev-Jackson moment filtering."""

from ._core import (
    Error,
    SparseMatrix,
    count,
    filter_values,
    jackson_factors,
    kernel_moment,
    kernel_moment_bound,
    select_degree,
    solve,
)

__all__ = [
    "Error",
    "SparseMatrix",
    "count",
    "filter_values",
    "jackson_factors",
    "kernel_moment",
    "kernel_moment_bound",
    "select_degree",
    "solve",
]
__version__ = "1.0.0"
