"""Exact arithmetic over Q, Q[N] and Q(N)."""

from __future__ import annotations

from fractions import Fraction

from .matrix import (
    GenericRank,
    MatrixQN,
    determinant,
    in_kernel,
    in_row_span,
    integer_rank,
    inverse,
    nullspace_at,
    nullspace_generic,
    rank_at,
    rank_generic,
    rank_generic_report,
    solve_membership,
)
from .poly import N, PolyN, RatFuncN, factor_display, format_poly

BigRational = Fraction

__all__ = [
    "BigRational", "N", "PolyN", "RatFuncN", "MatrixQN", "determinant", "in_kernel",
    "in_row_span", "integer_rank", "inverse", "nullspace_at", "nullspace_generic",
    "rank_at", "rank_generic", "rank_generic_report", "GenericRank", "solve_membership", "factor_display", "format_poly",
]
