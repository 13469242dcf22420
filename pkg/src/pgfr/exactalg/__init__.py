"""Exact arithmetic over Q and Q(sqrt d): polynomials in (t, Q) and the operations on them."""

from .field import RATIONALS, FieldDesc, QuadNumber, parse_rational, qn, squarefree_decompose
from .ops import (
    CoefficientGrowthError,
    InvalidShapeError,
    char_poly_symbolic,
    evaluate_at_q,
    irreducible_linear_in_q,
    is_squarefree_in_t,
    poly_divide_exact,
    relative_min_poly_symbolic,
    substitute_matrix_poly,
    trace_of,
)
from .poly import BiPoly, NotAFactorError, UniPoly, bi_gcd_over_fq, uni_gcd

__all__ = [
    "RATIONALS", "FieldDesc", "QuadNumber", "parse_rational", "qn", "squarefree_decompose",
    "CoefficientGrowthError", "InvalidShapeError", "char_poly_symbolic", "evaluate_at_q",
    "irreducible_linear_in_q", "is_squarefree_in_t", "poly_divide_exact",
    "relative_min_poly_symbolic", "substitute_matrix_poly", "trace_of",
    "BiPoly", "NotAFactorError", "UniPoly", "bi_gcd_over_fq", "uni_gcd",
]
