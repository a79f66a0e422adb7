"""Beta-shifts, shifts of finite type and cellular automata, computed exactly."""

from .algebraic import AlgebraicReal, FieldElement, IntPolynomial, unique_positive_root
from .beta_core import classify, code_words, d_star, expand_one, is_admissible, parse_code
from .sft_tools import EdgeSFT, companion_edge_sft, periodic_count, product_sft, zeta_denominator

__version__ = "0.1.0"

__all__ = [
    "AlgebraicReal",
    "EdgeSFT",
    "FieldElement",
    "IntPolynomial",
    "classify",
    "code_words",
    "companion_edge_sft",
    "d_star",
    "expand_one",
    "is_admissible",
    "parse_code",
    "periodic_count",
    "product_sft",
    "unique_positive_root",
    "zeta_denominator",
]
