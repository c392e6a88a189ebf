"""Exact polynomial and ideal arithmetic over prime fields."""

from __future__ import annotations

from .field import DEFAULT_PRIME, PrimeField, is_prime
from .groebner import GroebnerLimits, ResourceLimitError, buchberger, normal_form, spolynomial
from .ideal import (
    GroebnerBasis,
    Ideal,
    degree_slice,
    eliminate,
    gb,
    hilbert_function,
    hilbert_h0,
    ideal_contains,
    ideal_equal,
    ideal_intersect,
    ideal_power,
    ideal_product,
    ideal_quotient,
    ideal_sum,
    intersect_all,
    quotient_by_element,
    saturate,
    saturate_irrelevant,
    slice_matrix,
)
from .linalg import nullspace, rank, rref
from .ring import MonomialOrder, Polynomial, Ring, monomials_of_degree

__all__ = [
    "DEFAULT_PRIME", "PrimeField", "is_prime",
    "GroebnerLimits", "ResourceLimitError", "buchberger", "normal_form", "spolynomial",
    "GroebnerBasis", "Ideal", "degree_slice", "eliminate", "gb", "hilbert_function", "hilbert_h0",
    "ideal_contains", "ideal_equal", "ideal_intersect", "ideal_power", "ideal_product",
    "ideal_quotient", "ideal_sum", "intersect_all", "quotient_by_element", "saturate",
    "saturate_irrelevant", "slice_matrix",
    "nullspace", "rank", "rref",
    "MonomialOrder", "Polynomial", "Ring", "monomials_of_degree",
]
