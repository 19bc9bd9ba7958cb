"""Exact genus-zero invariants of Landau-Ginzburg orbifolds for invertible polynomials."""

from __future__ import annotations

__version__ = "0.1.0"

from .poly import InvertiblePolynomial, PolynomialError, chain, loop, parse_polynomial
from .symmetry import DiagonalSymmetry, aut_group, grading_element
from .statespace import BasisState, StateVector, basis, dual, pairing, parse_insertion, state
from .spincomb import TheoremInapplicable, numerics
from .charclass import correlator3, limit_class, loop_B_matrix
from .givental import big_I, extract_correlators, mirror_map_and_J, pf_check, small_I

__all__ = [
    "InvertiblePolynomial", "PolynomialError", "chain", "loop", "parse_polynomial",
    "DiagonalSymmetry", "aut_group", "grading_element",
    "BasisState", "StateVector", "basis", "dual", "pairing", "parse_insertion", "state",
    "TheoremInapplicable", "numerics",
    "correlator3", "limit_class", "loop_B_matrix",
    "big_I", "extract_correlators", "mirror_map_and_J", "pf_check", "small_I",
]
