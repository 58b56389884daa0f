"""Exact spectral analysis: characteristic polynomials, Jordan structure,
integer relation lattices among eigenvalue data, and reality checks."""

from .jordan import JordanBlock, JordanDecomposition, jordan_decompose, reality_check
from .linalg import char_poly
from .relations import RelationLattice, additive_relations

__all__ = [
    "JordanBlock",
    "JordanDecomposition",
    "RelationLattice",
    "additive_relations",
    "char_poly",
    "jordan_decompose",
    "reality_check",
]
