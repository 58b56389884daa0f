"""Semi-algebraic formulas: AST, textual grammar, torus construction,
rigorous box proving, and the external quantifier-elimination protocol."""

from .backend import decide_quantified_at, external_qe
from .boxprove import ThreeValued, decide_forall_box
from .formula import (
    And,
    Atom,
    Binding,
    Formula,
    Not,
    Or,
    Quant,
    conj,
    disj,
    dnf_atoms,
    eval_formula,
    false_atom,
    substitute,
    true_atom,
)
from .poly import Poly
from .sexpr import format_formula, format_poly, parse_formula
from .torus import build_torus_formula, phase_product, torus_var_names

__all__ = [
    "And",
    "Atom",
    "Binding",
    "Formula",
    "Not",
    "Or",
    "Poly",
    "Quant",
    "ThreeValued",
    "build_torus_formula",
    "conj",
    "decide_forall_box",
    "decide_quantified_at",
    "disj",
    "dnf_atoms",
    "eval_formula",
    "external_qe",
    "false_atom",
    "format_formula",
    "format_poly",
    "parse_formula",
    "phase_product",
    "substitute",
    "torus_var_names",
    "true_atom",
]
