"""Exact arithmetic foundation: rationals, polynomials, algebraic numbers, fields."""

from .rationals import format_rational, parse_rational
from .realalg import (
    DEFAULT_DEGREE_CAP,
    RealAlgebraic,
    alg_arith,
    alg_compare,
    alg_sign,
    alg_sqrt,
    isolate_real_roots,
)
from .numberfield import FieldElement, NumberField, common_field
from .complexalg import ComplexAlgebraic

__all__ = [
    "DEFAULT_DEGREE_CAP",
    "ComplexAlgebraic",
    "FieldElement",
    "NumberField",
    "RealAlgebraic",
    "alg_arith",
    "alg_compare",
    "alg_sign",
    "alg_sqrt",
    "common_field",
    "format_rational",
    "isolate_real_roots",
    "parse_rational",
]
