"""Integer additive-relation lattices among real algebraic numbers.

Given x_1..x_k, the relation lattice is {a in Z^k : sum a_i x_i = 0}.  The
inputs are embedded in one shared number field; relations then become the
integer kernel of the rational coordinate matrix, which is computed through
a Hermite-normal-form transform.  The kernel of an integer matrix inside
Z^k is the full set of integer points of a rational subspace, so the result
is automatically saturated: scaling a vector into the lattice never adds
information.  The basis is canonicalised by its own Hermite normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence, Union

from ..exactnum import DEFAULT_DEGREE_CAP, RealAlgebraic, common_field
from .linalg import RATIONAL_CTX, gen_solve, int_kernel_basis

NumberLike = Union[RealAlgebraic, Fraction, int]


@dataclass(frozen=True)
class RelationLattice:
    """Saturated lattice of integer linear relations, with a canonical basis."""

    dimension: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, a: Sequence[int]) -> bool:
        a = tuple(int(v) for v in a)
        if len(a) != self.dimension:
            raise ValueError("vector has the wrong length")
        if not self.basis:
            return all(v == 0 for v in a)
        # saturated lattice: membership == membership in the rational row span
        cols = [[Fraction(row[i]) for row in self.basis] for i in range(self.dimension)]
        rhs = [Fraction(v) for v in a]
        return gen_solve(cols, rhs, RATIONAL_CTX) is not None

    def coefficient_bound(self) -> int:
        """Largest absolute basis entry (0 for the trivial lattice)."""
        return max((abs(v) for row in self.basis for v in row), default=0)


def additive_relations(xs: Sequence[NumberLike],
                       degree_cap: int = DEFAULT_DEGREE_CAP) -> RelationLattice:
    """Lattice of integer vectors a with sum(a_i * xs_i) == 0, exactly.

    Every basis vector is re-verified by exact field arithmetic before the
    lattice is returned.
    """
    xs = list(xs)
    k = len(xs)
    if k == 0:
        return RelationLattice(0, ())
    field, coords = common_field(xs, degree_cap=degree_cap)
    # rows: one per input; columns: field coordinates.  Scale to integers
    # (uniform scaling of the whole matrix keeps the kernel unchanged).
    den = lcm(*[c.denominator for row in coords for c in row]) if coords else 1
    m = [[int(c * den) for c in row] for row in coords]
    basis = int_kernel_basis(m)
    for a in basis:
        acc = field.zero()
        for ai, crow in zip(a, coords):
            if ai:
                acc = acc + field.element(crow) * Fraction(ai)
        if not acc.is_zero():
            raise RuntimeError("relation lattice failed exact re-verification")
    return RelationLattice(k, basis)
