"""Exact gap statistics for families of exp-log sums.

Feeds the cone-widening constants: the smallest nonzero difference between
exponent values, the largest Euclidean distance between exponent integer
vectors, and the largest log-polynomial degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..exactnum import (
    DEFAULT_DEGREE_CAP,
    RealAlgebraic,
    alg_sqrt,
    common_field,
)
from .explog import ExpLogSum


@dataclass(frozen=True)
class GapData:
    """min_exponent_gap is None when fewer than two distinct exponent values
    exist; consumers may then pick any box radius."""

    min_exponent_gap: Optional[RealAlgebraic]
    max_vector_distance: RealAlgebraic
    max_log_degree: int

    @property
    def no_pairs(self) -> bool:
        return self.min_exponent_gap is None


def gap_data(sums: Sequence[ExpLogSum],
             exponent_vectors: Sequence[Sequence[int]],
             base_exponents: Sequence[RealAlgebraic],
             degree_cap: int = DEFAULT_DEGREE_CAP) -> GapData:
    """Exact minimum nonzero |base . (n - n')|, exact maximum ||n - n'||, and
    the maximum log-polynomial degree across the given sums."""
    k = len(base_exponents)
    vecs = sorted({tuple(int(x) for x in v) for v in exponent_vectors})
    for v in vecs:
        if len(v) != k:
            raise ValueError(
                f"exponent vector {v} has length {len(v)}, expected {k}")
    max_deg = max((t.coeff.degree for s in sums for t in s.terms), default=0)

    best_sq = 0
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            sq = sum((a - b) ** 2 for a, b in zip(vecs[i], vecs[j]))
            best_sq = max(best_sq, sq)
    max_dist = alg_sqrt(best_sq)

    best_gap = None
    if len(vecs) >= 2 and k > 0:
        field, coords = common_field(list(base_exponents), degree_cap)
        base_fes = [field.element(c) for c in coords]
        for i in range(len(vecs)):
            for j in range(i + 1, len(vecs)):
                fe = field.zero()
                for idx in range(k):
                    d = vecs[i][idx] - vecs[j][idx]
                    if d:
                        fe = fe + base_fes[idx] * Fraction(d)
                sg = fe.sign()
                if sg == 0:
                    continue
                mag = fe if sg > 0 else -fe
                if best_gap is None or (mag - best_gap).sign() < 0:
                    best_gap = mag
    min_gap = (best_gap.to_real_algebraic(degree_cap)
               if best_gap is not None else None)
    return GapData(min_gap, max_dist, max_deg)
