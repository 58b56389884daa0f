"""Exact linear algebra over the rationals, over number fields, and over the integers.

Matrices are plain ``list[list[...]]`` rows.  Rational routines work on
:class:`fractions.Fraction` entries.  The generic elimination routines are
parameterised by a small *field context* so the same code runs over rational
numbers and over number-field elements.

Integer routines provide a row-style Hermite normal form with a unimodular
transform, from which saturated integer kernel lattices are extracted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence


# ---------------------------------------------------------------------------
# field contexts


@dataclass(frozen=True)
class FieldContext:
    """Minimal interface the elimination routines need from a field."""

    zero: object
    one: object
    is_zero: Callable[[object], bool]

    def from_int(self, n: int):
        if n == 0:
            return self.zero
        if n == 1:
            return self.one
        return self.one * n if hasattr(self.one, "__mul__") else n


RATIONAL_CTX = FieldContext(zero=Fraction(0), one=Fraction(1), is_zero=lambda x: x == 0)


def field_ctx_for(field) -> FieldContext:
    """Context for a :class:`orbitcert.exactnum.NumberField`."""
    return FieldContext(zero=field.zero(), one=field.one(),
                        is_zero=lambda x: x.is_zero())


# ---------------------------------------------------------------------------
# rational matrix helpers


def mat_identity(d: int):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(d)] for i in range(d)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(m)]
            for i in range(n)]


def mat_vec(a, v):
    return [sum((a[i][t] * v[t] for t in range(len(v))), Fraction(0))
            for i in range(len(a))]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def mat_trace(a):
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


# ---------------------------------------------------------------------------
# generic elimination (any field via FieldContext)


def gen_rref(rows: Sequence[Sequence], ctx: FieldContext):
    """Reduced row echelon form.  Returns ``(rref_rows, pivot_columns)``."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if not ctx.is_zero(m[i][c]):
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = ctx.one / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and not ctx.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def gen_rank(rows, ctx: FieldContext) -> int:
    return len(gen_rref(rows, ctx)[1])


def gen_inverse(rows, ctx: FieldContext):
    """Inverse of a square matrix; raises ``ValueError`` if singular."""
    d = len(rows)
    aug = [list(rows[i]) + [ctx.one if j == i else ctx.zero for j in range(d)]
           for i in range(d)]
    red, pivots = gen_rref(aug, ctx)
    if len(pivots) < d or pivots[:d] != list(range(d)):
        raise ValueError("matrix is singular")
    return [row[d:] for row in red]


def gen_kernel_basis(rows, ctx: FieldContext):
    """Basis of the right kernel {v : M v = 0}, deterministic order.

    Each basis vector sets one free column to 1 (in increasing column order)
    and the remaining free columns to 0.
    """
    red, pivots = gen_rref(rows, ctx)
    ncols = len(rows[0]) if rows else 0
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [ctx.zero] * ncols
        v[fc] = ctx.one
        for r, pc in enumerate(pivots):
            # pivot row: x_pc + sum over free cols red[r][c]*x_c = 0
            v[pc] = ctx.zero - red[r][fc]
        basis.append(v)
    return basis


def gen_solve(rows, rhs, ctx: FieldContext):
    """One solution of M x = rhs, or None if inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = gen_rref(aug, ctx)
    if ncols in pivots:
        return None  # pivot in the rhs column: inconsistent
    x = [ctx.zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def mat_inverse(rows):
    return gen_inverse(rows, RATIONAL_CTX)


def mat_rank(rows):
    return gen_rank(rows, RATIONAL_CTX)


# ---------------------------------------------------------------------------
# characteristic polynomial (Faddeev-LeVerrier), exact over the rationals


def char_poly(a) -> tuple:
    """Monic characteristic polynomial, ascending Fraction coefficients.

    Uses the Faddeev-LeVerrier recurrence, which stays in exact rational
    arithmetic with d matrix products.
    """
    d = len(a)
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1)
    m = mat_identity(d)
    c = Fraction(1)
    for k in range(1, d + 1):
        m = mat_mul(a, m)
        c = -mat_trace(m) / k
        coeffs[d - k] = c
        for i in range(d):
            m[i][i] += c
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# integer lattice routines


def hnf_with_transform(m: Sequence[Sequence[int]]):
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U @ M == H``, ``U`` unimodular, ``H`` in
    row echelon form with positive pivots and entries above each pivot
    reduced into ``[0, pivot)``.
    """
    h = [list(map(int, row)) for row in m]
    nrows = len(h)
    ncols = len(h[0]) if nrows else 0
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    r = 0
    for c in range(ncols):
        # clear column c below row r using extended gcd row operations
        piv = None
        for i in range(r, nrows):
            if h[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        h[r], h[piv] = h[piv], h[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, nrows):
            while h[i][c] != 0:
                q = h[r][c] // h[i][c]
                h[r] = [x - q * y for x, y in zip(h[r], h[i])]
                u[r] = [x - q * y for x, y in zip(u[r], u[i])]
                h[r], h[i] = h[i], h[r]
                u[r], u[i] = u[i], u[r]
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        # reduce entries above the pivot
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
        if r == nrows:
            break
    # move zero rows to the bottom (stable)
    order = sorted(range(nrows), key=lambda i: (all(v == 0 for v in h[i]),))
    h = [h[i] for i in order]
    u = [u[i] for i in order]
    return h, u


def hnf_rows(m: Sequence[Sequence[int]]):
    """HNF without the transform; zero rows dropped."""
    h, _ = hnf_with_transform(m)
    return tuple(tuple(row) for row in h if any(v != 0 for v in row))


def int_kernel_basis(m: Sequence[Sequence[int]]):
    """Canonical basis of the saturated left-kernel lattice {a : a M = 0}.

    ``m`` has one row per coordinate of ``a``.  The result is the HNF basis
    of the lattice, as a tuple of integer tuples.  Because the kernel of an
    integer matrix inside Z^k is automatically saturated (it is the set of
    *all* integer points of a rational subspace), no extra saturation step
    is needed.
    """
    h, u = hnf_with_transform(m)
    kernel_rows = [tuple(u[i]) for i in range(len(h))
                   if all(v == 0 for v in h[i])]
    if not kernel_rows:
        return ()
    return hnf_rows(kernel_rows)
