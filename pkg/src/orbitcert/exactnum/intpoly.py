"""Dense univariate polynomials as coefficient tuples, ascending (c0, c1, ...).

Coefficients are Fractions (or ints where exactness permits). The heavy
kernels that benefit from mature implementations (factorization over Z,
bivariate resultants) are bridged to sympy's exact polynomial domain; the
interactive pieces (Sturm chains, evaluation, squarefree parts, gcds) are
implemented here directly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Tuple

import sympy

from ..intervals import RatInterval

Poly = Tuple[Fraction, ...]

_X = sympy.Symbol("x")
_Y = sympy.Symbol("y")


def poly_normalize(coeffs: Sequence) -> Poly:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def poly_degree(p: Sequence) -> int:
    p = poly_normalize(p)
    return len(p) - 1 if p else -1


def poly_is_zero(p: Sequence) -> bool:
    return not poly_normalize(p)


def poly_add(a: Sequence, b: Sequence) -> Poly:
    n = max(len(a), len(b))
    return poly_normalize(
        [(Fraction(a[i]) if i < len(a) else 0) + (Fraction(b[i]) if i < len(b) else 0)
         for i in range(n)])


def poly_sub(a: Sequence, b: Sequence) -> Poly:
    return poly_add(a, poly_scale(b, Fraction(-1)))


def poly_scale(a: Sequence, c) -> Poly:
    c = Fraction(c)
    return poly_normalize([Fraction(x) * c for x in a])


def poly_mul(a: Sequence, b: Sequence) -> Poly:
    a, b = poly_normalize(a), poly_normalize(b)
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_normalize(out)


def poly_pow(a: Sequence, n: int) -> Poly:
    out: Poly = (Fraction(1),)
    base = poly_normalize(a)
    while n:
        if n & 1:
            out = poly_mul(out, base)
        base = poly_mul(base, base)
        n >>= 1
    return out


def poly_divmod(a: Sequence, b: Sequence) -> tuple[Poly, Poly]:
    a, b = list(poly_normalize(a)), poly_normalize(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lc = b[-1]
    while len(a) >= len(b):
        k = len(a) - len(b)
        c = a[-1] / lc
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] -= c * bc
        while a and a[-1] == 0:
            a.pop()
    return poly_normalize(q), poly_normalize(a)


def poly_mod(a: Sequence, b: Sequence) -> Poly:
    return poly_divmod(a, b)[1]


def poly_derivative(a: Sequence) -> Poly:
    a = poly_normalize(a)
    return poly_normalize([Fraction(i) * c for i, c in enumerate(a)][1:])


def poly_eval(a: Sequence, x) -> Fraction:
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(poly_normalize(a)):
        acc = acc * x + c
    return acc


def poly_eval_interval(a: Sequence, x: RatInterval) -> RatInterval:
    """Horner evaluation over an interval; sound (possibly loose) enclosure."""
    acc = RatInterval.point(0)
    for c in reversed(poly_normalize(a)):
        acc = acc * x + RatInterval.point(Fraction(c))
    return acc


def poly_compose(a: Sequence, b: Sequence) -> Poly:
    """a(b(x))."""
    acc: Poly = ()
    for c in reversed(poly_normalize(a)):
        acc = poly_add(poly_mul(acc, b), (Fraction(c),))
    return acc


def poly_monic(a: Sequence) -> Poly:
    a = poly_normalize(a)
    if not a:
        return a
    return poly_scale(a, 1 / a[-1])


def poly_gcd(a: Sequence, b: Sequence) -> Poly:
    """Monic gcd over Q via the Euclidean algorithm."""
    a, b = poly_normalize(a), poly_normalize(b)
    while b:
        a, b = b, poly_mod(a, b)
    return poly_monic(a)


def poly_squarefree_part(a: Sequence) -> Poly:
    a = poly_normalize(a)
    if poly_degree(a) <= 0:
        return a
    g = poly_gcd(a, poly_derivative(a))
    q, r = poly_divmod(a, g)
    assert poly_is_zero(r)
    return q


def poly_primitive_int(a: Sequence) -> Tuple[int, ...]:
    """Clear denominators and content; make the leading coefficient positive."""
    a = poly_normalize(a)
    if not a:
        return ()
    den = math.lcm(*(c.denominator for c in a))
    ints = [int(c * den) for c in a]
    g = math.gcd(*(abs(c) for c in ints))
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def poly_content_free(a: Sequence) -> Poly:
    return tuple(Fraction(c) for c in poly_primitive_int(a))


# --- Sturm machinery ---------------------------------------------------------

def sturm_sequence(p: Sequence) -> list[Poly]:
    p = poly_normalize(p)
    seq = [p, poly_derivative(p)]
    while not poly_is_zero(seq[-1]) and poly_degree(seq[-1]) > 0:
        rem = poly_mod(seq[-2], seq[-1])
        if poly_is_zero(rem):
            break
        seq.append(poly_scale(rem, Fraction(-1)))
    return [s for s in seq if not poly_is_zero(s)]


def _sign_variations(values: list[Fraction]) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def sturm_count(p: Sequence, lo: Fraction, hi: Fraction,
                seq: list[Poly] | None = None) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi].

    p need not be squarefree; the chain construction handles repeated roots
    in the usual way (counts distinct roots).
    """
    if lo > hi:
        raise ValueError("lo > hi")
    if lo == hi:
        return 0
    if seq is None:
        seq = sturm_sequence(p)
    at_lo = [poly_eval(s, lo) for s in seq]
    at_hi = [poly_eval(s, hi) for s in seq]
    return _sign_variations(at_lo) - _sign_variations(at_hi)


def sturm_count_all(p: Sequence, seq: list[Poly] | None = None) -> int:
    """Number of distinct real roots of p."""
    p = poly_normalize(p)
    if poly_degree(p) <= 0:
        return 0
    if seq is None:
        seq = sturm_sequence(p)
    at_neg = [s[-1] * (1 if (poly_degree(s) % 2 == 0) else -1) for s in seq]
    at_pos = [s[-1] for s in seq]
    return _sign_variations(at_neg) - _sign_variations(at_pos)


def cauchy_root_bound(p: Sequence) -> Fraction:
    """B with every real root of p strictly inside (-B, B)."""
    p = poly_normalize(p)
    if poly_degree(p) < 1:
        return Fraction(1)
    lc = abs(p[-1])
    return 1 + max(abs(c) for c in p[:-1]) / lc


# --- sympy bridges -----------------------------------------------------------

def to_sympy(p: Sequence, symbol=_X) -> sympy.Poly:
    p = poly_normalize(p)
    expr = sum(sympy.Rational(c.numerator, c.denominator) * symbol**i
               for i, c in enumerate(p))
    return sympy.Poly(expr, symbol)


def from_sympy(sp: sympy.Poly) -> Poly:
    coeffs = list(reversed(sp.all_coeffs()))
    return poly_normalize([Fraction(c.p, c.q) for c in map(sympy.Rational, coeffs)])


def zz_factor(p: Sequence) -> list[tuple[Tuple[int, ...], int]]:
    """Irreducible factorization over Z of the primitive part.

    Returns [(factor_ascending_int_coeffs, multiplicity), ...] in sympy's
    deterministic order; factors are primitive with positive leading
    coefficient.
    """
    ints = poly_primitive_int(p)
    if len(ints) <= 1:
        return []
    sp = sympy.Poly(sum(c * _X**i for i, c in enumerate(ints)), _X, domain="ZZ")
    _, factors = sp.factor_list()
    out = []
    for f, mult in factors:
        fc = poly_primitive_int(from_sympy(f))
        out.append((fc, int(mult)))
    return out


def resultant_bivariate(p_in_y: sympy.Expr, q_in_xy: sympy.Expr) -> Poly:
    """Res_y(p(y), q(x, y)) as a polynomial in x with Fraction coefficients."""
    res = sympy.resultant(p_in_y, q_in_xy, _Y)
    return from_sympy(sympy.Poly(res, _X))


def sympy_x():
    return _X


def sympy_y():
    return _Y
