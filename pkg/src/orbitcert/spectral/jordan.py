"""Exact Jordan decomposition of rational matrices.

The characteristic polynomial is factored into irreducibles over Z.  For
each irreducible factor q the Jordan chain structure is computed once, in
the abstract quotient field K = Q[x]/(q); every root of q shares that
structure.  Chain vectors have K-entries, i.e. polynomials in the generic
eigenvalue with rational coefficients, so the whole basis is captured by

    P = U * X

with U a rational d x d matrix (the polynomial coefficients of the chain
vectors) and X a block Vandermonde built from the roots of each factor.
The inverse splits the same way: U is inverted over Q, and X is inverted
symbolically through the Lagrange interpolation rows q(x) / (q'(r)(x - r)),
computed once per factor by synthetic division in K.  No arithmetic ever
happens in a compositum of different eigenvalue fields.

Roots are materialised per factor as real algebraic numbers: real roots
directly, complex roots as (real part, imaginary part) pairs verified by
evaluating q exactly at the candidate point inside a shared real field.
Blocks are ordered canonically by (real part, |imaginary part|, size) with
conjugate blocks adjacent, negative imaginary part first.

Exactness is enforced twice over: ``verify_exact`` proves the defining
identities symbolically (chain relations in K, rational inverse of U,
Lagrange identity per factor), and ``p_times_pinv_is_identity`` evaluates
P * Pinv entrywise in pure rational arithmetic via trace forms, entirely
independent of the first route.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from ..errors import DegreeCapExceeded
from ..exactnum import (
    DEFAULT_DEGREE_CAP,
    ComplexAlgebraic,
    RealAlgebraic,
    alg_compare,
    common_field,
    isolate_real_roots,
)
from ..exactnum import intpoly as ip
from ..exactnum.numberfield import ComplexFieldElement, FieldElement, NumberField
from .linalg import (
    FieldContext,
    char_poly,
    field_ctx_for,
    gen_kernel_basis,
    gen_rank,
    mat_identity,
    mat_inverse,
    mat_mul,
)

__all__ = ["JordanBlock", "JordanDecomposition", "jordan_decompose", "reality_check"]


# ---------------------------------------------------------------------------
# internal structures


@dataclass
class _RootGroup:
    """One real root, or one conjugate pair, of an irreducible factor."""

    kind: str  # "real" | "pair"
    rho: RealAlgebraic
    omega_abs: RealAlgebraic  # exact zero for real roots
    field: NumberField  # real field containing rho (and omega for pairs)
    rho_el: FieldElement
    omega_el: FieldElement  # zero for real roots

    def lam(self, sign: int) -> ComplexFieldElement:
        if self.kind == "real":
            return ComplexFieldElement.from_real(self.rho_el)
        om = self.omega_el if sign > 0 else -self.omega_el
        return ComplexFieldElement(self.rho_el, om)


@dataclass
class _Factor:
    q: tuple[int, ...]  # irreducible integer polynomial, ascending
    e: int  # its degree
    mult: int  # multiplicity in the characteristic polynomial
    K: NumberField  # abstract Q[x]/(q)
    lam: FieldElement  # class of x in K
    chains: list  # chains[c][p] = vector of K-elements, length d
    s_coeffs: list  # synthetic quotient q(x)/(x - lam), coefficients in K
    qprime_inv: FieldElement  # 1 / q'(lam) in K
    groups: list  # list[_RootGroup]
    col_index: dict = dc_field(default_factory=dict)  # (chain, pos) -> 0..mult-1
    u_offset: int = 0  # first internal U column of this factor

    def power_sums(self) -> list[Fraction]:
        """p_t = sum of t-th powers of the roots of q, t = 0..e-1."""
        monic = ip.poly_monic(tuple(Fraction(c) for c in self.q))
        e = self.e
        a = list(monic)  # a[t] coefficient of x^t, a[e] == 1
        p = [Fraction(e)]
        for t in range(1, e):
            s = t * a[e - t]
            for i in range(1, t):
                s += a[e - i] * p[t - i]
            p.append(-s)
        return p


@dataclass
class JordanBlock:
    """One Jordan block in the canonical ordering."""

    index: int
    size: int
    rho: RealAlgebraic
    omega: RealAlgebraic  # signed; exact zero for real eigenvalues
    sign: int  # -1 / +1 for conjugate pairs, 0 for real blocks
    col_offset: int
    factor_index: int
    group_index: int
    chain_index: int
    pair_partner: Optional[int]  # index of the conjugate block

    @property
    def is_real(self) -> bool:
        return self.sign == 0

    def eigenvalue(self) -> ComplexAlgebraic:
        return ComplexAlgebraic(self.rho, self.omega)


# ---------------------------------------------------------------------------
# chain computation in the abstract factor field


def _mat_vec_field(m, v, ctx: FieldContext):
    out = []
    for row in m:
        acc = ctx.zero
        for a, b in zip(row, v):
            acc = acc + a * b
        out.append(acc)
    return out


def _jordan_chains(m, target_dim: int, ctx: FieldContext, d: int):
    """Jordan chains of the nilpotent action of m on its generalised kernel.

    Returns a list of chains, longest first; chain[p] is the vector mapped
    to chain[p-1] by m (and chain[0] to zero).
    """
    kers = []  # kers[j-1] = deterministic basis of ker m^j
    mj = [[ctx.one if i == j else ctx.zero for j in range(d)] for i in range(d)]
    level = 0
    while True:
        level += 1
        if level > d + 1:
            raise RuntimeError("generalised kernel did not stabilise")
        mj = [[_dot(mj[i], [m[t][j] for t in range(d)], ctx) for j in range(d)]
              for i in range(d)]
        kj = gen_kernel_basis(mj, ctx)
        kers.append(kj)
        if len(kj) == target_dim:
            break
        if len(kj) > target_dim:
            raise RuntimeError("kernel dimension exceeded the multiplicity")
    top_level = level

    chains = []
    above = []  # vectors at the level currently being pushed down
    for j in range(top_level, 0, -1):
        carried = [_mat_vec_field(m, v, ctx) for v in above]
        base = (list(kers[j - 2]) if j >= 2 else []) + carried
        cur = list(base)
        cur_rank = gen_rank(cur, ctx) if cur else 0
        want = len(kers[j - 1])
        new_tops = []
        for cand in kers[j - 1]:
            if cur_rank == want:
                break
            trial = cur + [cand]
            r = gen_rank(trial, ctx)
            if r > cur_rank:
                cur = trial
                cur_rank = r
                new_tops.append(cand)
        if cur_rank != want:
            raise RuntimeError("failed to extend the Jordan chain basis")
        for top in new_tops:
            vec = top
            chain = [top]
            for _ in range(j - 1):
                vec = _mat_vec_field(m, vec, ctx)
                chain.append(vec)
            chains.append(list(reversed(chain)))
        above = carried + new_tops
    return chains


def _dot(row, col, ctx: FieldContext):
    acc = ctx.zero
    for a, b in zip(row, col):
        acc = acc + a * b
    return acc


# ---------------------------------------------------------------------------
# roots of an irreducible factor


def _neg_alg(x: RealAlgebraic) -> RealAlgebraic:
    return -x


def _quadratic_pair(q: Sequence[int]):
    a0, a1, a2 = (Fraction(c) for c in q)
    rho = RealAlgebraic.from_rational(-a1 / (2 * a2))
    disc = a1 * a1 - 4 * a0 * a2  # negative here
    # omega is the positive root of (2 a2 x)^2 + disc == 0
    w2 = -disc / (4 * a2 * a2)
    num, den = w2.numerator, w2.denominator
    (omega,) = isolate_real_roots((-num, 0, den), positive_only=True)
    return rho, omega


def _numeric_roots(q: Sequence[int]):
    coeffs = [mpmath.mpf(c) for c in reversed(q)]
    try:
        with mpmath.workdps(50):
            roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
    except Exception:
        return None
    return roots


def _nearest_first(cands: list[RealAlgebraic], approx) -> list[RealAlgebraic]:
    if approx is None:
        return list(cands)
    scored = []
    for r in cands:
        for _ in range(40):
            if r.hi - r.lo <= Fraction(1, 2**40):
                break
            r.refine()
        mid = (r.lo + r.hi) / 2
        scored.append((abs(mpmath.mpf(mid.numerator) / mpmath.mpf(mid.denominator)
                          - approx), r))
    scored.sort(key=lambda t: t[0])
    return [r for _, r in scored]


def _verify_pair(q: Sequence[int], rho: RealAlgebraic, omega: RealAlgebraic,
                 degree_cap: int):
    """If q(rho + i*omega) == 0 exactly, return the shared real field data."""
    try:
        fld, (rc, wc) = common_field([rho, omega], degree_cap=degree_cap)
    except DegreeCapExceeded:
        raise
    rho_el = fld.element(rc)
    omega_el = fld.element(wc)
    lam = ComplexFieldElement(rho_el, omega_el)
    acc = ComplexFieldElement.from_real(fld.zero())
    for c in reversed(q):
        acc = acc * lam + fld.from_rational(c)
    if acc.is_zero():
        return fld, rho_el, omega_el
    return None


def _complex_pairs(q: tuple[int, ...], n_pairs: int, degree_cap: int):
    """All conjugate root pairs of q as verified (rho, omega>0) data."""
    if ip.poly_degree(q) == 2:
        rho, omega = _quadratic_pair(q)
        fld, (rc, wc) = common_field([rho, omega], degree_cap=degree_cap)
        return [(rho, omega, fld, fld.element(rc), fld.element(wc))]

    x, y = ip.sympy_x(), ip.sympy_y()
    qy = ip.to_sympy(tuple(Fraction(c) for c in q), y).as_expr()
    # candidate real parts: x with q(y) and q(2x - y) sharing a root
    r2 = ip.resultant_bivariate(qy, _subst_sympy(q, 2 * x - y))
    rho_cands = isolate_real_roots(ip.poly_primitive_int(ip.poly_squarefree_part(r2)))
    # candidate imaginary parts: from the difference resultant D(z) at z = 2ix
    dpoly = ip.resultant_bivariate(qy, _subst_sympy(q, y + x))
    ecoeffs = []
    ocoeffs = []
    for j, c in enumerate(dpoly):
        scaled = c * (2**j)
        if j % 2 == 0:
            ecoeffs.extend([Fraction(0)] * (j - len(ecoeffs)))
            ecoeffs.append(scaled if j % 4 == 0 else -scaled)
        else:
            ocoeffs.extend([Fraction(0)] * (j - len(ocoeffs)))
            ocoeffs.append(scaled if j % 4 == 1 else -scaled)
    wpoly = ip.poly_add(ip.poly_mul(tuple(ecoeffs), tuple(ecoeffs)),
                        ip.poly_mul(tuple(ocoeffs), tuple(ocoeffs)))
    omega_cands = isolate_real_roots(
        ip.poly_primitive_int(ip.poly_squarefree_part(wpoly)), positive_only=True)

    # numeric prefilter purely to order the exact verifications
    approx = _numeric_roots(q)
    approx_pairs = []
    if approx is not None:
        for r in approx:
            if mpmath.im(r) > mpmath.mpf(2) ** -30:
                approx_pairs.append((mpmath.re(r), mpmath.im(r)))

    found = []

    def try_pair(rho, omega):
        for r, w, *_ in found:
            if alg_compare(r, rho) == 0 and alg_compare(w, omega) == 0:
                return
        got = _verify_pair(q, rho, omega, degree_cap)
        if got is not None:
            fld, rel, wel = got
            found.append((rho, omega, fld, rel, wel))

    if approx_pairs and len(approx_pairs) == n_pairs:
        for re_a, im_a in approx_pairs:
            before = len(found)
            for rho in _nearest_first(rho_cands, re_a)[:3]:
                for omega in _nearest_first(omega_cands, im_a)[:3]:
                    try_pair(rho, omega)
                    if len(found) > before:
                        break
                if len(found) > before:
                    break
    if len(found) != n_pairs:
        found = []
        for rho in rho_cands:
            for omega in omega_cands:
                if len(found) == n_pairs:
                    break
                try_pair(rho, omega)
    if len(found) != n_pairs:
        raise RuntimeError("failed to account for all conjugate root pairs")
    return found


def _subst_sympy(q: Sequence[int], arg):
    import sympy

    expr = sympy.Integer(0)
    for j, c in enumerate(q):
        if c:
            expr += sympy.Integer(int(c)) * arg**j
    return sympy.expand(expr)


def _root_groups(q: tuple[int, ...], degree_cap: int) -> list[_RootGroup]:
    e = ip.poly_degree(q)
    groups = []
    for root in isolate_real_roots(q):
        fld = NumberField(q, root)
        groups.append(_RootGroup("real", root, RealAlgebraic.from_rational(0),
                                 fld, fld.theta_element(), fld.zero()))
    n_pairs = (e - len(groups)) // 2
    if n_pairs:
        for rho, omega, fld, rel, wel in _complex_pairs(q, n_pairs, degree_cap):
            groups.append(_RootGroup("pair", rho, omega, fld, rel, wel))

    def cmp(a: _RootGroup, b: _RootGroup) -> int:
        c = alg_compare(a.rho, b.rho)
        if c:
            return c
        return alg_compare(a.omega_abs, b.omega_abs)

    groups.sort(key=functools.cmp_to_key(cmp))
    return groups


# ---------------------------------------------------------------------------
# the decomposition object


class JordanDecomposition:
    """Exact spectral data: P, J, Pinv with certified block structure."""

    def __init__(self, A, cp, factors, blocks, U, Uinv, col_map):
        self.A = A
        self.dimension = len(A)
        self.char_poly = cp
        self.factors: list[_Factor] = factors
        self.blocks: list[JordanBlock] = blocks
        self.U = U
        self.Uinv = Uinv
        self._col_map = col_map  # column -> (block_index, position)

    # -- structural accessors ------------------------------------------------

    def block_of_column(self, col: int) -> tuple[JordanBlock, int]:
        bi, p = self._col_map[col]
        return self.blocks[bi], p

    def rho_vector(self) -> list[RealAlgebraic]:
        return [b.rho for b in self.blocks]

    def omega_vector(self) -> list[RealAlgebraic]:
        return [b.omega for b in self.blocks]

    def conjugate_paired_diag(self, re, im):
        """Per-block unit-circle style values honouring the conjugate pairing."""
        out = []
        for b in self.blocks:
            if b.sign == 0:
                out.append((Fraction(1), Fraction(0)))
            elif b.sign > 0:
                out.append((Fraction(re), Fraction(im)))
            else:
                out.append((Fraction(re), -Fraction(im)))
        return out

    # -- entry evaluation ----------------------------------------------------

    def _eval_in_group(self, z: FieldElement, fi: int, gi: int,
                      sign: int) -> ComplexFieldElement:
        grp: _RootGroup = self.factors[fi].groups[gi]
        if grp.kind == "real":
            return ComplexFieldElement.from_real(grp.field.element(z.coords))
        lam = grp.lam(sign)
        acc = ComplexFieldElement.from_real(grp.field.zero())
        for c in reversed(z.coords):
            acc = acc * lam + grp.field.from_rational(c)
        return acc

    def P_cfe(self, i: int, col: int) -> ComplexFieldElement:
        b, p = self.block_of_column(col)
        fac = self.factors[b.factor_index]
        z = fac.chains[b.chain_index][p][i]
        return self._eval_in_group(z, b.factor_index, b.group_index, b.sign)

    def _pinv_kelem(self, fi: int, chain: int, pos: int, j: int) -> FieldElement:
        fac = self.factors[fi]
        i_cp = fac.col_index[(chain, pos)]
        m = fac.mult
        acc = fac.K.zero()
        for t in range(fac.e):
            coef = self.Uinv[fac.u_offset + t * m + i_cp][j]
            if coef:
                acc = acc + fac.s_coeffs[t] * coef
        return acc * fac.qprime_inv

    def Pinv_cfe(self, row: int, j: int) -> ComplexFieldElement:
        b, p = self.block_of_column(row)
        h = self._pinv_kelem(b.factor_index, b.chain_index, p, j)
        return self._eval_in_group(h, b.factor_index, b.group_index, b.sign)

    def _cfe_to_alg(self, z: ComplexFieldElement,
                    degree_cap: int = DEFAULT_DEGREE_CAP) -> ComplexAlgebraic:
        return ComplexAlgebraic(z.re.to_real_algebraic(degree_cap),
                                z.im.to_real_algebraic(degree_cap))

    def P_matrix(self) -> list[list[ComplexAlgebraic]]:
        d = self.dimension
        return [[self._cfe_to_alg(self.P_cfe(i, c)) for c in range(d)]
                for i in range(d)]

    def Pinv_matrix(self) -> list[list[ComplexAlgebraic]]:
        d = self.dimension
        return [[self._cfe_to_alg(self.Pinv_cfe(r, j)) for j in range(d)]
                for r in range(d)]

    def J_matrix(self) -> list[list[ComplexAlgebraic]]:
        d = self.dimension
        zero = ComplexAlgebraic.from_real(0)
        out = [[zero for _ in range(d)] for _ in range(d)]
        for b in self.blocks:
            for p in range(b.size):
                c = b.col_offset + p
                out[c][c] = b.eigenvalue()
                if p + 1 < b.size:
                    out[c][c + 1] = ComplexAlgebraic.from_real(1)
        return out

    # -- exact verification --------------------------------------------------

    def verify_exact(self) -> None:
        """Prove A P = P J and P Pinv = I through the structured identities.

        Raises on any failure.  Everything here is symbolic: chain relations
        in each factor field, the rational identity U Uinv = I, and the
        Lagrange division identity per factor.
        """
        d = self.dimension
        if mat_mul(self.U, self.Uinv) != mat_identity(d):
            raise RuntimeError("U inverse check failed")
        total = 0
        for fac in self.factors:
            K = fac.K
            lam = fac.lam
            m = [[K.from_rational(self.A[i][j]) - (lam if i == j else 0)
                  for j in range(d)] for i in range(d)]
            for chain in fac.chains:
                prev = None
                for vec in chain:
                    img = _mat_vec_field(m, vec, field_ctx_for(K))
                    want = prev if prev is not None else [K.zero()] * d
                    for a, b in zip(img, want):
                        if not (a - b).is_zero():
                            raise RuntimeError("Jordan chain relation failed")
                    prev = vec
                total += len(chain) * fac.e
            # Lagrange identity: (x - lam) * s(x) == q(x) in K[x]
            prod = [K.zero()] * (fac.e + 1)
            for t, s in enumerate(fac.s_coeffs):
                prod[t + 1] = prod[t + 1] + s
                prod[t] = prod[t] - lam * s
            for t in range(fac.e + 1):
                qc = K.from_rational(fac.q[t] if t < len(fac.q) else 0)
                if not (prod[t] - qc).is_zero():
                    raise RuntimeError("Lagrange division identity failed")
            # s(lam) == q'(lam), so the interpolation diagonal is exactly one
            s_at_lam = K.zero()
            for t in reversed(range(fac.e)):
                s_at_lam = s_at_lam * lam + fac.s_coeffs[t]
            qprime = K.zero()
            for t in reversed(range(1, len(fac.q))):
                qprime = qprime * lam + K.from_rational(t * fac.q[t])
            if not (s_at_lam - qprime).is_zero():
                raise RuntimeError("interpolation normalisation failed")
            if not (fac.qprime_inv * qprime).is_one():
                raise RuntimeError("q'(lam) inverse check failed")
        if total != d:
            raise RuntimeError("block sizes do not sum to the dimension")
        for b in self.blocks:
            if b.sign != 0:
                partner = self.blocks[b.pair_partner]
                if partner.pair_partner != b.index or partner.sign != -b.sign:
                    raise RuntimeError("conjugate pairing is inconsistent")

    def p_times_pinv_is_identity(self) -> bool:
        """Evaluate P Pinv entrywise over Q through trace forms.

        For each factor, summing an expression g(r) h(r) over all roots r of
        q is the field trace of g*h, computable from the power sums of q's
        roots.  This route never touches U*X bookkeeping or root isolation,
        so it cross-checks the structured construction independently.
        """
        d = self.dimension
        psums = [fac.power_sums() for fac in self.factors]
        for i in range(d):
            for j in range(d):
                total = Fraction(0)
                for fi, fac in enumerate(self.factors):
                    for (c, p), _ in fac.col_index.items():
                        g = fac.chains[c][p][i]
                        h = self._pinv_kelem(fi, c, p, j)
                        prod = g * h
                        total += sum(prod.coords[t] * psums[fi][t]
                                     for t in range(fac.e))
                if total != (1 if i == j else 0):
                    return False
        return True


# ---------------------------------------------------------------------------
# decomposition driver


def jordan_decompose(A, degree_cap: int = DEFAULT_DEGREE_CAP) -> JordanDecomposition:
    A = [[Fraction(x) for x in row] for row in A]
    d = len(A)
    if any(len(row) != d for row in A):
        raise ValueError("matrix must be square")
    cp = char_poly(A)
    raw = ip.zz_factor(ip.poly_primitive_int(cp))
    raw.sort(key=lambda fm: (ip.poly_degree(fm[0]), fm[0]))

    factors: list[_Factor] = []
    u_off = 0
    for q, mult in raw:
        e = ip.poly_degree(q)
        K = NumberField.abstract(q)
        lam = K.theta_element()
        ctx = field_ctx_for(K)
        m = [[K.from_rational(A[i][j]) - (lam if i == j else 0)
              for j in range(d)] for i in range(d)]
        chains = _jordan_chains(m, mult, ctx, d)
        chains.sort(key=lambda ch: -len(ch))
        # synthetic division q(x) = (x - lam) s(x): s_t = sum_{u>t} q_u lam^(u-t-1)
        s_coeffs = [K.zero()] * e
        acc = K.zero()
        for t in reversed(range(e)):
            acc = acc * lam + K.from_rational(q[t + 1])
            s_coeffs[t] = acc
        qprime = K.zero()
        for t in reversed(range(1, len(q))):
            qprime = qprime * lam + K.from_rational(t * q[t])
        fac = _Factor(q=q, e=e, mult=mult, K=K, lam=lam, chains=chains,
                      s_coeffs=s_coeffs, qprime_inv=qprime.inverse(),
                      groups=_root_groups(q, degree_cap))
        i_cp = 0
        for c, chain in enumerate(chains):
            for p in range(len(chain)):
                fac.col_index[(c, p)] = i_cp
                i_cp += 1
        if i_cp != mult:
            raise RuntimeError("chain lengths do not sum to the multiplicity")
        fac.u_offset = u_off
        u_off += e * mult
        factors.append(fac)
    if u_off != d:
        raise RuntimeError("factor multiplicities do not sum to the dimension")

    # rational coefficient matrix U: column (factor, power t, chain slot)
    U = [[Fraction(0)] * d for _ in range(d)]
    for fi, fac in enumerate(factors):
        for (c, p), i_cp in fac.col_index.items():
            vec = fac.chains[c][p]
            for row in range(d):
                coords = vec[row].coords
                for t in range(fac.e):
                    U[row][fac.u_offset + t * fac.mult + i_cp] = coords[t]
    Uinv = mat_inverse(U)

    # canonical block layout: sort (factor, group, chain) units
    units = []
    for fi, fac in enumerate(factors):
        for gi, grp in enumerate(fac.groups):
            for c, chain in enumerate(fac.chains):
                units.append((fi, gi, c, len(chain), grp))

    def unit_cmp(a, b) -> int:
        c = alg_compare(a[4].rho, b[4].rho)
        if c:
            return c
        c = alg_compare(a[4].omega_abs, b[4].omega_abs)
        if c:
            return c
        if a[3] != b[3]:
            return -1 if a[3] < b[3] else 1
        if a[0] != b[0]:
            return -1 if a[0] < b[0] else 1
        if a[2] != b[2]:
            return -1 if a[2] < b[2] else 1
        return 0

    units.sort(key=functools.cmp_to_key(unit_cmp))

    blocks: list[JordanBlock] = []
    col_map = []
    offset = 0
    for fi, gi, c, size, grp in units:
        if grp.kind == "real":
            b = JordanBlock(index=len(blocks), size=size, rho=grp.rho,
                            omega=RealAlgebraic.from_rational(0), sign=0,
                            col_offset=offset, factor_index=fi, group_index=gi,
                            chain_index=c, pair_partner=None)
            blocks.append(b)
            col_map.extend((b.index, p) for p in range(size))
            offset += size
        else:
            neg = JordanBlock(index=len(blocks), size=size, rho=grp.rho,
                              omega=-grp.omega_abs, sign=-1, col_offset=offset,
                              factor_index=fi, group_index=gi, chain_index=c,
                              pair_partner=len(blocks) + 1)
            blocks.append(neg)
            col_map.extend((neg.index, p) for p in range(size))
            offset += size
            pos = JordanBlock(index=len(blocks), size=size, rho=grp.rho,
                              omega=grp.omega_abs, sign=1, col_offset=offset,
                              factor_index=fi, group_index=gi, chain_index=c,
                              pair_partner=len(blocks) - 1)
            blocks.append(pos)
            col_map.extend((pos.index, p) for p in range(size))
            offset += size
    if offset != d:
        raise RuntimeError("column layout does not cover the space")

    return JordanDecomposition(A, cp, factors, blocks, U, Uinv, col_map)


# ---------------------------------------------------------------------------
# reality of P diag(tau) Pinv


def reality_check(jd: JordanDecomposition, tau) -> tuple[bool, Optional[tuple]]:
    """Is P diag(tau) Pinv an exactly real matrix?

    ``tau`` gives one complex value (re, im) per block, broadcast over that
    block's columns.  If the values honour the conjugate pairing (paired
    blocks get conjugate values, real blocks get real values), the matrix is
    real identically and no arithmetic is needed.  Otherwise the imaginary
    part of every entry is evaluated exactly; the first nonzero entry is
    returned as a witness.
    """
    vals = [(Fraction(a), Fraction(b)) for a, b in tau]
    if len(vals) != len(jd.blocks):
        raise ValueError("one value per block required")
    structural = True
    for b in jd.blocks:
        re, im = vals[b.index]
        if b.sign == 0:
            if im != 0:
                structural = False
        elif b.sign > 0:
            pre, pim = vals[b.pair_partner]
            if pre != re or pim != -im:
                structural = False
    if structural:
        return True, None

    d = jd.dimension
    for i in range(d):
        for j in range(d):
            imag_total: Optional[RealAlgebraic] = None
            for b in jd.blocks:
                if b.sign < 0:
                    continue  # handled together with the positive partner
                re_t, im_t = vals[b.index]
                for p in range(b.size):
                    col = b.col_offset + p
                    if b.sign == 0:
                        if im_t == 0:
                            continue
                        g = jd.P_cfe(i, col)
                        h = jd.Pinv_cfe(col, j)
                        u = (g * h).re  # real root: product is real
                        contrib = u.to_real_algebraic() * im_t
                    else:
                        partner = jd.blocks[b.pair_partner]
                        pre_t, pim_t = vals[partner.index]
                        g = jd.P_cfe(i, col)
                        h = jd.Pinv_cfe(col, j)
                        u = g * h
                        cx = pim_t + im_t  # coefficient of Re(u)
                        cy = re_t - pre_t  # coefficient of Im(u)
                        if cx == 0 and cy == 0:
                            continue
                        contrib = (u.re.to_real_algebraic() * cx
                                   + u.im.to_real_algebraic() * cy)
                    imag_total = contrib if imag_total is None \
                        else imag_total + contrib
            if imag_total is not None and imag_total.sign() != 0:
                return False, (i, j)
    return True, None
