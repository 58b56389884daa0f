"""Spectral layer: exact char poly, Jordan decomposition, relation lattices.

Oracles: sympy Matrix (charpoly, inverse, eigenvals), numeric eigensolvers
for cross-checks, and brute-force search for relation lattices.
"""

import random
from fractions import Fraction

import pytest
import sympy

from orbitcert.exactnum import RealAlgebraic, alg_compare, alg_sign, isolate_real_roots
from orbitcert.spectral import (
    additive_relations,
    char_poly,
    jordan_decompose,
    reality_check,
)
from orbitcert.spectral.linalg import (
    hnf_with_transform,
    int_kernel_basis,
    mat_identity,
    mat_inverse,
    mat_mul,
)


def fr(m):
    return [[Fraction(x) for x in row] for row in m]


def to_sympy_matrix(m):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row]
                         for row in m])


class TestLinalg:
    def test_inverse_against_sympy(self):
        rng = random.Random(5)
        for _ in range(10):
            d = rng.randint(1, 5)
            m = [[Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(d)]
                 for _ in range(d)]
            sm = to_sympy_matrix(m)
            if sm.det() == 0:
                continue
            inv = mat_inverse(m)
            prod = mat_mul(m, inv)
            assert prod == mat_identity(d)
            want = sm.inv()
            got = to_sympy_matrix(inv)
            assert (want - got).is_zero_matrix

    def test_singular_raises(self):
        with pytest.raises(ValueError):
            mat_inverse(fr([[1, 2], [2, 4]]))

    def test_char_poly_against_sympy(self):
        rng = random.Random(6)
        lam = sympy.Symbol("lambda")
        for _ in range(12):
            d = rng.randint(1, 5)
            m = [[Fraction(rng.randint(-6, 6)) for _ in range(d)] for _ in range(d)]
            cp = char_poly(m)
            assert cp[-1] == 1 and len(cp) == d + 1
            want = to_sympy_matrix(m).charpoly(lam).all_coeffs()  # descending
            got = list(reversed([sympy.Rational(c.numerator, c.denominator) for c in cp]))
            assert got == [sympy.Rational(c) for c in want]

    def test_hnf_properties(self):
        rng = random.Random(7)
        for _ in range(15):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            m = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
            h, u = hnf_with_transform(m)
            # U m == H and U unimodular
            um = [[sum(u[i][k] * m[k][j] for k in range(rows)) for j in range(cols)]
                  for i in range(rows)]
            assert um == h
            det = to_sympy_matrix(fr(u)).det()
            assert det in (1, -1)
            # row-echelon shape: pivots move right, zero rows at the bottom
            last_pivot = -1
            seen_zero = False
            for row in h:
                nz = [j for j, v in enumerate(row) if v != 0]
                if not nz:
                    seen_zero = True
                    continue
                assert not seen_zero
                assert nz[0] > last_pivot
                last_pivot = nz[0]
                assert row[nz[0]] > 0

    def test_int_kernel(self):
        # kernel of [[2], [3]] as row-vector lattice {a : a M = 0}
        basis = int_kernel_basis([[2], [3]])
        assert basis == ((3, -2),)
        basis2 = int_kernel_basis([[1, 0], [0, 1]])
        assert basis2 == ()
        # saturation: kernel of [[2, 4]] column matrix... rows (a1,a2) with 2a1+4a2=0
        basis3 = int_kernel_basis([[2], [4]])
        assert basis3 == ((2, -1),)


def sqrt_alg(n):
    (r,) = isolate_real_roots([-n, 0, 1], positive_only=True)
    return r


class TestAdditiveRelations:
    def test_spec_literals(self):
        lat = additive_relations((Fraction(1), Fraction(-1)))
        assert lat.basis == ((1, 1),)
        lat2 = additive_relations((Fraction(2), Fraction(3)))
        assert lat2.basis == ((3, -2),)
        lat3 = additive_relations((Fraction(1), sqrt_alg(2)))
        assert lat3.basis == ()

    def test_zero_entries(self):
        lat = additive_relations((Fraction(0),))
        assert lat.basis == ((1,),)
        lat2 = additive_relations((Fraction(0), Fraction(5), Fraction(0)))
        assert ((1, 0, 0) in lat2) and ((0, 0, 1) in lat2) and not ((0, 1, 0) in lat2)

    def test_algebraic_relations(self):
        s2 = sqrt_alg(2)
        s8 = sqrt_alg(8)  # 2*sqrt2
        lat = additive_relations((s2, s8))
        assert lat.basis == ((2, -1),)
        s3 = sqrt_alg(3)
        lat2 = additive_relations((s2, s3, s2 + s3))
        assert ((1, 1, -1) in lat2)
        assert lat2.rank == 1

    def test_brute_force_oracle(self):
        # Inputs are rational combinations of 1, sqrt2, sqrt3.  Since those
        # three are linearly independent over Q, a combination vanishes if
        # and only if each rational coefficient vanishes; the brute-force
        # oracle uses only that fact and rational arithmetic.
        import itertools

        rng = random.Random(21)
        s2, s3 = sqrt_alg(2), sqrt_alg(3)
        base_alg = [None, s2, s3]  # None marks the rational coordinate
        for trial in range(6):
            k = rng.randint(2, 4)
            nb = rng.randint(1, 3)
            coeff_rows = []
            xs = []
            for _ in range(k):
                coeffs = [Fraction(rng.randint(-4, 4)) for _ in range(nb)]
                coeff_rows.append(coeffs)
                acc = RealAlgebraic.from_rational(coeffs[0])
                for c, b in zip(coeffs[1:], base_alg[1:nb]):
                    acc = acc + b * c
                xs.append(acc)
            lat = additive_relations(tuple(xs))

            def oracle_is_zero(a):
                return all(
                    sum(Fraction(ai) * coeff_rows[i][j] for i, ai in enumerate(a)) == 0
                    for j in range(nb))

            N = 6
            for a in itertools.product(range(-N, N + 1), repeat=k):
                if all(v == 0 for v in a):
                    continue
                assert (a in lat) == oracle_is_zero(a), (trial, a)


OSC = fr([[0, 1], [-1, 0]])
SPIRAL = fr([[-1, 1], [-1, -1]])


class TestJordan:
    def check_decomposition(self, A):
        jd = jordan_decompose(A)
        jd.verify_exact()
        assert jd.p_times_pinv_is_identity()
        return jd

    def test_oscillator(self):
        jd = self.check_decomposition(OSC)
        assert len(jd.blocks) == 2
        rhos = [b.rho for b in jd.blocks]
        omegas = [b.omega for b in jd.blocks]
        assert all(alg_sign(r) == 0 for r in rhos)
        assert sorted(alg_compare(w, 0) for w in omegas) == [-1, 1]
        assert [b.size for b in jd.blocks] == [1, 1]

    def test_spiral(self):
        jd = self.check_decomposition(SPIRAL)
        assert all(alg_compare(b.rho, Fraction(-1)) == 0 for b in jd.blocks)
        assert sorted(alg_compare(b.omega, 0) for b in jd.blocks) == [-1, 1]

    def test_scalar(self):
        jd = self.check_decomposition(fr([[1]]))
        assert len(jd.blocks) == 1
        assert alg_compare(jd.blocks[0].rho, 1) == 0
        assert alg_sign(jd.blocks[0].omega) == 0

    def test_defective(self):
        jd = self.check_decomposition(fr([[2, 1], [0, 2]]))
        assert len(jd.blocks) == 1 and jd.blocks[0].size == 2

    def test_nilpotent_two_chains(self):
        A = fr([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
        jd = self.check_decomposition(A)
        assert sorted(b.size for b in jd.blocks) == [1, 2]
        assert all(alg_sign(b.rho) == 0 and alg_sign(b.omega) == 0 for b in jd.blocks)

    def test_real_quadratic_field(self):
        A = fr([[0, 2], [1, 0]])  # companion of x^2-2
        jd = self.check_decomposition(A)
        vals = sorted([alg_compare(b.rho, 0) for b in jd.blocks])
        assert vals == [-1, 1]
        assert alg_compare(jd.blocks[1].rho * jd.blocks[1].rho, Fraction(2)) == 0

    def test_mixed_four_dim(self):
        # companion of (x^2-2)(x^2+1)
        p = sympy.Poly((sympy.Symbol("x") ** 2 - 2) * (sympy.Symbol("x") ** 2 + 1))
        cs = list(reversed(p.all_coeffs()))  # ascending
        d = 4
        A = [[Fraction(0)] * d for _ in range(d)]
        for i in range(1, d):
            A[i][i - 1] = Fraction(1)
        for i in range(d):
            A[i][d - 1] = Fraction(-int(cs[i]))
        jd = self.check_decomposition(A)
        assert len(jd.blocks) == 4
        reals = [b for b in jd.blocks if alg_sign(b.omega) == 0]
        pairs = [b for b in jd.blocks if alg_sign(b.omega) != 0]
        assert len(reals) == 2 and len(pairs) == 2

    def test_quartic_all_complex(self):
        # companion of x^4 + 1: two conjugate pairs at (+-sqrt2/2, sqrt2/2)
        A = [[Fraction(0)] * 4 for _ in range(4)]
        for i in range(1, 4):
            A[i][i - 1] = Fraction(1)
        A[0][3] = Fraction(-1)
        jd = self.check_decomposition(A)
        assert len(jd.blocks) == 4
        assert all(b.size == 1 and b.sign != 0 for b in jd.blocks)
        for b in jd.blocks:
            # rho^2 == 1/2 and omega^2 == 1/2 for every root of x^4+1
            assert alg_compare(b.rho * b.rho, Fraction(1, 2)) == 0
            assert alg_compare(b.omega * b.omega, Fraction(1, 2)) == 0
        # canonical order: negative real part first, negative imaginary first
        signs = [(alg_compare(b.rho, 0), alg_compare(b.omega, 0)) for b in jd.blocks]
        assert signs == [(-1, -1), (-1, 1), (1, -1), (1, 1)]

    def test_entrywise_identities_small(self):
        # direct complex-algebraic matrix identities on a 2x2 fixture
        jd = jordan_decompose(SPIRAL)
        P = jd.P_matrix()
        Pinv = jd.Pinv_matrix()
        J = jd.J_matrix()
        d = 2
        for i in range(d):
            for j in range(d):
                ap = None
                pj = None
                pp = None
                for k in range(d):
                    t1 = P[k][j].scale_rational(jd.A[i][k])
                    ap = t1 if ap is None else ap + t1
                    t2 = P[i][k] * J[k][j]
                    pj = t2 if pj is None else pj + t2
                    t3 = P[i][k] * Pinv[k][j]
                    pp = t3 if pp is None else pp + t3
                diff = ap - pj
                assert alg_sign(diff.re) == 0 and alg_sign(diff.im) == 0
                assert alg_sign(pp.im) == 0
                assert alg_compare(pp.re, Fraction(1 if i == j else 0)) == 0

    def test_block_order_deterministic(self):
        a = jordan_decompose(OSC)
        b = jordan_decompose(OSC)
        assert [blk.size for blk in a.blocks] == [blk.size for blk in b.blocks]
        for x, y in zip(a.blocks, b.blocks):
            assert alg_compare(x.rho, y.rho) == 0
            assert alg_compare(x.omega, y.omega) == 0

    def test_conjugated_random_structures(self):
        rng = random.Random(31)
        for _ in range(5):
            # plant: diag blocks chosen from small companions, conjugate by unimodular
            blocks = rng.sample([
                [[Fraction(2)]],
                [[Fraction(0), Fraction(1)], [Fraction(-1), Fraction(0)]],
                [[Fraction(0), Fraction(2)], [Fraction(1), Fraction(0)]],
                [[Fraction(3), Fraction(1)], [Fraction(0), Fraction(3)]],
            ], k=2)
            d = sum(len(b) for b in blocks)
            B = [[Fraction(0)] * d for _ in range(d)]
            off = 0
            for blk in blocks:
                for i, row in enumerate(blk):
                    for j, v in enumerate(row):
                        B[off + i][off + j] = v
                off += len(blk)
            # random unimodular via integer shears
            M = mat_identity(d)
            for _ in range(6):
                i, j = rng.randrange(d), rng.randrange(d)
                if i == j:
                    continue
                c = Fraction(rng.randint(-2, 2))
                for t in range(d):
                    M[i][t] += c * M[j][t]
            A = mat_mul(mat_mul(M, B), mat_inverse(M))
            jd = self.check_decomposition(A)
            assert sum(b.size for b in jd.blocks) == d


class TestReality:
    def test_conjugate_paired_diag_is_real(self):
        jd = jordan_decompose(OSC)
        # tau on the unit circle, conjugate-paired according to block pairing
        tau = jd.conjugate_paired_diag(Fraction(3, 5), Fraction(4, 5))
        ok, witness = reality_check(jd, tau)
        assert ok and witness is None

    def test_unpaired_diag_is_flagged(self):
        jd = jordan_decompose(OSC)
        tau = jd.conjugate_paired_diag(Fraction(3, 5), Fraction(4, 5))
        # break the pairing: both entries get the same imaginary part
        broken = [(re, im if alg_sign(im) == 1 else -im) for (re, im) in
                  [(t[0], t[1]) for t in tau]]
        ok, witness = reality_check(jd, broken)
        assert not ok and witness is not None

    def test_real_system_real_diag(self):
        jd = jordan_decompose(fr([[1, 0], [0, 2]]))
        tau = [(Fraction(1), Fraction(0)), (Fraction(1), Fraction(0))]
        ok, _ = reality_check(jd, tau)
        assert ok
