"""Independent-validation layer: rigorous orbit enclosures, sampled
invariance/disjointness checks, and full certificate validation with
mutation robustness."""

import dataclasses
from fractions import Fraction

import pytest

from orbitcert.checker import (
    ValidationReport,
    check_disjoint_sampled,
    check_invariance_sampled,
    orbit_enclosure,
    validate_certificate,
)
from orbitcert.errors import NoCertificate
from orbitcert.semialg import And, Atom, Not, Or, Poly, Quant
from orbitcert.synthesis import build_cone_spec, synthesize_fat_cone

F = Fraction

SPIRAL = [[-1, 1], [-1, -1]]
OSC = [[0, 1], [-1, 0]]
DEFECTIVE = [[2, 1], [0, 2]]
ROT1_ROTSQ2 = [[0, 1, 0, 0], [-1, 0, 0, 0],
               [0, 0, 0, 1], [0, 0, -2, 0]]

X1 = Poly.variable("x1")
X2 = Poly.variable("x2")
X3 = Poly.variable("x3")
X4 = Poly.variable("x4")


def norm_sq(*vs):
    total = Poly.zero()
    for v in vs:
        total = total + v * v
    return total


# frozen independent high-precision values (45 significant digits)
COS_157 = F("0.000796326710733325485408533645354185880175393971")
NEG_SIN_157 = F("-0.999999682931834620210529923823327000194912885")
EULER_E = F("2.71828182845904523536028747135266249775724709")
EXP_NEG1 = F("0.367879441171442321595523770161460867445811131")


def contains(iv, value: Fraction) -> bool:
    return iv.lo <= value <= iv.hi


# ---------------------------------------------------------------------------
# orbit enclosures


class TestOrbitEnclosure:
    def test_time_zero_is_tight(self):
        vec = orbit_enclosure(OSC, (1, 0), F(0), 64)
        assert contains(vec[0], F(1)) and contains(vec[1], F(0))
        assert vec[0].width() <= F(1, 2**60)
        assert vec[1].width() <= F(1, 2**60)

    def test_near_quarter_turn_matches_oracle(self):
        vec = orbit_enclosure(OSC, (1, 0), F(157, 100), 80)
        assert contains(vec[0], COS_157)
        assert contains(vec[1], NEG_SIN_157)
        assert vec[0].width() <= F(1, 10**20)

    def test_euler_constant_at_hundred_bits(self):
        vec = orbit_enclosure([[1]], (1,), F(1), 100)
        assert contains(vec[0], EULER_E)
        assert vec[0].width() <= F(1, 10**25)

    def test_width_bound_tracks_precision(self):
        for bits in (60, 61, 62, 70):
            vec = orbit_enclosure(SPIRAL, (1, 0), F(1, 2), bits)
            for iv in vec:
                scale = max(F(1), abs(iv.lo), abs(iv.hi))
                assert iv.width() <= F(2, 2**bits) * scale

    def test_monotone_in_precision(self):
        wide = orbit_enclosure(OSC, (1, 0), F(1, 3), 50)
        tight = orbit_enclosure(OSC, (1, 0), F(1, 3), 90)
        for a, b in zip(wide, tight):
            assert b.width() <= a.width()
            assert a.lo <= b.lo and b.hi <= a.hi

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            orbit_enclosure(OSC, (1, 0), F(-1), 64)


# ---------------------------------------------------------------------------
# sampled invariance of explicit sets


class TestInvarianceSampled:
    def test_nonnegative_halfplane_is_invariant(self):
        report = check_invariance_sampled(
            Atom.make(X1, "ge"), [[-1]],
            samples=[(F(0),), (F(1),), (F(3, 2),)],
            deltas=[F(0), F(1), F(2)])
        assert report.overall == "pass"
        assert all(c.verdict == "pass" for c in report.checks)

    def test_shifted_halfplane_fails_with_witness(self):
        report = check_invariance_sampled(
            Atom.make(X1 - Poly.constant(1), "ge"), [[-1]],
            samples=[(F(1),)], deltas=[F(1)])
        assert report.overall == "fail"
        failing = [c for c in report.checks if c.verdict == "fail"]
        assert failing and "delta=1" in failing[0].evidence

    def test_circle_equality_is_boundary_ambiguous(self):
        # the circle really is invariant under rotation, but equality at an
        # irrational point can never be certified: unknown, never pass
        report = check_invariance_sampled(
            Atom.make(norm_sq(X1, X2) - Poly.constant(1), "eq"), OSC,
            samples=[(F(1), F(0))], deltas=[F(1)])
        assert report.overall == "unknown"
        assert all(c.verdict != "fail" for c in report.checks)

    def test_points_outside_the_set_are_skipped(self):
        report = check_invariance_sampled(
            Atom.make(X1 - Poly.constant(1), "ge"), [[-1]],
            samples=[(F(-5),)], deltas=[F(1)])
        assert report.overall == "pass"
        assert any("skipped" in c.evidence for c in report.checks)


# ---------------------------------------------------------------------------
# sampled disjointness


class TestDisjointSampled:
    def test_identical_sets_fail(self):
        half = Atom.make(X1, "ge")
        report = check_disjoint_sampled(half, half, samples=[(F(1),)])
        assert report.overall == "fail"

    def test_separated_boxes_pass(self):
        box_a = And((Atom.make(X1, "ge"),
                     Atom.make(Poly.constant(1) - X1, "ge")))
        box_b = And((Atom.make(X1 - Poly.constant(2), "ge"),
                     Atom.make(Poly.constant(3) - X1, "ge")))
        report = check_disjoint_sampled(
            box_a, box_b,
            samples=[(F(0),), (F(1, 2),), (F(1),), (F(2),), (F(5, 2),)])
        assert report.overall == "pass"

    def test_overlap_witness_is_reported(self):
        a = Atom.make(X1, "ge")
        b = Atom.make(X1 - Poly.constant(1), "ge")
        report = check_disjoint_sampled(a, b, samples=[(F(2),)])
        assert report.overall == "fail"
        assert any("(2" in c.evidence for c in report.checks
                   if c.verdict == "fail")


# ---------------------------------------------------------------------------
# full certificate validation


def spiral_cert():
    cone = build_cone_spec(SPIRAL, (1, 0))
    Y = Atom.make(norm_sq(X1, X2) - Poly.constant(4), "ge")
    return synthesize_fat_cone(cone, Y), Y


def osc_cert():
    cone = build_cone_spec(OSC, (1, 0))
    Y = Atom.make(X1 - Poly.constant(2), "ge")
    return synthesize_fat_cone(cone, Y), Y


class TestValidateCertificate:
    def test_spiral_certificate_passes(self):
        cert, Y = spiral_cert()
        report = validate_certificate(cert, SPIRAL, (1, 0), Y,
                                      invariance_samples=64,
                                      disjoint_samples=64)
        assert report.overall == "pass"
        names = {c.name for c in report.checks}
        assert "invariance-samples" in names
        assert "disjoint-samples" in names
        assert "start-threshold" in names

    def test_oscillator_certificate_passes(self):
        cert, Y = osc_cert()
        report = validate_certificate(cert, OSC, (1, 0), Y,
                                      invariance_samples=64,
                                      disjoint_samples=64)
        assert report.overall == "pass"

    def test_irrational_frequency_certificate_has_no_failures(self):
        cone = build_cone_spec(ROT1_ROTSQ2, (1, 0, 1, 0))
        Y = Atom.make(norm_sq(X1, X2, X3, X4) - Poly.constant(9), "ge")
        cert = synthesize_fat_cone(cone, Y)
        report = validate_certificate(cert, ROT1_ROTSQ2, (1, 0, 1, 0), Y,
                                      invariance_samples=32,
                                      disjoint_samples=32)
        assert all(c.verdict != "fail" for c in report.checks)

    def test_report_is_deterministic(self):
        cert, Y = spiral_cert()
        a = validate_certificate(cert, SPIRAL, (1, 0), Y,
                                 invariance_samples=32, disjoint_samples=32)
        b = validate_certificate(cert, SPIRAL, (1, 0), Y,
                                 invariance_samples=32, disjoint_samples=32)
        assert a == b
        assert a.to_text() == b.to_text()

    def test_report_text_has_one_line_per_check(self):
        cert, Y = spiral_cert()
        report = validate_certificate(cert, SPIRAL, (1, 0), Y,
                                      invariance_samples=16,
                                      disjoint_samples=16)
        lines = [ln for ln in report.to_text().splitlines() if ln.strip()]
        assert len(lines) == len(report.checks) + 1   # header with overall
        assert lines[0].startswith("overall:")


def _drop_first_atom(phi: Quant) -> Quant:
    body = phi.body
    assert isinstance(body, And)
    return Quant(phi.kind, phi.bindings, And(body.args[1:]))


def _scale_last_atom(phi: Quant) -> Quant:
    body = phi.body
    assert isinstance(body, And)
    last = body.args[-1]
    assert isinstance(last, Atom)
    mutated = Atom.make(last.poly + Poly.constant(F(1, 7)), last.rel)
    return Quant(phi.kind, phi.bindings, And(body.args[:-1] + (mutated,)))


class TestMutatedCertificatesFail:
    def mutations(self, cert):
        lat = cert.rho_relations
        scaled_basis = tuple(tuple(2 * z for z in row) for row in lat.basis)
        return [
            dataclasses.replace(cert, eps=cert.eps * 2),
            dataclasses.replace(cert, eps=cert.eps / 3),
            dataclasses.replace(cert, u=(cert.u[0] - 1,) + cert.u[1:]),
            dataclasses.replace(cert, ell=(cert.ell[0] + 1,) + cert.ell[1:]),
            dataclasses.replace(cert, s1=cert.s1 / 2),
            dataclasses.replace(cert, s1=cert.s1 * 3),
            dataclasses.replace(cert, s0=F(1)),
            dataclasses.replace(cert, delta=cert.delta * 4),
            dataclasses.replace(cert, formula=_drop_first_atom(cert.formula)),
            dataclasses.replace(cert, formula=_scale_last_atom(cert.formula)),
            dataclasses.replace(
                cert, rho_relations=dataclasses.replace(lat,
                                                        basis=scaled_basis)),
        ]

    def test_all_mutations_fail(self):
        cert, Y = spiral_cert()
        muts = self.mutations(cert)
        assert len(muts) >= 10
        for i, bad in enumerate(muts):
            report = validate_certificate(bad, SPIRAL, (1, 0), Y,
                                          invariance_samples=8,
                                          disjoint_samples=8)
            assert report.overall == "fail", f"mutation {i} not rejected"


# ---------------------------------------------------------------------------
# report aggregation rules


class TestReportShape:
    def test_overall_aggregation(self):
        from orbitcert.checker import CheckResult
        p = CheckResult("a", "pass", "")
        u = CheckResult("b", "unknown", "")
        f = CheckResult("c", "fail", "")
        assert ValidationReport((p, p)).overall == "pass"
        assert ValidationReport((p, u)).overall == "unknown"
        assert ValidationReport((p, u, f)).overall == "fail"
        assert ValidationReport(()).overall == "pass"
