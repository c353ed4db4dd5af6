"""Interval arithmetic, scalar bound functions, and the claim verifiers."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ekrcross import bounds
from ekrcross.intervals import RationalInterval, decide, e_enclosure, exp_enclosure
from ekrcross.report import (
    REFUTED,
    SKIPPED,
    VERIFIED,
    VerificationReport,
    anchor_for,
    exit_code,
    report_to_obj,
    reports_to_csv,
    reports_to_json,
)
from ekrcross.setfam import Family, make_threshold_family

rationals = st.fractions(
    min_value=Fraction(-100), max_value=Fraction(100), max_denominator=50
)


class TestIntervals:
    @given(rationals, rationals, rationals, rationals)
    def test_arithmetic_soundness(self, a, b, c, d):
        x = RationalInterval(min(a, b), max(a, b))
        y = RationalInterval(min(c, d), max(c, d))
        for op in ("__add__", "__sub__", "__mul__"):
            combined = getattr(x, op)(y)
            for xx in (x.lo, x.hi):
                for yy in (y.lo, y.hi):
                    assert combined.contains(getattr(xx, op)(yy))

    @given(rationals, rationals)
    def test_power(self, a, b):
        x = RationalInterval(min(a, b), max(a, b))
        sq = x**2
        assert sq.contains(x.lo**2) and sq.contains(x.hi**2)
        assert sq.lo >= 0
        cube = x**3
        assert cube.contains(x.lo**3) and cube.contains(x.hi**3)

    def test_division(self):
        x = RationalInterval(Fraction(1, 3), Fraction(1, 2))
        y = 1 / x
        assert y.lo == 2 and y.hi == 3
        with pytest.raises(ZeroDivisionError):
            1 / RationalInterval(Fraction(-1), Fraction(1))

    def test_ordering_validation(self):
        with pytest.raises(ValueError):
            RationalInterval(Fraction(2), Fraction(1))


class TestExpEnclosure:
    def test_point_values(self):
        assert exp_enclosure(0).lo == exp_enclosure(0).hi == 1

    def test_float_containment(self):
        for x in (Fraction(1), Fraction(17, 8), Fraction(-11, 7), Fraction(5, 2)):
            iv = exp_enclosure(x, 24)
            assert iv.lo <= Fraction(math.exp(x)).limit_denominator(10**12) <= iv.hi \
                or iv.width < Fraction(1, 10**9)
            assert float(iv.lo) <= math.exp(float(x)) * (1 + 1e-12)
            assert float(iv.hi) >= math.exp(float(x)) * (1 - 1e-12)

    def test_nesting_and_width_decay(self):
        for x in (Fraction(1), Fraction(-3, 2), Fraction(9, 4)):
            prev = exp_enclosure(x, 8)
            for order in (12, 24, 48, 64):
                cur = exp_enclosure(x, order)
                assert prev.encloses(cur)
                assert cur.width <= prev.width
                prev = cur

    def test_reciprocal_identity(self):
        x = Fraction(7, 5)
        product = exp_enclosure(x, 24) * exp_enclosure(-x, 24)
        assert product.contains(1)

    def test_decide(self):
        assert decide(lambda o: e_enclosure(o), Fraction(27, 10), ">") is True
        assert decide(lambda o: e_enclosure(o), Fraction(27, 10), "<") is False
        wide = RationalInterval(Fraction(0), Fraction(10))
        assert decide(lambda o: wide, Fraction(5), "<") is None
        with pytest.raises(ValueError):
            decide(lambda o: wide, 1, "<=")


class TestEnvelope:
    def test_formula_components(self):
        # r = 1, i = 0: p/q^2 + (1 - p/q)
        p = Fraction(1, 4)
        q = 1 - p
        assert bounds.envelope(1, 0, p) == p / q**2 + (1 - p / q)

    def test_headline_products(self):
        assert bounds.envelope_low(3, 14) * bounds.envelope_high(1, 14) < Fraction(87, 100)
        assert bounds.envelope_low(2, 14) < Fraction(96, 100)
        f1 = bounds.envelope(13, 2, Fraction(1, 15))
        f2 = bounds.envelope(15, 1, Fraction(1, 15))
        assert f1 * f2 < Fraction(68, 100)
        assert bounds.envelope(14, 2, Fraction(1, 15)) ** 2 < Fraction(46, 100)

    def test_products_are_tight(self):
        # margins are thin: the 0.87 threshold is within 0.3 percent
        val = bounds.envelope_low(3, 14) * bounds.envelope_high(1, 14)
        assert val > Fraction(86, 100)

    def test_verifier_all_green(self):
        for r in bounds.verify_envelope_products():
            assert r.status == VERIFIED, r
        for r in bounds.verify_envelope_monotonicity(range(14, 18), range(0, 6)):
            assert r.status == VERIFIED, r

    def test_domain(self):
        with pytest.raises(ValueError):
            bounds.envelope(0, 1, Fraction(1, 4))
        with pytest.raises(ValueError):
            bounds.envelope(3, 1, Fraction(1, 2))


class TestCaseBounds:
    def test_deep_pair_threshold(self):
        iv = bounds.deep_pair_bound(7, 32)
        assert iv.strictly_below(Fraction(999, 1000))
        assert iv.strictly_above(Fraction(99, 100))   # genuinely close to 1

    def test_low_side_values(self):
        assert bounds.low_side_bound(13) < 1
        assert bounds.low_side_bound(14) < 1
        assert bounds.low_side_bound_relaxed(14, 32).strictly_below(1)

    def test_high_side_value(self):
        assert bounds.high_side_bound(13, 32).strictly_below(Fraction(96, 100))

    def test_shape_suite_green(self):
        for r in bounds.verify_side_bound_shapes(60):
            assert r.status == VERIFIED, r

    def test_prefactors_green(self):
        for r in bounds.verify_prefactors(60):
            assert r.status == VERIFIED, r

    def test_prefactor_margin_is_thin(self):
        # 2p/q^(2t+1) at t = 14 sits barely below 1: exactness matters
        t = 14
        p = Fraction(1, t + 1)
        val = 2 * p / (1 - p) ** (2 * t + 1)
        assert Fraction(98, 100) < val < 1

    def test_extremal_gap_values(self):
        assert bounds.extremal_gap(8, 1, 32).strictly_above(Fraction(12, 10))
        statuses = {r.claim_id: r.status for r in bounds.verify_extremal_gap(40, 6)}
        assert statuses["extremal-gap-f81"] == VERIFIED
        assert statuses["extremal-gap-grid"] == VERIFIED
        assert statuses["extremal-gap-boundary"] == SKIPPED
        assert statuses["extremal-gap-ratio-chain"] == VERIFIED


class TestUniformEnvelope:
    def test_cap_constants(self):
        assert bounds.uniform_envelope_cap(14, 14, 2) == Fraction(153, 225)
        assert bounds.uniform_envelope_cap(14, 28, 2) == Fraction(496, 225)
        assert bounds.uniform_envelope_cap(14, 28, 2) < Fraction(221, 100)
        assert bounds.uniform_envelope_cap(14, 16, 1) == Fraction(6, 5)

    def test_bounds_are_binomial_ratios(self):
        n, k, t = 240, 16, 14
        a1, a2, b1, b2 = bounds.uniform_envelope_bounds(n, k, t, 13, 15, 2, 1)
        assert a1 == Fraction(math.comb(n, k - 14), math.comb(n - 13, k - 13))
        assert a2 == Fraction(
            math.comb(17, 2) * math.comb(n - 17, k - 15), math.comb(n - 13, k - 13)
        )
        # the parameter-free caps really do cap the exact ratios
        assert a2 < bounds.uniform_envelope_cap(t, 13, 2)
        assert b2 < bounds.uniform_envelope_cap(t, 15, 1)

    def test_inconsistent_parameters(self):
        with pytest.raises(ValueError):
            bounds.uniform_envelope_bounds(240, 16, 14, 13, 16, 2, 1)  # u+v != 2t
        with pytest.raises(ValueError):
            bounds.uniform_envelope_bounds(240, 15, 14, 13, 15, 2, 1)  # k < t+s

    def test_cap_verifier(self):
        statuses = {r.claim_id: r.status for r in bounds.verify_uniform_envelope_caps()}
        assert all(s == VERIFIED for s in statuses.values()), statuses
        # the decoupled reading exceeds 0.89 but stays below 1
        combo = Fraction(38, 1000) + Fraction(195, 1000) * Fraction(6, 5) \
            + Fraction(68, 100) * Fraction(224, 1000) + Fraction(47, 100)
        assert Fraction(89, 100) < combo < 1

    def test_uniform_side_bounds_green(self):
        for r in bounds.verify_uniform_side_bounds(40):
            assert r.status == VERIFIED, r
        assert bounds.uniform_high_side_exact(14) < 1
        assert bounds.uniform_high_side_exact(15) < 1
        # the relaxed form is genuinely too weak at t = 14
        assert bounds.uniform_high_side_relaxed(14, 32).strictly_above(1)


class TestFiniteSweep:
    def test_threshold_floor(self):
        assert math.floor(bounds.low_side_threshold(14)) == 1023
        r = bounds.verify_threshold_floor(14)
        assert r.status == VERIFIED and r.lhs == 1023

    def test_thresholds_decrease(self):
        floors = [math.floor(bounds.low_side_threshold(t)) for t in range(14, 19)]
        assert floors == sorted(floors, reverse=True)

    def test_single_k_slice(self):
        chunk = bounds.finite_sweep_chunk(14, [20])
        assert chunk["failures"] == []
        assert chunk["cells"] == 1023 - 15 * 20 + 1

    def test_merge(self):
        c1 = bounds.finite_sweep_chunk(14, [14])
        c2 = bounds.finite_sweep_chunk(14, [15])
        merged = bounds.merge_finite_chunks([c1, c2])
        assert merged["cells"] == c1["cells"] + c2["cells"]
        both = bounds.finite_sweep_chunk(14, [14, 15])
        assert (merged["max_num"], merged["max_den"]) == (
            both["max_num"],
            both["max_den"],
        )

    def test_t_range_guard(self):
        with pytest.raises(ValueError):
            bounds.verify_low_side_finite(13)

    def test_full_t18(self):
        r = bounds.verify_low_side_finite(18)
        assert r.status == VERIFIED
        assert r.witness["cells"] == 60


class TestStability:
    def test_unit_at_critical_p(self):
        t = 14
        val = bounds.stability_ratio(t, Fraction(1, t + 1))
        assert val == 1

    def test_increasing_samples(self):
        t = 14
        a = bounds.stability_ratio(t, Fraction(1, 30))
        b = bounds.stability_ratio(t, Fraction(1, 20))
        c = bounds.stability_ratio(t, Fraction(1, 15))
        assert a < b < c == 1

    def test_uniform_ratio_from_binomials(self):
        # ratio counts checked against direct construction at small scale
        n, k, t = 10, 4, 2
        from ekrcross.setfam import make_threshold_family_uniform

        f0 = make_threshold_family_uniform(n, k, t, 0)
        f1 = make_threshold_family_uniform(n, k, t, 1)
        assert bounds.uniform_size_ratio(n, k, t) == Fraction(len(f1), len(f0))

    def test_verifier(self):
        for r in bounds.verify_stability(14, 225, 15):
            assert r.status == VERIFIED, r

    def test_case_params_validation(self):
        with pytest.raises(ValueError):
            bounds.CaseParams(t=14, u=13, v=16)
        with pytest.raises(ValueError):
            bounds.CaseParams(t=14, u=13, v=15, s=1, s_prime=1)
        bounds.CaseParams(t=14, u=13, v=15, s=2, s_prime=1)


class TestDecomposition:
    def test_identical_families(self):
        ref = make_threshold_family(5, 2, 0)
        stats = bounds.decomposition_check(ref, ref, ref, Fraction(1, 4))
        assert stats.a1 == stats.b1 == 0
        assert stats.xi_a == stats.xi_b == 0
        assert stats.geometric_mean_within()
        assert stats.a0 * stats.b0 == stats.f ** 2

    def test_one_member_removed(self):
        n, t, p = 6, 2, Fraction(1, 4)
        ref = make_threshold_family(n, t, 0)
        a = Family(n, ref.masks[1:], None)
        stats = bounds.decomposition_check(a, ref, ref, p)
        assert stats.f == stats.a0 + stats.fa
        assert stats.a == stats.a0 + stats.af
        assert stats.a1 == stats.af + stats.fa
        assert stats.af == 0 and stats.fa > 0
        assert stats.geometric_mean_within()
        assert stats.a0 * stats.b0 < stats.f ** 2

    def test_uniform_counting_mode(self):
        from ekrcross.setfam import make_threshold_family_uniform

        ref = make_threshold_family_uniform(7, 3, 1, 0)
        a = Family(7, ref.masks[2:], 3)
        b = Family(7, ref.masks[:-1], 3)
        stats = bounds.decomposition_check(a, b, ref)
        assert isinstance(stats.f, int)
        assert stats.fa == 2 and stats.fb == 1
        assert stats.geometric_mean_within()

    @given(
        st.fractions(min_value=0, max_value=1, max_denominator=40),
        st.fractions(min_value=0, max_value=1, max_denominator=40),
    )
    def test_am_gm_share_inequality(self, xa, xb):
        # (1 - xa)(1 - xb) <= (1 - (xa+xb)/2)^2
        lhs = (1 - xa) * (1 - xb)
        rhs = (1 - (xa + xb) / 2) ** 2
        assert lhs <= rhs


class TestReports:
    def test_refuted_needs_witness(self):
        with pytest.raises(ValueError):
            VerificationReport("x", REFUTED)
        VerificationReport("x", REFUTED, witness={"t": 1})

    def test_anchor_lookup(self):
        assert "n0(t)" in anchor_for("finite-sweep[t=14]")

    def test_serialization(self):
        reports = [
            VerificationReport("finite-sweep[t=14]", VERIFIED, lhs=Fraction(1, 3)),
            VerificationReport("x", SKIPPED, rhs=RationalInterval(Fraction(0), Fraction(1))),
        ]
        obj = report_to_obj(reports[0])
        assert obj["lhs"] == "1/3"
        text = reports_to_json(reports)
        assert '"claim_id": "finite-sweep[t=14]"' in text
        csv_text = reports_to_csv(reports)
        assert csv_text.splitlines()[0] == "claim_id,status,elapsed_ms"

    def test_exit_codes(self):
        ok = [VerificationReport("a", VERIFIED)]
        assert exit_code(ok) == 0
        assert exit_code(ok + [VerificationReport("b", "inconclusive")]) == 2
        assert exit_code(ok + [VerificationReport("c", REFUTED, witness={})]) == 1


class TestFullSuite:
    def test_run_bounds_suite_green_and_fast(self):
        import time

        t0 = time.perf_counter()
        reports = bounds.run_bounds_suite(100)
        elapsed = time.perf_counter() - t0
        bad = [r for r in reports if r.status not in (VERIFIED, SKIPPED)]
        assert not bad, bad
        assert elapsed < 5.0
        assert len(reports) > 30
