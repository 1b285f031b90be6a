"""Betti numbers, trace bounds, Euler traces, and chain diagnostics.

Oracles used here and nowhere else in the library:

* exact kernel dimensions from Fraction-arithmetic Gaussian elimination;
* covering-space Euler counts (a degree-d cover of a wedge of two
  circles has first Betti number d + 1, a degree-d cover of the genus-2
  surface has 2 + 2d);
* closed-walk counts on the 4-regular tree from a distance-profile
  recursion, which give the free-group trace of adjacency powers.
"""

import math
from fractions import Fraction

import pytest

from conftest import exact_kernel_dim, tree_walk_counts

from coholap import (
    BetaRef,
    GapClaim,
    IncompleteComplexError,
    MalformedInputError,
    Presentation,
    Representation,
    TraceBackendError,
    Word,
    betti_finite_quotient,
    betti_report,
    box_obstruction_report,
    build_complex,
    build_laplacian,
    cyclic_group_complex,
    cyclic_presentation,
    euler_class_trace,
    evaluate,
    free_group_complex,
    ghost_diagnostic,
    higher_kazhdan_projection,
    l2_betti_upper_bounds,
    lambda_ring_membership,
    luck_approximation,
    quotient_chain,
    surface_genus2_complex,
    todd_coxeter,
)


def torus_complex():
    return build_complex(
        Presentation(("a", "b"), (Word((1, 2, -1, -2)),)), aspherical=True)


def regular_rep(presentation, extra):
    return Representation.from_coset_table(todd_coxeter(presentation, extra))


def square_quotient_words(m):
    return [f"a^{m}", f"b^{m}", "a*b*a^-1*b^-1"]


def chain_of_squares(presentation, orders, **kwargs):
    kwargs.setdefault("warn", False)
    return quotient_chain(
        presentation, [square_quotient_words(m) for m in orders], **kwargs)


class TestBettiNumbers:
    @pytest.mark.parametrize("m", [2, 3])
    def test_free_cover_rank(self, m):
        # index-d subgroups of a rank-2 free group are free of rank d + 1
        spec = free_group_complex(2)
        rep = regular_rep(spec.presentation, square_quotient_words(m))
        assert betti_finite_quotient(spec, 1, rep) == m * m + 1

    @pytest.mark.parametrize("m", [2, 3])
    def test_torus_cover_betti(self, m):
        spec = torus_complex()
        rep = regular_rep(spec.presentation, square_quotient_words(m))
        assert betti_finite_quotient(spec, 0, rep) == 1
        assert betti_finite_quotient(spec, 1, rep) == 2
        assert betti_finite_quotient(spec, 2, rep) == 1

    def test_genus2_cover_betti(self):
        spec = surface_genus2_complex()
        squares = [f"{x}^2" for x in "abcd"]
        commutators = [f"{x}*{y}*{x}^-1*{y}^-1"
                       for i, x in enumerate("abcd")
                       for y in "abcd"[i + 1:]]
        rep = regular_rep(spec.presentation, squares + commutators)
        assert rep.dimension == 16
        # a degree-16 cover of the genus-2 surface has genus 17
        assert betti_finite_quotient(spec, 0, rep) == 1
        assert betti_finite_quotient(spec, 1, rep) == 34
        assert betti_finite_quotient(spec, 2, rep) == 1

    def test_matches_exact_kernel_dimension(self):
        cases = [
            (torus_complex(), 1, square_quotient_words(2)),
            (torus_complex(), 2, square_quotient_words(3)),
            (free_group_complex(2), 1, square_quotient_words(2)),
            (cyclic_group_complex(4), 1, []),
            (cyclic_group_complex(5), 2, []),
        ]
        for spec, degree, extra in cases:
            rep = regular_rep(spec.presentation, extra)
            op = evaluate(build_laplacian(spec, degree).laplacian, rep)
            oracle = exact_kernel_dim(op.exact_matrix)
            assert betti_finite_quotient(spec, degree, rep) == oracle

    def test_report_carries_resolved_gap(self):
        spec = torus_complex()
        rep = regular_rep(spec.presentation, square_quotient_words(2))
        kernel_dim, report = betti_report(spec, 1, rep)
        assert kernel_dim == 2
        assert report.resolved
        assert report.gap > 0


class TestKazhdanProjections:
    def test_torus_degree_one_traces(self):
        spec = torus_complex()
        rep = regular_rep(spec.presentation, square_quotient_words(2))
        bundle = higher_kazhdan_projection(spec, 1, rep)
        trace, trace_plus, trace_minus = bundle.traces()
        # Hodge counts: dim ker d_1 = 5, dim ker d_0* = 5, overlap 2
        assert abs(trace - 2.0) < 1e-8
        assert abs(trace_plus - 5.0) < 1e-8
        assert abs(trace_minus - 5.0) < 1e-8
        assert bundle.product_defect < 1e-8

    def test_degree_zero_entry_profile(self):
        spec = torus_complex()
        for m, expected in ((2, 0.25), (4, 0.0625)):
            rep = regular_rep(spec.presentation, square_quotient_words(m))
            bundle = higher_kazhdan_projection(spec, 0, rep)
            assert abs(bundle.projection.max_abs_entry() - expected) < 1e-9
            assert abs(bundle.projection.trace() - 1.0) < 1e-9

    def test_heat_method_agrees_with_eigen(self):
        spec = torus_complex()
        rep = regular_rep(spec.presentation, square_quotient_words(2))
        eigen = higher_kazhdan_projection(spec, 1, rep, method="eigen")
        heat = higher_kazhdan_projection(spec, 1, rep, method="heat")
        assert eigen.projection.distance(heat.projection) < 1e-6
        assert eigen.plus.distance(heat.plus) < 1e-6
        assert eigen.minus.distance(heat.minus) < 1e-6

    def test_unknown_method_rejected(self):
        spec = torus_complex()
        rep = regular_rep(spec.presentation, square_quotient_words(2))
        with pytest.raises(MalformedInputError):
            higher_kazhdan_projection(spec, 1, rep, method="newton")


class TestLuckApproximation:
    def test_free_group_ratios(self):
        spec = free_group_complex(2)
        chain = chain_of_squares(spec.presentation, [2, 3])
        report = luck_approximation(spec, 1, chain)
        assert report.ratios == (Fraction(5, 4), Fraction(10, 9))
        assert report.tail_estimates == (Fraction(5, 36),)
        # Betti growth is exactly affine in the index, so the slope
        # recovers the limiting normalized value
        assert report.extrapolated == Fraction(1)

    def test_torus_ratios_vanish(self):
        spec = torus_complex()
        chain = chain_of_squares(spec.presentation, [2, 4])
        report = luck_approximation(spec, 1, chain)
        assert report.ratios == (Fraction(1, 2), Fraction(1, 8))
        assert report.extrapolated == Fraction(0)

    def test_single_stage(self):
        spec = torus_complex()
        chain = chain_of_squares(spec.presentation, [2])
        report = luck_approximation(spec, 1, chain)
        assert report.extrapolated == Fraction(1, 2)
        assert report.tail_estimates == ()
        assert "single stage" in report.extrapolation_note

    def test_records_fields(self):
        spec = free_group_complex(2)
        chain = chain_of_squares(spec.presentation, [2, 3])
        report = luck_approximation(spec, 1, chain)
        first = report.records[0]
        assert (first.position, first.quotient_order, first.betti) == (0, 4, 5)
        assert first.gap > 0


class TestUpperBounds:
    def test_free_rank2_degree1_first_values(self):
        spec = free_group_complex(2)
        report = l2_betti_upper_bounds(spec, 1, m_max=2)
        assert report.backend == "free-ring"
        assert report.norm_bound == 8
        assert report.values[0] == Fraction(3, 2)
        assert report.values[1] == Fraction(21, 16)

    def test_free_rank2_degree1_tree_walk_oracle(self):
        m_max = 8
        spec = free_group_complex(2)
        report = l2_betti_upper_bounds(spec, 1, m_max=m_max)
        walks = tree_walk_counts(4, m_max)
        # tau((d0* d0)^j) expands through tau(A^i) = closed tree walks
        traces = [
            sum(math.comb(j, i) * 4 ** (j - i) * (-1) ** i * walks[i]
                for i in range(j + 1))
            for j in range(m_max + 1)]
        for m in range(1, m_max + 1):
            expected = Fraction(2) + sum(
                (math.comb(m, j) * Fraction(-1) ** j
                 * Fraction(traces[j], 8 ** j) for j in range(1, m + 1)),
                Fraction(0))
            assert report.values[m - 1] == expected

    def test_free_rank2_degree0_frozen_values(self):
        spec = free_group_complex(2)
        report = l2_betti_upper_bounds(spec, 0, m_max=4)
        assert report.norm_bound == 16
        assert report.values == (Fraction(1, 2), Fraction(5, 16),
                                 Fraction(7, 32), Fraction(167, 1024))

    def test_free_rank2_degree0_tree_walk_oracle(self):
        spec = free_group_complex(2)
        report = l2_betti_upper_bounds(spec, 0, m_max=6)
        walks = tree_walk_counts(4, 6)
        for m in range(1, 7):
            # I - Delta_0/16 = (4 + A)/8 with A the adjacency element
            numerator = sum(
                math.comb(m, i) * 4 ** (m - i) * walks[i]
                for i in range(m + 1))
            assert report.values[m - 1] == Fraction(numerator, 8 ** m)

    def test_values_nonincreasing_and_above_limit(self):
        spec = free_group_complex(2)
        report = l2_betti_upper_bounds(spec, 1, m_max=10)
        for earlier, later in zip(report.values, report.values[1:]):
            assert later <= earlier
        # the limiting normalized kernel dimension in degree one is 1
        assert all(u >= 1 for u in report.values)

    def test_finite_backend_cyclic5(self):
        spec = cyclic_group_complex(5)
        report = l2_betti_upper_bounds(spec, 0, m_max=16)
        assert report.backend == "finite-regular"
        assert not report.cutoff
        # spectrum {0, 6 +- ..., ...} inside [0, 8]; kernel is the
        # constants, so u_m -> 1/5 geometrically
        assert abs(float(report.values[-1]) - 0.2) < 1e-3
        oracle = [
            sum((1 - lam / 8) ** m
                for lam in (2 * (2 - 2 * math.cos(2 * math.pi * j / 5))
                            for j in range(5))) / 5
            for m in range(1, 17)]
        for value, want in zip(report.values, oracle):
            assert abs(float(value) - want) < 1e-12

    def test_cutoff_flag(self):
        spec = free_group_complex(2)
        report = l2_betti_upper_bounds(spec, 1, m_max=12, term_budget=50)
        assert report.cutoff
        assert len(report.values) < 12

    def test_norm_bound_validation(self):
        spec = free_group_complex(2)
        with pytest.raises(MalformedInputError):
            l2_betti_upper_bounds(spec, 1, m_max=2, norm_bound=Fraction(7))
        relaxed = l2_betti_upper_bounds(spec, 1, m_max=3,
                                        norm_bound=Fraction(16))
        assert relaxed.norm_bound == 16
        assert all(u >= 1 for u in relaxed.values)

    def test_m_max_validation(self):
        with pytest.raises(MalformedInputError):
            l2_betti_upper_bounds(free_group_complex(2), 1, m_max=0)

    def test_gap_hint_lower_bounds(self):
        spec = cyclic_group_complex(3)
        report = l2_betti_upper_bounds(spec, 0, m_max=8, gap_hint=6.0)
        assert report.lower_bounds is not None
        assert len(report.lower_bounds) == len(report.values)
        for low, high in zip(report.lower_bounds, report.values):
            assert low <= float(high) + 1e-12
        # cell count 1, spectrum {0, 6, 6}, R = 8: the sandwich pins
        # the kernel fraction 1/3 between the bounds
        assert report.lower_bounds[-1] <= 1 / 3 <= float(report.values[-1])

    def test_gap_hint_validation(self):
        spec = cyclic_group_complex(3)
        with pytest.raises(MalformedInputError):
            l2_betti_upper_bounds(spec, 0, m_max=2, gap_hint=9.0)
        with pytest.raises(MalformedInputError):
            l2_betti_upper_bounds(spec, 0, m_max=2, gap_hint=0.0)

    def test_no_backend_for_infinite_presented_group(self):
        with pytest.raises(TraceBackendError):
            l2_betti_upper_bounds(torus_complex(), 1, m_max=2,
                                  max_cosets=500)


class TestLambdaRingMembership:
    def test_exhaustive_small_denominators(self):
        orders = [4, 6]
        clearing = (4 * 6) ** 20
        for denominator in range(1, 101):
            value = Fraction(1, denominator)
            oracle = (value * clearing).denominator == 1
            assert lambda_ring_membership(value, orders) == oracle

    def test_torsion_free_accepts_integers_only(self):
        assert lambda_ring_membership(Fraction(3), [])
        assert lambda_ring_membership(Fraction(-7), [])
        assert not lambda_ring_membership(Fraction(1, 2), [])

    def test_numerator_is_irrelevant(self):
        assert lambda_ring_membership(Fraction(7, 10), [10])
        assert not lambda_ring_membership(Fraction(7, 10), [5])

    def test_order_validation(self):
        with pytest.raises(MalformedInputError):
            lambda_ring_membership(Fraction(1, 2), [0])


class TestEulerTrace:
    def test_torus_chain(self):
        spec = torus_complex()
        chain = chain_of_squares(spec.presentation, [2, 4])
        report = euler_class_trace(spec, chain)
        assert report.euler_characteristic == 0
        assert report.all_match
        for record in report.records:
            assert record.kernel_dims == (1, 2, 1)
            assert record.euler_trace == 0

    def test_genus2_single_stage(self):
        spec = surface_genus2_complex()
        squares = [f"{x}^2" for x in "abcd"]
        commutators = [f"{x}*{y}*{x}^-1*{y}^-1"
                       for i, x in enumerate("abcd")
                       for y in "abcd"[i + 1:]]
        chain = quotient_chain(spec.presentation, [squares + commutators],
                               ball_radius=1, warn=False)
        report = euler_class_trace(spec, chain)
        assert report.euler_characteristic == -2
        assert report.records[0].kernel_dims == (1, 34, 1)
        assert report.records[0].euler_trace == Fraction(-2)
        assert report.all_match

    def test_truncated_complex_rejected(self):
        spec = cyclic_group_complex(3)
        chain = quotient_chain(spec.presentation, [["a^3"]],
                               ball_radius=1, warn=False)
        with pytest.raises(IncompleteComplexError):
            euler_class_trace(spec, chain)


class TestObstructionReport:
    def chain_f2(self):
        spec = free_group_complex(2)
        return spec, chain_of_squares(spec.presentation, [2, 3])

    def cyclic8_chain(self):
        spec = cyclic_group_complex(8)
        chain = quotient_chain(spec.presentation,
                               [["a^2"], ["a^4"], ["a^8"]],
                               ball_radius=1, warn=False)
        return spec, chain

    def test_persistent_discrepancy(self):
        spec, chain = self.chain_f2()
        ref = BetaRef(Fraction(1), "user-cited", citation="limit value 1")
        report = box_obstruction_report(spec, 1, chain, ref)
        assert [r.d_star_value for r in report.records] == [5, 10]
        assert [r.lifted_value for r in report.records] == [4, 9]
        assert [r.discrepancy for r in report.records] == [1, 1]
        assert report.verdict == "persistent-discrepancy"
        assert not report.uniform_gap_certified

    def test_eventually_equal(self):
        spec, chain = self.cyclic8_chain()
        ref = BetaRef(Fraction(0), "user-cited")
        report = box_obstruction_report(spec, 1, chain, ref)
        assert all(r.d_star_value == 0 for r in report.records)
        assert report.verdict == "eventually-equal"

    def test_inconclusive_mixed_tail(self):
        spec, chain = self.cyclic8_chain()
        ref = BetaRef(Fraction(1, 8), "user-cited")
        report = box_obstruction_report(spec, 0, chain, ref)
        assert [r.discrepancy for r in report.records] == [
            Fraction(3, 4), Fraction(1, 2), Fraction(0)]
        assert report.verdict == "inconclusive"

    def test_extrapolated_reference_downgrades(self):
        spec, chain = self.chain_f2()
        fractional = BetaRef(Fraction(1, 7), "luck-extrapolated")
        report = box_obstruction_report(spec, 1, chain, fractional)
        # discrepancies 31/7 and 61/7 are nonzero but not integral, so an
        # extrapolated reference cannot support the strong verdict
        assert report.verdict == "inconclusive"
        cited = BetaRef(Fraction(1, 7), "user-cited")
        assert box_obstruction_report(
            spec, 1, chain, cited).verdict == "persistent-discrepancy"

    def test_extrapolated_integral_discrepancy_keeps_verdict(self):
        spec, chain = self.chain_f2()
        ref = BetaRef(Fraction(1), "luck-extrapolated")
        report = box_obstruction_report(spec, 1, chain, ref)
        assert report.verdict == "persistent-discrepancy"

    def test_single_stage_inconclusive(self):
        spec = free_group_complex(2)
        chain = chain_of_squares(spec.presentation, [2])
        ref = BetaRef(Fraction(1), "user-cited")
        report = box_obstruction_report(spec, 1, chain, ref)
        assert report.verdict == "inconclusive"

    def test_provenance_validated(self):
        with pytest.raises(MalformedInputError):
            BetaRef(Fraction(1), "guessed")

    def test_verified_claim_certifies_uniform_gap(self):
        spec, chain = self.chain_f2()
        ref = BetaRef(Fraction(1), "user-cited")
        claim = GapClaim(label="sos", kind="spectral-gap",
                         epsilon=Fraction(1, 2), scope="quotients",
                         verified=True,
                         polynomial_form=(Fraction(1), Fraction(-1, 2)))
        report = box_obstruction_report(spec, 1, chain, ref, gap_claim=claim)
        assert report.uniform_gap_certified
        assert report.certified_epsilon == 0.5
        unverified = GapClaim(label="sos", kind="spectral-gap",
                              epsilon=Fraction(1, 2), scope="quotients",
                              verified=False,
                              polynomial_form=(Fraction(1), Fraction(-1, 2)))
        report = box_obstruction_report(spec, 1, chain, ref,
                                        gap_claim=unverified)
        assert not report.uniform_gap_certified
        assert report.certified_epsilon is None

    def test_box_metric_note_recorded(self):
        spec, chain = self.chain_f2()
        ref = BetaRef(Fraction(1), "user-cited")
        report = box_obstruction_report(spec, 1, chain, ref)
        assert "2^(i+j)" in report.box_metric_note


class TestGhostDiagnostic:
    def test_torus_degree_zero_decay(self):
        spec = torus_complex()
        chain = chain_of_squares(spec.presentation, [2, 4])
        report = ghost_diagnostic(spec, 0, chain)
        maxima = [r.max_abs_entry for r in report.records]
        assert abs(maxima[0] - 1 / 4) < 1e-9
        assert abs(maxima[1] - 1 / 16) < 1e-9
        assert report.ghost_like
        for record in report.records:
            assert abs(record.trace - 1.0) < 1e-8

    def test_single_stage_is_not_ghost_like(self):
        spec = torus_complex()
        chain = chain_of_squares(spec.presentation, [2])
        report = ghost_diagnostic(spec, 0, chain)
        assert not report.ghost_like

    def test_top_degree_decay(self):
        # ker Delta_2 of the torus complex is again the constants
        spec = torus_complex()
        chain = chain_of_squares(spec.presentation, [2, 4])
        report = ghost_diagnostic(spec, 2, chain)
        maxima = [r.max_abs_entry for r in report.records]
        assert abs(maxima[0] - 1 / 4) < 1e-9
        assert abs(maxima[1] - 1 / 16) < 1e-9
        assert report.ghost_like

    def test_zero_projections_are_not_ghost_like(self):
        # every kernel along this chain is trivial, so the projections
        # vanish identically; decaying zeros must not count as a ghost
        spec = cyclic_group_complex(8)
        chain = quotient_chain(spec.presentation, [["a^2"], ["a^4"]],
                               ball_radius=1, warn=False)
        report = ghost_diagnostic(spec, 1, chain)
        assert all(r.max_abs_entry < 1e-10 for r in report.records)
        assert all(abs(r.trace) < 1e-8 for r in report.records)
        assert not report.ghost_like
