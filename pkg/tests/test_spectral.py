"""Exact evaluation, eigenvalue extraction, and kernel projections.

Eigenvalue oracles come from the discrete Fourier transform: the
degree-zero combinatorial laplacian of a free group evaluated in the
regular representation of an abelian quotient is a circulant (or a
tensor product of circulants), so its spectrum is known in closed form.
"""

import math
from fractions import Fraction
from random import Random

import numpy as np
import pytest

from conftest import random_element

from coholap import (
    EvaluatedOperator,
    GroupRingElement,
    GroupRingMatrix,
    NotPositiveSemidefiniteError,
    Presentation,
    Representation,
    ShapeMismatchError,
    UnresolvedGapError,
    Word,
    evaluate,
    heat_projection,
    kernel_projection,
    lanczos_lowest,
    spectral_gap,
    spectrum_low,
    todd_coxeter,
)
from coholap import exact

F1 = Presentation(("a",), ())
F2 = Presentation(("a", "b"), ())


def regular_rep(presentation, extra):
    return Representation.from_coset_table(
        todd_coxeter(presentation, extra))


def laplacian_operator(presentation, rep):
    matrix = GroupRingMatrix.from_element(presentation.degree_zero_laplacian())
    return evaluate(matrix, rep)


class TestEvaluate:
    def test_star_homomorphism_on_random_elements(self):
        rep = regular_rep(F2, ["a^3", "b^3", "a*b*a^-1*b^-1"])
        rng = Random(71)
        for _ in range(8):
            x = GroupRingMatrix.from_element(random_element(rng, 2))
            y = GroupRingMatrix.from_element(random_element(rng, 2))
            left = evaluate(x @ y, rep)
            right = evaluate(x, rep) @ evaluate(y, rep)
            assert left.exact_matrix == right.exact_matrix
            assert (evaluate(x.adjoint(), rep).exact_matrix
                    == exact.transpose(evaluate(x, rep).exact_matrix))

    def test_self_adjoint_evaluates_to_symmetric(self):
        rep = regular_rep(F2, ["a^2", "b^2", "a*b*a^-1*b^-1"])
        op = laplacian_operator(F2, rep)
        assert op.is_symmetric_exact()
        assert op.rows == op.cols == 4

    def test_block_structure_dimensions(self):
        rep = regular_rep(F1, ["a^3"])
        matrix = GroupRingMatrix(
            1, 2, [[GroupRingElement.one(), GroupRingElement.zero()]])
        op = evaluate(matrix, rep)
        assert (op.rows, op.cols) == (3, 6)

    def test_sign_representation_exact_value(self):
        p = Presentation(("a",), (Word([1, 1]),))
        sign = Representation(1, matrices=[((Fraction(-1),),)], label="sign")
        op = evaluate(GroupRingMatrix.from_element(
            p.degree_zero_laplacian()), sign)
        # 2 * (2 - a - a^-1) with a -> -1 gives exactly 8
        assert op.exact_matrix == ((Fraction(8),),)

    def test_one_norm(self):
        rep = regular_rep(F1, ["a^3"])
        op = laplacian_operator(F1, rep)
        # columns of 2*(2 - a - a^-1) in the regular representation
        # each hold |4| + |-2| + |-2|
        assert op.one_norm() == 8.0

    def test_operator_algebra(self):
        rep = regular_rep(F1, ["a^4"])
        op = laplacian_operator(F1, rep)
        zero = op - op
        assert zero.is_zero_exact()
        square = op @ op
        assert square.exact_matrix == exact.matmul(op.exact_matrix,
                                                   op.exact_matrix)

    def test_dimension_requires_square(self):
        rep = regular_rep(F1, ["a^2"])
        matrix = GroupRingMatrix(
            1, 2, [[GroupRingElement.one(), GroupRingElement.one()]])
        op = evaluate(matrix, rep)
        with pytest.raises(ShapeMismatchError):
            _ = op.dimension


class TestEigenvalueOracles:
    """Closed-form circulant spectra versus the numerical path."""

    @pytest.mark.parametrize("m", [2, 3, 5, 8, 12])
    def test_cyclic_laplacian_spectrum(self, m):
        rep = regular_rep(F1, [f"a^{m}"])
        op = laplacian_operator(F1, rep)
        values = spectrum_low(op)
        oracle = sorted(2 * (2 - 2 * math.cos(2 * math.pi * j / m))
                        for j in range(m))
        assert np.allclose(values, oracle, atol=1e-9)

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_free_square_quotient_spectrum(self, m):
        rep = regular_rep(F2, [f"a^{m}", f"b^{m}", "a*b*a^-1*b^-1"])
        op = laplacian_operator(F2, rep)
        values = spectrum_low(op)
        oracle = sorted(
            2 * (4 - 2 * math.cos(2 * math.pi * j / m)
                 - 2 * math.cos(2 * math.pi * k / m))
            for j in range(m) for k in range(m))
        assert np.allclose(values, oracle, atol=1e-9)

    def test_cyclic_three_gap_report(self):
        rep = regular_rep(F1, ["a^3"])
        report = spectral_gap(laplacian_operator(F1, rep))
        assert report.dimension == 3
        assert report.kernel_dim == 1
        assert report.resolved
        assert abs(report.gap - 6.0) < 1e-9
        assert abs(report.lowest[0]) < 1e-9

    def test_zero_operator_gap(self):
        rep = regular_rep(F1, ["a^4"])
        zero = GroupRingMatrix.zero(2, 2)
        report = spectral_gap(evaluate(zero, rep))
        assert report.kernel_dim == report.dimension == 8
        assert report.gap == math.inf
        assert report.resolved


class TestLanczos:
    def test_matches_dense_on_moderate_operator(self):
        rep = regular_rep(F2, ["a^8", "b^8", "a*b*a^-1*b^-1"])
        op = laplacian_operator(F2, rep)  # 64 x 64
        dense = np.linalg.eigvalsh(op.shadow)
        low = lanczos_lowest(op.shadow, 6)
        assert np.allclose(low, dense[:6], atol=1e-6)

    def test_spectrum_low_switches_to_lanczos(self):
        rep = regular_rep(F2, ["a^6", "b^6", "a*b*a^-1*b^-1"])
        op = laplacian_operator(F2, rep)  # 36 x 36
        dense = spectrum_low(op, count=5)
        iterative = spectrum_low(op, count=5, dense_cutoff=10)
        assert np.allclose(dense, iterative, atol=1e-6)

    def test_spectrum_low_requires_count_above_cutoff(self):
        rep = regular_rep(F1, ["a^12"])
        op = laplacian_operator(F1, rep)
        with pytest.raises(ValueError):
            spectrum_low(op, dense_cutoff=4)

    def test_gap_report_agrees_across_backends(self):
        rep = regular_rep(F2, ["a^5", "b^5", "a*b*a^-1*b^-1"])
        op = laplacian_operator(F2, rep)
        dense = spectral_gap(op)
        iterative = spectral_gap(op, dense_cutoff=8)
        assert iterative.kernel_dim == dense.kernel_dim == 1
        assert abs(iterative.gap - dense.gap) < 1e-6


class TestGapPolicy:
    def test_unresolved_when_tolerance_swamps_gap(self):
        rep = regular_rep(F1, ["a^3"])
        op = laplacian_operator(F1, rep)
        # threshold = 0.2 * 8 = 1.6; gap 6 < 10 * 1.6 so not resolved
        report = spectral_gap(op, zero_tolerance=0.2)
        assert not report.resolved
        with pytest.raises(UnresolvedGapError):
            report.require_resolved()

    def test_non_psd_detected(self):
        rep = regular_rep(F1, ["a^3"])
        generator = GroupRingElement.generator(1)
        op = evaluate(GroupRingMatrix.from_element(
            generator + generator.star()), rep)
        # eigenvalues of a + a^-1 on Z/3 are {2, -1, -1}
        with pytest.raises(NotPositiveSemidefiniteError):
            spectral_gap(op)

    def test_non_symmetric_rejected(self):
        rep = regular_rep(F1, ["a^3"])
        op = evaluate(GroupRingMatrix.from_element(
            GroupRingElement.generator(1)), rep)
        with pytest.raises(NotPositiveSemidefiniteError):
            spectral_gap(op)


class TestProjections:
    def test_eigen_projection_cyclic(self):
        rep = regular_rep(F1, ["a^5"])
        op = laplacian_operator(F1, rep)
        proj = kernel_projection(op)
        # kernel of the laplacian on a transitive action: constants only,
        # so every entry of the projection is 1/dimension
        assert np.allclose(proj.matrix, np.full((5, 5), 0.2), atol=1e-9)
        assert proj.idempotency_defect < 1e-10
        assert proj.selfadjoint_defect < 1e-12
        assert abs(proj.trace() - 1.0) < 1e-9

    def test_heat_agrees_with_eigen(self):
        rep = regular_rep(F2, ["a^3", "b^3", "a*b*a^-1*b^-1"])
        op = laplacian_operator(F2, rep)
        gap = spectral_gap(op).require_resolved().gap
        eigen = kernel_projection(op)
        heat = heat_projection(op, gap_hint=gap, tolerance=1e-10)
        assert eigen.distance(heat) < 1e-6
        assert heat.method == "heat"
        assert eigen.method == "eigen"

    def test_heat_on_zero_operator_is_identity(self):
        rep = regular_rep(F1, ["a^3"])
        op = evaluate(GroupRingMatrix.zero(1, 1), rep)
        proj = heat_projection(op, gap_hint=math.inf)
        assert np.array_equal(proj.matrix, np.eye(3))

    def test_heat_rejects_bad_hint(self):
        rep = regular_rep(F1, ["a^3"])
        op = laplacian_operator(F1, rep)
        with pytest.raises(UnresolvedGapError):
            heat_projection(op, gap_hint=0.0)
        with pytest.raises(UnresolvedGapError):
            heat_projection(op, gap_hint=-2.0)

    def test_unresolved_gap_blocks_projection(self):
        rep = regular_rep(F1, ["a^3"])
        op = laplacian_operator(F1, rep)
        with pytest.raises(UnresolvedGapError):
            kernel_projection(op, zero_tolerance=0.2)

    def test_projection_annihilates_operator_range(self):
        rep = regular_rep(F2, ["a^2", "b^4", "a*b*a^-1*b^-1"])
        op = laplacian_operator(F2, rep)
        proj = kernel_projection(op)
        assert float(np.abs(proj.matrix @ op.shadow).max()) < 1e-8
