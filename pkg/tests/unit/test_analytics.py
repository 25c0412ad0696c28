import math
import unittest

import numpy as np
import pytest
from parameterized import parameterized

from ghzecp.core.analytics import (
    coefficient_trajectory,
    coefficients_from_entanglement,
    comparison_curves,
    concentration_report,
    entanglement,
    eq8_literal,
    required_rounds,
    schmidt_projection_yield,
    total_success_probability,
)
from ghzecp.modeling import DEFAULT_E_GRID, SchmidtCoefficients

GRID = [coefficients_from_entanglement(e) for e in DEFAULT_E_GRID]


class TestSuccessProbability(unittest.TestCase):
    def test_recursion_matches_closed_sum(self):
        for c in GRID:
            for n in range(1, 11):
                self.assertAlmostEqual(
                    total_success_probability(c, n), eq8_literal(c, n), delta=1e-12
                )

    def test_two_rounds_at_a2_02(self):
        c = SchmidtCoefficients(math.sqrt(0.2), math.sqrt(0.8))
        self.assertAlmostEqual(total_success_probability(c, 1), 0.32, delta=1e-12)
        self.assertAlmostEqual(total_success_probability(c, 2), 0.32 + 0.0512 / 0.68, delta=1e-12)
        self.assertAlmostEqual(total_success_probability(c, 2), 0.3952945, delta=1e-6)

    @parameterized.expand([(n,) for n in range(1, 11)])
    def test_symmetric_point(self, n):
        c = coefficients_from_entanglement(1.0)
        self.assertAlmostEqual(total_success_probability(c, n), 1 - 2.0 ** -n, delta=1e-12)

    def test_convergence_towards_entanglement(self):
        for e, c in zip(DEFAULT_E_GRID, GRID):
            if e <= 0.4:
                self.assertLessEqual(e - total_success_probability(c, 2), 0.005)
            if e <= 0.72:
                self.assertLessEqual(e - total_success_probability(c, 3), 0.006)
            self.assertLessEqual(e - total_success_probability(c, 6), 2.0 ** -6 + 1e-12)
        gap = 1 - total_success_probability(coefficients_from_entanglement(1.0), 6)
        self.assertAlmostEqual(gap, 2.0 ** -6, delta=1e-12)

    @parameterized.expand([(n,) for n in range(1, 11)])
    def test_gap_halves_every_round(self, n):
        for e, c in zip(DEFAULT_E_GRID, GRID):
            self.assertLessEqual(e - total_success_probability(c, n), 2.0 ** -n + 1e-12)

    def test_monotone_and_bounded(self):
        for e, c in zip(DEFAULT_E_GRID, GRID):
            report = concentration_report(c, 10)
            cumulative = np.array(report.cumulative)
            self.assertTrue(np.all(np.diff(cumulative) >= 0))
            # increments stay strictly positive even where doubles underflow
            self.assertTrue(np.all(np.isfinite(report.log_increments)))
            self.assertTrue(np.all(cumulative <= e + 1e-12))

    def test_degenerate_input(self):
        c = SchmidtCoefficients(1.0, 0.0)
        self.assertEqual(total_success_probability(c, 6), 0.0)
        self.assertEqual(eq8_literal(c, 6), 0.0)

    def test_rounds_must_be_positive(self):
        with pytest.raises(ValueError):
            total_success_probability(GRID[0], 0)
        with pytest.raises(ValueError):
            eq8_literal(GRID[0], 0)


class TestReport(unittest.TestCase):
    def test_report_is_consistent(self):
        c = SchmidtCoefficients(math.sqrt(0.2), math.sqrt(0.8))
        report = concentration_report(c, 6)
        self.assertEqual(report.rounds, 6)
        self.assertAlmostEqual(report.total, total_success_probability(c, 6), delta=1e-12)
        self.assertAlmostEqual(sum(report.increments), report.total, delta=1e-12)
        for (a, b), level in zip(report.trajectory, coefficient_trajectory(c, 6)):
            self.assertEqual((a, b), (level.a, level.b))
        np.testing.assert_allclose(np.exp(report.log_increments), report.increments, rtol=1e-9)

    def test_trajectory_keeps_ordering_and_flips_sign(self):
        levels = coefficient_trajectory(SchmidtCoefficients(0.6, 0.8), 4)
        self.assertTrue(all(level.b < 0 for level in levels[1:]))
        self.assertTrue(all(level.a2 < level.b2 for level in levels))

    def test_required_rounds(self):
        c = coefficients_from_entanglement(1.0)
        self.assertEqual(required_rounds(c, 0.0157), 6)
        self.assertEqual(required_rounds(c, 0.6), 1)
        with pytest.raises(ValueError):
            required_rounds(c, 1e-3, max_rounds=2)
        with pytest.raises(ValueError):
            required_rounds(c, 0.0)


class TestComparison(unittest.TestCase):
    def test_closed_forms(self):
        point = comparison_curves(coefficients_from_entanglement(1.0))
        self.assertAlmostEqual(point.p_b, 0.5, delta=1e-12)
        self.assertAlmostEqual(point.p_z, 0.25, delta=1e-12)
        point = comparison_curves(coefficients_from_entanglement(0.4))
        self.assertAlmostEqual(point.p_b, 0.2, delta=1e-12)
        self.assertAlmostEqual(point.p_z, 0.16, delta=1e-12)

    def test_ordering_on_grid(self):
        for e, c in zip(DEFAULT_E_GRID, GRID):
            point = comparison_curves(c, 6)
            self.assertAlmostEqual(point.entanglement, e, delta=1e-12)
            self.assertAlmostEqual(point.p_b, e / 2, delta=1e-12)
            self.assertAlmostEqual(point.p_z, c.a2 * c.b2, delta=1e-15)
            self.assertGreater(point.p_o, point.p_b)
            self.assertGreater(point.p_b, point.p_s)
            self.assertGreater(point.p_s, point.p_z)

    def test_single_level_pairwise_yield(self):
        c = coefficients_from_entanglement(0.5)
        self.assertAlmostEqual(schmidt_projection_yield(c, 1), c.a2 * c.b2, delta=1e-15)


@pytest.mark.parametrize("e", [0.01, 0.4, 1.0])
def test_entanglement_convention(e):
    c = coefficients_from_entanglement(e)
    assert c.a <= c.b
    assert entanglement(c) == pytest.approx(e, abs=1e-12)
