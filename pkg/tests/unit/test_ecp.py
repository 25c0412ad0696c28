import math
import unittest

import numpy as np
import pytest
from parameterized import parameterized

from ghzecp.core.ecp import (
    Verdict,
    failure_coefficients,
    ghz_reduce,
    projection_basis,
    round_branches,
    round_exact,
    round_statevector,
    run_trajectory,
    schmidt_projection_round,
)
from ghzecp.core.analytics import total_success_probability
from ghzecp.core.pcd import Parity
from ghzecp.core.statevector import Projection, fidelity, ghz_state
from ghzecp.modeling import DEFAULT_E_GRID, ProbeModel, SchmidtCoefficients
from ghzecp.pipelines.enumeration import enumerate_protocol
from ghzecp.utils import make_rng

A2_GRID = DEFAULT_E_GRID


def coefficients_for(a2):
    return SchmidtCoefficients(math.sqrt(a2), math.sqrt(1 - a2))


class TestRoundAlgebra(unittest.TestCase):
    def test_exact_branches_on_grid(self):
        for a2 in A2_GRID:
            c = coefficients_for(a2)
            distribution = round_exact(c)
            b2 = 1 - a2
            self.assertAlmostEqual(distribution.success_probability, 2 * a2 * b2, delta=1e-12)
            s = math.sqrt(a2 * a2 + b2 * b2)
            self.assertAlmostEqual(distribution.failure_coefficients.a, a2 / s, delta=1e-12)
            self.assertAlmostEqual(distribution.failure_coefficients.b, -b2 / s, delta=1e-12)

    def test_enumerated_round_matches_branch_algebra(self):
        bell = ghz_state(2)
        for a2 in A2_GRID:
            c = coefficients_for(a2)
            result = enumerate_protocol(c, 1)
            self.assertAlmostEqual(result.success_probability, 2 * a2 * (1 - a2), delta=1e-12)
            for branch in result.successes():
                self.assertAlmostEqual(fidelity(branch.state, bell), 1.0, delta=1e-12)
            target = failure_coefficients(c)
            for branch in result.failures():
                residual = ghz_state(2, target.a, target.b)
                self.assertAlmostEqual(fidelity(branch.state, residual), 1.0, delta=1e-12)

    @parameterized.expand([(3,), (4,), (5,)])
    def test_ghz_generalization(self, n):
        target = ghz_state(n)
        for a2 in (0.05, 0.2, 0.35, 0.5, 0.65, 0.9):
            c = coefficients_for(a2)
            result = enumerate_protocol(c, 1, n_photons=n)
            self.assertAlmostEqual(result.success_probability, 2 * a2 * (1 - a2), delta=1e-12)
            for branch in result.successes():
                self.assertAlmostEqual(fidelity(branch.state, target), 1.0, delta=1e-12)
            for branch in result.failures():
                residual = failure_coefficients(c)
                self.assertAlmostEqual(
                    fidelity(branch.state, ghz_state(n, residual.a, residual.b)), 1.0, delta=1e-12
                )

    def test_projection_basis(self):
        c = coefficients_for(0.2)
        basis = projection_basis(c)
        np.testing.assert_allclose(basis.v, [c.a, -c.b], atol=1e-15)
        np.testing.assert_allclose(basis.v_perp, [c.b, c.a], atol=1e-15)
        self.assertAlmostEqual(math.cos(basis.angle), c.a, delta=1e-12)

    @parameterized.expand([((1.0, 0.0),), ((0.0, 1.0),)])
    def test_degenerate_is_fixed_point(self, ab):
        c = SchmidtCoefficients(*ab)
        self.assertEqual(failure_coefficients(c), c)
        self.assertEqual(round_exact(c).success_probability, 0.0)

    def test_norm_error_inside_tolerance(self):
        c = SchmidtCoefficients(0.6, math.sqrt(0.64 + 0.9e-12))
        distribution = round_exact(c)
        self.assertAlmostEqual(
            distribution.success_probability + distribution.failure_probability, 1.0, delta=1e-15
        )
        self.assertAlmostEqual(distribution.success_probability, 2 * 0.36 * 0.64, delta=1e-11)
        self.assertAlmostEqual(
            total_success_probability(c, 6),
            total_success_probability(coefficients_for(0.36), 6),
            delta=1e-10,
        )
        result = run_trajectory(c, 4, 3, ProbeModel(), make_rng(2, 0))
        self.assertEqual(len(result.rounds), result.success_round or 4)

    def test_reduce_needs_two_photons(self):
        with pytest.raises(ValueError):
            ghz_reduce(1, coefficients_for(0.5))
        c, reduction = ghz_reduce(4, coefficients_for(0.3))
        self.assertEqual(reduction.remote_qubits, (1, 2, 3))
        self.assertEqual(reduction.h_prime, "HHH")


class TestStatevectorRounds(unittest.TestCase):
    def test_round_consumes_fixed_draws(self):
        c = coefficients_for(0.2)
        state = ghz_state(3, c.a, c.b)
        first = round_statevector(state, 0, c, ProbeModel(), make_rng(11, 0))
        second = round_statevector(state, 0, c, ProbeModel(), make_rng(11, 0))
        self.assertEqual(first.verdict, second.verdict)
        self.assertEqual(first.parity, second.parity)
        np.testing.assert_array_equal(first.state.amplitudes, second.state.amplitudes)

    def test_success_is_ghz_and_failure_recycles(self):
        c = coefficients_for(0.3)
        rng = make_rng(5, 0)
        verdicts = set()
        for _ in range(200):
            record = round_statevector(ghz_state(3, c.a, c.b), 0, c, ProbeModel(), rng)
            verdicts.add(record.verdict)
            if record.verdict == Verdict.SUCCESS:
                self.assertIsNone(record.next_coefficients)
                self.assertAlmostEqual(record.ghz_fidelity, 1.0, delta=1e-12)
            else:
                nxt = record.next_coefficients
                self.assertAlmostEqual(
                    fidelity(record.state, ghz_state(3, nxt.a, nxt.b)), 1.0, delta=1e-12
                )
        self.assertEqual(verdicts, {Verdict.SUCCESS, Verdict.FAILURE})

    def test_trajectory_stops_at_first_success(self):
        c = coefficients_for(0.4)
        for seed in range(30):
            result = run_trajectory(c, 6, 2, ProbeModel(), make_rng(seed, 0))
            if result.verdict == Verdict.SUCCESS:
                self.assertEqual(result.success_round, len(result.rounds))
                self.assertTrue(all(r.verdict == Verdict.FAILURE for r in result.rounds[:-1]))
                self.assertIsNone(result.final_coefficients)
            else:
                self.assertEqual(len(result.rounds), 6)
                self.assertIsNotNone(result.final_coefficients)

    def test_product_state_never_succeeds(self):
        c = SchmidtCoefficients(1.0, 0.0)
        for seed in range(10):
            result = run_trajectory(c, 3, 3, ProbeModel(), make_rng(seed, 0))
            self.assertEqual(result.verdict, Verdict.FAILURE)
            self.assertEqual(result.final_coefficients, c)

    def test_rounds_must_be_positive(self):
        with pytest.raises(ValueError):
            run_trajectory(coefficients_for(0.3), 0, 2, ProbeModel(), make_rng(0, 0))


@pytest.mark.parametrize("n_photons", [2, 3])
def test_schmidt_projection_round(n_photons):
    c = coefficients_for(0.3)
    rng = make_rng(9, n_photons)
    for _ in range(100):
        record = schmidt_projection_round(c, ProbeModel(), rng, n_photons=n_photons)
        if record.verdict == Verdict.SUCCESS:
            assert record.ghz_fidelity == pytest.approx(1.0, abs=1e-12)
        else:
            nxt = record.next_coefficients
            s = math.sqrt(c.a2 ** 2 + c.b2 ** 2)
            assert nxt.a == pytest.approx(c.a2 / s, abs=1e-12)
            assert nxt.b == pytest.approx(c.b2 / s, abs=1e-12)
            target = ghz_state(n_photons, nxt.a, nxt.b)
            assert fidelity(record.state, target) == pytest.approx(1.0, abs=1e-12)


class TestRoundBranches(unittest.TestCase):
    @parameterized.expand([(0.0,), (0.1,)])
    def test_leaves_cover_the_round(self, epsilon):
        model = ProbeModel(misclassification_probability=epsilon)
        for a2 in (0.1, 0.3, 0.5, 0.8):
            c = coefficients_for(a2)
            leaves = round_branches(ghz_state(3, c.a, c.b), 0, c, model)
            self.assertAlmostEqual(sum(leaf.probability for leaf in leaves), 1.0, delta=1e-12)
            if epsilon == 0:
                self.assertTrue(all(not leaf.parity.misread for leaf in leaves))
                success = sum(leaf.probability for leaf in leaves if leaf.verdict == Verdict.SUCCESS)
                self.assertAlmostEqual(success, round_exact(c).success_probability, delta=1e-12)

    def test_correction_follows_reported_label(self):
        c = coefficients_for(0.3)
        model = ProbeModel(misclassification_probability=0.2)
        leaves = round_branches(ghz_state(2, c.a, c.b), 0, c, model)
        for leaf in leaves:
            if leaf.verdict == Verdict.SUCCESS and not leaf.parity.misread:
                self.assertAlmostEqual(fidelity(leaf.state, ghz_state(2)), 1.0, delta=1e-12)
        # a misread odd branch skips sigma_x, which a true-parity correction would not
        misread_odd = [
            leaf
            for leaf in leaves
            if leaf.parity.parity == Parity.ODD and leaf.parity.misread and leaf.verdict == Verdict.SUCCESS
        ]
        self.assertTrue(misread_odd)
        self.assertTrue(all(fidelity(leaf.state, ghz_state(2)) < 1 - 1e-6 for leaf in misread_odd))

    @parameterized.expand([(0.0,), (0.15,)])
    def test_sampled_round_is_one_of_the_leaves(self, epsilon):
        c = coefficients_for(0.2)
        model = ProbeModel(misclassification_probability=epsilon)
        state = ghz_state(3, c.a, c.b)
        leaves = round_branches(state, 0, c, model)
        rng = make_rng(17, 0)
        seen = set()
        for _ in range(300):
            record = round_statevector(state, 0, c, model, rng)
            match = [
                leaf
                for leaf in leaves
                if leaf.parity == record.parity and leaf.projection == record.projection
            ]
            self.assertEqual(len(match), 1)
            self.assertEqual(match[0].parity_probability, record.parity_probability)
            self.assertEqual(match[0].projection_probability, record.projection_probability)
            np.testing.assert_array_equal(match[0].state.amplitudes, record.state.amplitudes)
            seen.add((record.parity.parity, record.parity.reported, record.projection))
        self.assertIn((Parity.EVEN, Parity.EVEN, Projection.ORTHOGONAL), seen)
        self.assertIn((Parity.ODD, Parity.ODD, Projection.PARALLEL), seen)
