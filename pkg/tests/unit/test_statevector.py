import unittest

import numpy as np
import pytest
from parameterized import parameterized

from ghzecp.core.statevector import (
    COMPUTATIONAL_BASIS,
    DIAGONAL_BASIS,
    HADAMARD,
    IDENTITY,
    PAULI_X,
    PAULI_Z,
    MeasurementBasis,
    Projection,
    PureState,
    SingleQubitUnitary,
    apply_unitary,
    basis_index,
    basis_labels,
    branch_probabilities,
    collapse,
    fidelity,
    ghz_state,
    measure_qubit,
    project,
    tensor,
)


class TestBasisEncoding(unittest.TestCase):
    @parameterized.expand(
        [
            ("HH", 0),
            ("HV", 1),
            ("VH", 2),
            ("VV", 3),
            ("HVH", 2),
            ("VHH", 4),
            ("VVVV", 15),
        ]
    )
    def test_big_endian(self, labels, index):
        self.assertEqual(basis_index(labels), index)
        self.assertEqual("".join(basis_labels(index, len(labels))), labels)

    def test_invalid_label(self):
        with pytest.raises(ValueError):
            basis_index("HD")

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            basis_labels(4, 2)


class TestPureState(unittest.TestCase):
    def test_from_amplitudes_normalizes(self):
        state = PureState.from_amplitudes([3, 0, 0, 4])
        self.assertEqual(state.photon_count, 2)
        np.testing.assert_allclose(state.probabilities(), [0.36, 0, 0, 0.64], atol=1e-15)

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            PureState.from_amplitudes([0, 0])

    def test_length_must_be_power_of_two(self):
        with pytest.raises(ValueError):
            PureState.from_amplitudes([1, 0, 0])

    def test_unnormalized_rejected_without_rescale(self):
        with pytest.raises(ValueError):
            PureState.from_amplitudes([1, 1], normalize=False)

    def test_amplitudes_are_read_only(self):
        state = ghz_state(2)
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0

    def test_from_labels(self):
        state = PureState.from_labels("HVV")
        self.assertEqual(state.amplitude("HVV"), 1)
        self.assertEqual(state.amplitude("HHH"), 0)

    def test_photon_cap(self):
        with pytest.raises(ValueError):
            tensor(ghz_state(11), ghz_state(10))

    @parameterized.expand([(2,), (3,), (5,)])
    def test_ghz_state(self, n):
        state = ghz_state(n, 0.6, 0.8)
        self.assertAlmostEqual(state.amplitude("H" * n).real, 0.6, places=15)
        self.assertAlmostEqual(state.amplitude("V" * n).real, 0.8, places=15)
        self.assertAlmostEqual(float(state.probabilities().sum()), 1.0, places=15)


class TestOperations(unittest.TestCase):
    def test_tensor_order(self):
        state = tensor(PureState.from_labels("H"), PureState.from_labels("V"))
        self.assertEqual(state.amplitude("HV"), 1)

    @parameterized.expand([(0, "VHH"), (1, "HVH"), (2, "HHV")])
    def test_pauli_x_targets_one_photon(self, qubit, expected):
        state = apply_unitary(PureState.from_labels("HHH"), qubit, PAULI_X)
        self.assertEqual(state.amplitude(expected), 1)

    def test_identity_leaves_state_unchanged(self):
        state = ghz_state(3, 0.6, -0.8)
        for qubit in range(3):
            np.testing.assert_array_equal(
                apply_unitary(state, qubit, IDENTITY).amplitudes, state.amplitudes
            )

    def test_pauli_z_sign(self):
        state = apply_unitary(ghz_state(2), 0, PAULI_Z)
        np.testing.assert_allclose(
            state.amplitudes, np.array([1, 0, 0, -1]) / np.sqrt(2), atol=1e-15
        )

    def test_qubit_out_of_range(self):
        with pytest.raises(IndexError):
            apply_unitary(ghz_state(2), 2, HADAMARD)
        with pytest.raises(IndexError):
            project(ghz_state(2), -1, COMPUTATIONAL_BASIS.v)

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError):
            SingleQubitUnitary(np.array([[1, 1], [0, 1]]))

    def test_non_orthonormal_basis_rejected(self):
        with pytest.raises(ValueError):
            MeasurementBasis([1, 0], [1, 1])

    def test_diagonal_measurement_of_h(self):
        p_plus, p_minus = branch_probabilities(PureState.from_labels("H"), 0, DIAGONAL_BASIS)
        self.assertAlmostEqual(p_plus, 0.5, places=15)
        self.assertAlmostEqual(p_minus, 0.5, places=15)

    def test_collapse_removes_photon(self):
        result = collapse(ghz_state(3, 0.6, 0.8), 0, COMPUTATIONAL_BASIS, Projection.PARALLEL)
        self.assertAlmostEqual(result.probability, 0.36, places=14)
        self.assertEqual(result.state.photon_count, 2)
        self.assertAlmostEqual(abs(result.state.amplitude("HH")), 1.0, places=14)

    def test_measure_draw_selects_branch(self):
        state = ghz_state(2, 0.6, 0.8)
        low = measure_qubit(state, 1, COMPUTATIONAL_BASIS, 0.35)
        high = measure_qubit(state, 1, COMPUTATIONAL_BASIS, 0.37)
        self.assertEqual(low.outcome, Projection.PARALLEL)
        self.assertEqual(high.outcome, Projection.ORTHOGONAL)

    def test_fidelity(self):
        self.assertAlmostEqual(fidelity(ghz_state(3), ghz_state(3)), 1.0, places=14)
        self.assertAlmostEqual(fidelity(ghz_state(2, 1, 0), ghz_state(2)), 0.5, places=14)
        with pytest.raises(ValueError):
            fidelity(ghz_state(2), ghz_state(3))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_measuring_ghz_diagonally_keeps_ghz_up_to_sign(n):
    state = ghz_state(n)
    result = collapse(state, n - 1, DIAGONAL_BASIS, Projection.ORTHOGONAL)
    fixed = apply_unitary(result.state, 0, PAULI_Z)
    assert fidelity(fixed, ghz_state(n - 1)) == pytest.approx(1.0, abs=1e-12)
