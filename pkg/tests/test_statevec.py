"""
Test del simulatore a vettore di stato.
"""

import math
import unittest

import numpy as np
from scipy.linalg import expm

from app.core import gates
from app.core.errors import ImpossibleBranchError, InvalidStateError
from app.core.statevec import (
    SingleQubitGate,
    StateVector,
    apply_cz,
    apply_single,
    apply_two,
    basis_state,
    born_probability,
    fidelity,
    init_plus,
    measure_xy,
    overlap,
    random_state,
)


class TestStatePreparation(unittest.TestCase):
    """Preparazione e invarianti di StateVector."""

    def test_init_plus_single_qubit(self):
        state = init_plus(1, ["a"])
        np.testing.assert_allclose(state.amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-15)

    def test_init_plus_two_qubits(self):
        state = init_plus(2, ["a", "b"])
        np.testing.assert_allclose(state.amplitudes, [0.5] * 4, atol=1e-15)

    def test_init_plus_scalar_state(self):
        state = init_plus(0, [])
        self.assertEqual(state.num_qubits, 0)
        np.testing.assert_allclose(state.amplitudes, [1.0])

    def test_duplicate_labels_rejected(self):
        with self.assertRaises(InvalidStateError):
            init_plus(2, ["a", "a"])

    def test_label_count_mismatch_rejected(self):
        with self.assertRaises(InvalidStateError):
            init_plus(2, ["a"])

    def test_unnormalized_amplitudes_rejected(self):
        with self.assertRaises(InvalidStateError):
            StateVector(np.array([1.0, 1.0]), ["a"])

    def test_from_amplitudes_normalizes(self):
        state = StateVector.from_amplitudes([3.0, 4.0], ["a"])
        np.testing.assert_allclose(state.amplitudes, [0.6, 0.8])

    def test_basis_state_first_label_is_least_significant(self):
        state = basis_state([1, 0], ["a", "b"])
        self.assertAlmostEqual(abs(state.amplitudes[1]), 1.0)

    def test_reorder_moves_bits(self):
        state = basis_state([1, 0], ["a", "b"]).reorder(["b", "a"])
        self.assertEqual(state.labels, ["b", "a"])
        self.assertAlmostEqual(abs(state.amplitudes[2]), 1.0)

    def test_tensor_places_other_labels_high(self):
        state = basis_state([1], ["a"]).tensor(basis_state([0], ["b"]))
        self.assertEqual(state.labels, ["a", "b"])
        self.assertAlmostEqual(abs(state.amplitudes[1]), 1.0)


class TestGateApplication(unittest.TestCase):
    """Applicazione di Ctrl-Z e gate a uno e due qubit."""

    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_cz_negates_one_one(self):
        state = apply_cz(basis_state([1, 1], ["a", "b"]), "a", "b")
        self.assertAlmostEqual(state.amplitudes[3], -1.0)

    def test_cz_is_involution(self):
        state = random_state(["a", "b", "c"], self.rng)
        twice = apply_cz(apply_cz(state, "a", "c"), "a", "c")
        np.testing.assert_allclose(twice.amplitudes, state.amplitudes, atol=1e-12)

    def test_cz_is_symmetric(self):
        state = random_state(["a", "b", "c"], self.rng)
        np.testing.assert_allclose(apply_cz(state, "a", "c").amplitudes,
                                   apply_cz(state, "c", "a").amplitudes, atol=1e-12)

    def test_cz_unknown_label_rejected(self):
        with self.assertRaises(InvalidStateError):
            apply_cz(init_plus(2, ["a", "b"]), "a", "z")

    def test_hadamard_on_zero_gives_plus(self):
        state = apply_single(basis_state([0], ["a"]), "a", gates.H)
        np.testing.assert_allclose(state.amplitudes, init_plus(1, ["a"]).amplitudes, atol=1e-15)

    def test_rz_on_plus(self):
        theta = 0.83
        state = apply_single(init_plus(1, ["a"]), "a", gates.rz(theta))
        expected = StateVector(np.array([1, np.exp(1j * theta)]) / math.sqrt(2), ["a"])
        self.assertGreater(fidelity(state, expected), 1 - 1e-12)

    def test_rx_pi_on_zero(self):
        state = apply_single(basis_state([0], ["a"]), "a", gates.rx(math.pi))
        np.testing.assert_allclose(state.amplitudes, [0, -1j], atol=1e-12)

    def test_non_unitary_gate_rejected(self):
        with self.assertRaises(InvalidStateError):
            apply_single(init_plus(1, ["a"]), "a", np.array([[1, 0], [0, 2]]))
        with self.assertRaises(InvalidStateError):
            SingleQubitGate(np.eye(3))

    def test_norm_preserved(self):
        state = random_state([0, 1, 2], self.rng)
        for label in (0, 1, 2):
            state = apply_single(state, label, gates.rx(self.rng.uniform(0, 2 * math.pi)))
        self.assertAlmostEqual(state.norm(), 1.0, delta=1e-12)

    def test_disjoint_gates_commute(self):
        state = random_state([0, 1, 2], self.rng)
        g1, g2 = gates.rx(0.4), gates.rz(1.9)
        first = apply_single(apply_single(state, 0, g1), 2, g2)
        second = apply_single(apply_single(state, 2, g2), 0, g1)
        np.testing.assert_allclose(first.amplitudes, second.amplitudes, atol=1e-12)

    def test_two_qubit_gate_matches_kron_oracle(self):
        state = random_state([0, 1], self.rng)
        theta = 0.71
        # a = label 0 (bit 0), b = label 1 (bit 1): in index order b is the high factor
        oracle = expm(-1j * theta / 2 * np.kron(gates.X, gates.Z)) @ state.amplitudes
        result = apply_two(state, 0, 1, gates.rzx(theta))
        np.testing.assert_allclose(result.amplitudes, oracle, atol=1e-12)


class TestMeasurement(unittest.TestCase):
    """Misure nel piano (X,Y)."""

    def setUp(self):
        self.rng = np.random.default_rng(11)

    def test_eigenstate_measured_deterministically(self):
        theta = 1.3
        state = StateVector(np.array([1, np.exp(1j * theta)]) / math.sqrt(2), ["a"])
        self.assertAlmostEqual(born_probability(state, "a", theta, 0), 1.0, delta=1e-12)
        outcome, rest = measure_xy(state, "a", theta, rng=self.rng)
        self.assertEqual(outcome, 0)
        self.assertEqual(rest.labels, [])

    def test_zero_state_is_unbiased(self):
        state = basis_state([0], ["a"])
        for theta in (0.0, 0.7, 2.5):
            self.assertAlmostEqual(born_probability(state, "a", theta, 0), 0.5, delta=1e-12)
            self.assertAlmostEqual(born_probability(state, "a", theta, 1), 0.5, delta=1e-12)

    def test_one_bit_teleportation_of_one(self):
        state = basis_state([1], [1]).tensor(init_plus(1, [2]))
        state = apply_cz(state, 1, 2)
        _, rest = measure_xy(state, 1, 0.0, outcome=0)
        expected = StateVector(gates.H @ np.array([0, 1]), [2])
        self.assertGreater(fidelity(rest, expected), 1 - 1e-12)

    def test_measurement_equals_rotation_then_x_measurement(self):
        for _ in range(5):
            state = random_state([0, 1, 2], self.rng)
            theta = self.rng.uniform(0, 2 * math.pi)
            rotated = apply_single(state, 1, gates.rz(-theta))
            for outcome in (0, 1):
                _, direct = measure_xy(state, 1, theta, outcome=outcome)
                _, via_rotation = measure_xy(rotated, 1, 0.0, outcome=outcome)
                self.assertGreater(fidelity(direct, via_rotation), 1 - 1e-12)

    def test_impossible_branch(self):
        with self.assertRaises(ImpossibleBranchError):
            measure_xy(init_plus(1, ["a"]), "a", 0.0, outcome=1)

    def test_random_outcome_requires_generator(self):
        with self.assertRaises(InvalidStateError):
            measure_xy(init_plus(1, ["a"]), "a", 0.0)

    def test_seeded_outcomes_are_reproducible(self):
        state = random_state([0, 1], self.rng)
        first = [measure_xy(state, 0, 0.3, rng=np.random.default_rng(5))[0] for _ in range(3)]
        second = [measure_xy(state, 0, 0.3, rng=np.random.default_rng(5))[0] for _ in range(3)]
        self.assertEqual(first, second)


class TestOverlap(unittest.TestCase):

    def test_identical_states(self):
        state = random_state(["a", "b"], np.random.default_rng(3))
        self.assertAlmostEqual(abs(overlap(state, state)), 1.0, delta=1e-12)

    def test_orthogonal_states(self):
        self.assertAlmostEqual(abs(overlap(basis_state([0], ["a"]), basis_state([1], ["a"]))), 0.0)

    def test_plus_against_zero(self):
        value = overlap(init_plus(1, ["a"]), basis_state([0], ["a"]))
        self.assertAlmostEqual(value.real, 1 / math.sqrt(2), delta=1e-15)

    def test_label_order_is_resolved(self):
        state = random_state(["a", "b"], np.random.default_rng(4))
        self.assertAlmostEqual(abs(overlap(state, state.reorder(["b", "a"]))), 1.0, delta=1e-12)

    def test_mismatched_labels_rejected(self):
        with self.assertRaises(InvalidStateError):
            overlap(init_plus(1, ["a"]), init_plus(1, ["b"]))


if __name__ == "__main__":
    unittest.main()
