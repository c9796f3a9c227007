"""
Test end-to-end: teletrasporto, pattern con angoli 0, compilazione di circuiti
casuali, feed-forward, scala di Ctrl-Z e streaming su cluster grandi.
"""

import itertools
import math
import time
import unittest

import numpy as np

from app.core import gates
from app.core.circuit import LogicalCircuit, LogicalGate, ZXOrientation
from app.core.cluster import InputSpec
from app.core.compiler import compile_circuit
from app.core.pattern import all_x_pattern, execute_pattern, extract_unitary, measure_site, run_positive_branch
from app.core.statevec import StateVector, apply_cz, fidelity, init_plus, measure_xy, random_state
from app.services.verify import (
    all_x_deviation,
    c_n_matrix,
    closed_emulation_infidelity,
    cz_ladder_infidelity,
    oracle_simulate,
    unitary_equiv,
)

GATE_BUILDERS = [
    lambda n, rng: LogicalGate.rz(int(rng.integers(1, n + 1)), rng.uniform(0, 2 * math.pi)),
    lambda n, rng: LogicalGate.rx(int(rng.integers(1, n + 1)), rng.uniform(0, 2 * math.pi)),
    lambda n, rng: LogicalGate.rzx(int(rng.integers(1, n)), rng.uniform(0, 2 * math.pi),
                                   ZXOrientation.Z_ON_LOWER if rng.random() < 0.5 else ZXOrientation.Z_ON_UPPER),
    lambda n, rng: LogicalGate.h(int(rng.integers(1, n + 1))),
    lambda n, rng: LogicalGate.cnot(*[int(q) for q in rng.permutation(np.arange(1, n + 1))[:2]]),
    lambda n, rng: LogicalGate.swap(int(rng.integers(1, n))),
    lambda n, rng: LogicalGate.cz(int(rng.integers(1, n))),
]


class TestTeleportation(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(101)

    def _wire(self, psi):
        state = StateVector(psi.amplitudes, [1]).tensor(init_plus(1, [2]))
        return apply_cz(state, 1, 2)

    def test_one_bit_teleportation(self):
        start = time.perf_counter()
        for _ in range(50):
            psi = random_state([0], self.rng)
            outcome, rest = measure_xy(self._wire(psi), 1, 0.0, rng=self.rng)
            correction = gates.X if outcome else gates.I2
            expected = StateVector(correction @ gates.H @ psi.amplitudes, [2])
            self.assertGreater(fidelity(rest, expected), 1 - 1e-12)
        self.assertLess(time.perf_counter() - start, 1.0)

    def test_rotated_teleportation(self):
        for _ in range(20):
            theta = self.rng.uniform(0, 2 * math.pi)
            psi = random_state([0], self.rng)
            _, rest, _ = measure_site(self._wire(psi), 1, theta, outcome=0)
            expected = StateVector(gates.H @ gates.rz(theta) @ psi.amplitudes, [2])
            self.assertGreater(fidelity(rest, expected), 1 - 1e-12)


class TestZeroAnglePatterns(unittest.TestCase):

    def test_all_x_layers(self):
        for n, m in itertools.product((2, 3), range(2, 6)):
            matrix = extract_unitary(all_x_pattern(n, m))
            expected = np.linalg.matrix_power(c_n_matrix(n), m - 1)
            passed, _ = unitary_equiv(matrix, expected, tol=1e-10)
            self.assertTrue(passed, msg=f"{n}x{m}")
            self.assertLess(all_x_deviation(n, m), 1e-10)


class TestCompiledCircuits(unittest.TestCase):
    """Circuiti casuali compilati contro la simulazione diretta."""

    def test_random_circuits(self):
        rng = np.random.default_rng(2024)
        start = time.perf_counter()
        for index in range(25):
            n = 2 if index % 2 == 0 else 3
            count = int(rng.integers(1, 7))
            circuit = LogicalCircuit(n, [GATE_BUILDERS[int(rng.integers(len(GATE_BUILDERS)))](n, rng)
                                         for _ in range(count)])
            psi = random_state(list(range(n)), rng)
            _, pattern = compile_circuit(circuit)
            output = run_positive_branch(pattern, InputSpec.generic(psi))
            expected = StateVector(oracle_simulate(circuit, psi).amplitudes, output.labels)
            self.assertGreater(fidelity(output, expected), 1 - 1e-8,
                               msg=[gate.describe() for gate in circuit.gates])
        self.assertLess(time.perf_counter() - start, 60.0)


class TestAdaptiveExecution(unittest.TestCase):
    """Ogni traiettoria corretta dal frame coincide con il ramo positivo."""

    @classmethod
    def setUpClass(cls):
        circuit = LogicalCircuit(2, [LogicalGate.cnot(1, 2), LogicalGate.rx(2, 0.9)])
        cls.geometry, cls.pattern = compile_circuit(circuit)
        cls.input_spec = InputSpec.generic(random_state([0, 1], np.random.default_rng(7)))
        cls.positive = run_positive_branch(cls.pattern, cls.input_spec)

    def test_exhaustive_prefix(self):
        rng = np.random.default_rng(8)
        prefix = min(10, self.pattern.measured_count)
        for forced in itertools.product((0, 1), repeat=prefix):
            trace = execute_pattern(self.pattern, self.input_spec, adaptive=True, forced=forced, rng=rng)
            self.assertEqual(trace.outcomes[:prefix], list(forced))
            self.assertGreater(fidelity(trace.corrected(self.geometry), self.positive), 1 - 1e-8)

    def test_random_trajectories(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            trace = execute_pattern(self.pattern, self.input_spec, adaptive=True, rng=rng)
            self.assertGreater(fidelity(trace.corrected(self.geometry), self.positive), 1 - 1e-8)


class TestClusterEquivalence(unittest.TestCase):

    def test_cz_ladder(self):
        for n in (2, 3, 4):
            self.assertLess(cz_ladder_infidelity(n), 1e-10)

    def test_closed_cluster_emulation(self):
        for n, m in ((2, 2), (2, 3), (3, 2)):
            self.assertLess(closed_emulation_infidelity(n, m), 1e-10)


class TestStreamingScale(unittest.TestCase):

    def test_large_all_x_pattern(self):
        start = time.perf_counter()
        trace = execute_pattern(all_x_pattern(8, 50))
        self.assertLess(time.perf_counter() - start, 60.0)
        self.assertLessEqual(trace.peak_live_qubits, 16)
        self.assertAlmostEqual(trace.state.norm(), 1.0, delta=1e-9)

    def test_downsized_instance_matches_eager(self):
        rng = np.random.default_rng(15)
        pattern = all_x_pattern(3, 6)
        input_spec = InputSpec.generic(random_state([0, 1, 2], rng))
        streamed = run_positive_branch(pattern, input_spec, streaming=True)
        eager = run_positive_branch(pattern, input_spec, streaming=False)
        self.assertGreater(fidelity(streamed, eager), 1 - 1e-10)


if __name__ == "__main__":
    unittest.main()
