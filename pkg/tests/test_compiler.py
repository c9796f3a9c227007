"""
Test della decomposizione dei gate e della compilazione in slab.
"""

import cmath
import math
import unittest

import numpy as np

from app.core import gates
from app.core.circuit import GateKind, LogicalCircuit, LogicalGate, ZXOrientation, decompose
from app.core.cluster import ClusterKind, Geometry
from app.core.compiler import (
    all_x_slab,
    assemble,
    build_cz_ladder,
    compile_circuit,
    compile_primitive,
    emulate_closed_cluster,
    identity_placement,
    mirror_placement,
    slab_count,
)
from app.core.errors import CircuitValidationError
from app.core.pattern import all_x_pattern, concatenate, extract_unitary, run_positive_branch
from app.core.statevec import StateVector, fidelity, init_plus
from app.services.verify import (
    aligned_deviation,
    closed_cluster_state,
    cz_ladder_matrix,
    mirror_matrix,
    unitary_equiv,
)


def random_circuit(n, count, rng):
    """Circuito casuale su tutti i tipi di gate."""
    result = []
    for _ in range(count):
        kind = rng.choice(["rz", "rx", "rzx", "h", "cnot", "swap", "cz"])
        theta = float(rng.uniform(0, 2 * math.pi))
        k = int(rng.integers(1, n))
        if kind == "rz":
            result.append(LogicalGate.rz(int(rng.integers(1, n + 1)), theta))
        elif kind == "rx":
            result.append(LogicalGate.rx(int(rng.integers(1, n + 1)), theta))
        elif kind == "rzx":
            orientation = ZXOrientation.Z_ON_LOWER if rng.random() < 0.5 else ZXOrientation.Z_ON_UPPER
            result.append(LogicalGate.rzx(k, theta, orientation))
        elif kind == "h":
            result.append(LogicalGate.h(int(rng.integers(1, n + 1))))
        elif kind == "cnot":
            control, target = rng.choice(np.arange(1, n + 1), size=2, replace=False)
            result.append(LogicalGate.cnot(int(control), int(target)))
        elif kind == "swap":
            result.append(LogicalGate.swap(k))
        else:
            result.append(LogicalGate.cz(k))
    return LogicalCircuit(n, result)


class TestDecompose(unittest.TestCase):
    """Decomposizioni nei gate primitivi."""

    def _product(self, gate, n):
        return LogicalCircuit(n, decompose(gate)).unitary()

    def test_cnot_down_with_phase(self):
        product = self._product(LogicalGate.cnot(1, 2), 2)
        expected = gates.embed(gates.CNOT, [1, 2], 2)
        np.testing.assert_allclose(cmath.exp(1j * math.pi / 4) * product, expected, atol=1e-12)

    def test_cnot_up_with_phase(self):
        product = self._product(LogicalGate.cnot(2, 1), 2)
        expected = gates.embed(gates.CNOT, [2, 1], 2)
        np.testing.assert_allclose(cmath.exp(1j * math.pi / 4) * product, expected, atol=1e-12)

    def test_cnot_sequence_is_primitive(self):
        sequence = decompose(LogicalGate.cnot(1, 2))
        self.assertEqual([g.kind for g in sequence], [GateKind.RZ, GateKind.RX, GateKind.RZX])
        self.assertAlmostEqual(sequence[2].angle, -math.pi / 2)

    def test_hadamard(self):
        product = self._product(LogicalGate.h(1), 1)
        self.assertLess(aligned_deviation(product, gates.H), 1e-12)

    def test_swap_and_cz(self):
        self.assertLess(aligned_deviation(self._product(LogicalGate.swap(1), 2), gates.SWAP), 1e-12)
        self.assertLess(aligned_deviation(self._product(LogicalGate.cz(1), 2), gates.CZ), 1e-12)

    def test_routed_cnot(self):
        for n, control, target in ((3, 1, 3), (3, 3, 1), (4, 1, 4), (4, 4, 2)):
            gate = LogicalGate.cnot(control, target)
            expected = gates.embed(gates.CNOT, [control, target], n)
            self.assertLess(aligned_deviation(self._product(gate, n), expected), 1e-12)

    def test_out_of_range_rejected(self):
        with self.assertRaises(CircuitValidationError):
            LogicalCircuit(2, [LogicalGate.cnot(1, 3)]).validate()
        with self.assertRaises(CircuitValidationError):
            LogicalCircuit(3, [LogicalGate(GateKind.RZX, (1, 3), 0.2, ZXOrientation.Z_ON_LOWER)]).validate()


class TestCompilePrimitive(unittest.TestCase):
    """Posizionamento del sito ruotato nella slab."""

    def test_rz_uses_input_placement(self):
        self.assertEqual(compile_primitive(LogicalGate.rz(2, 0.3), 2).rotated_sites[0][0], (2, 1))
        mirrored = mirror_placement(identity_placement(2))
        self.assertEqual(compile_primitive(LogicalGate.rz(2, 0.3), 2, mirrored).rotated_sites[0][0], (1, 1))

    def test_rx_uses_output_placement(self):
        self.assertEqual(compile_primitive(LogicalGate.rx(2, 0.3), 2).rotated_sites[0][0], (1, 3))

    def test_rzx_row_one(self):
        gate = LogicalGate.rzx(2, 0.3, ZXOrientation.Z_ON_UPPER)
        self.assertEqual(compile_primitive(gate, 3).rotated_sites[0][0], (1, 3))
        mirrored = mirror_placement(identity_placement(3))
        gate = LogicalGate.rzx(1, 0.3, ZXOrientation.Z_ON_LOWER)
        self.assertEqual(compile_primitive(gate, 3, mirrored).rotated_sites[0][0], (1, 3))

    def test_rzx_row_n(self):
        gate = LogicalGate.rzx(1, 0.3, ZXOrientation.Z_ON_LOWER)
        self.assertEqual(compile_primitive(gate, 3).rotated_sites[0][0], (3, 3))

    def test_angle_normalized(self):
        plan = compile_primitive(LogicalGate.rz(1, -math.pi / 2), 2)
        self.assertAlmostEqual(plan.rotated_sites[0][1], 3 * math.pi / 2)

    def test_derived_gate_rejected(self):
        with self.assertRaises(CircuitValidationError):
            compile_primitive(LogicalGate.h(1), 2)

    def test_single_slab_unitaries(self):
        # 10 angoli casuali per ogni gate primitivo, n = 2..4
        rng = np.random.default_rng(13)
        for n in (2, 3, 4):
            for _ in range(10):
                candidates = [LogicalGate.rz(k, rng.uniform(0, 2 * math.pi)) for k in range(1, n + 1)]
                candidates += [LogicalGate.rx(k, rng.uniform(0, 2 * math.pi)) for k in range(1, n + 1)]
                for orientation in ZXOrientation:
                    candidates += [LogicalGate.rzx(k, rng.uniform(0, 2 * math.pi), orientation) for k in range(1, n)]
                for gate in candidates:
                    pattern = assemble(n, [compile_primitive(gate, n)])
                    expected = mirror_matrix(n) @ LogicalCircuit(n, [gate]).unitary()
                    passed, _ = unitary_equiv(extract_unitary(pattern), expected, tol=1e-9)
                    self.assertTrue(passed, msg=f"n={n} {gate.describe()}")


class TestCompileCircuit(unittest.TestCase):
    """Compilazione completa."""

    def test_empty_circuit(self):
        geometry, pattern = compile_circuit(LogicalCircuit(2, []))
        self.assertEqual((geometry.rows, geometry.cols), (2, 1))
        self.assertEqual(pattern.measured_count, 0)

    def test_single_rotation(self):
        theta = 0.7
        geometry, pattern = compile_circuit(LogicalCircuit(2, [LogicalGate.rz(1, theta)]))
        self.assertEqual((geometry.rows, geometry.cols), (2, 7))
        self.assertEqual(slab_count(pattern), 2)
        passed, _ = unitary_equiv(extract_unitary(pattern), gates.embed(gates.rz(theta), [1], 2), tol=1e-9)
        self.assertTrue(passed)

    def test_without_parity_fix(self):
        geometry, pattern = compile_circuit(LogicalCircuit(2, [LogicalGate.rz(1, 0.7)]), fix_parity=False)
        self.assertEqual(geometry.cols, 4)

    def test_all_x_slab_is_swap(self):
        pattern = assemble(2, [all_x_slab(2)])
        passed, _ = unitary_equiv(extract_unitary(pattern), gates.SWAP, tol=1e-10)
        self.assertTrue(passed)

    def test_zero_width_rejected(self):
        with self.assertRaises(CircuitValidationError):
            compile_circuit(LogicalCircuit(0, []))

    def test_structure_of_random_circuits(self):
        rng = np.random.default_rng(17)
        for n in (2, 3):
            circuit = random_circuit(n, 4, rng)
            geometry, pattern = compile_circuit(circuit)
            slabs = slab_count(pattern)
            self.assertEqual(slabs % 2, 0)
            self.assertEqual(geometry.cols, slabs * (n + 1) + 1)
            self.assertIs(geometry.kind, ClusterKind.OPEN_ENDED)
            self.assertTrue(pattern.is_adaptive_ready())
            for step in pattern.steps:
                self.assertTrue(0.0 <= step.angle < 2 * math.pi)

    def test_round_trip_random_circuits(self):
        rng = np.random.default_rng(23)
        for n in (2, 3):
            for _ in range(10):
                circuit = random_circuit(n, int(rng.integers(1, 7)), rng)
                _, pattern = compile_circuit(circuit)
                passed, _ = unitary_equiv(extract_unitary(pattern), circuit.unitary(), tol=1e-8)
                self.assertTrue(passed, msg=[g.describe() for g in circuit.gates])


class TestCorollary(unittest.TestCase):
    """Scala di Ctrl-Z ed emulazione del cluster chiuso."""

    def test_cz_ladder_two_rows(self):
        _, pattern = build_cz_ladder(2)
        output = run_positive_branch(pattern)
        expected = StateVector(np.array([0.5, 0.5, 0.5, -0.5]), output.labels)
        self.assertGreater(fidelity(output, expected), 1 - 1e-10)

    def test_cz_ladder_larger(self):
        for n in (3, 4):
            _, pattern = build_cz_ladder(n)
            output = run_positive_branch(pattern)
            expected = StateVector(cz_ladder_matrix(n) @ init_plus(n, output.labels).amplitudes, output.labels)
            self.assertGreater(fidelity(output, expected), 1 - 1e-10)

    def test_cz_ladder_requires_two_rows(self):
        with self.assertRaises(CircuitValidationError):
            build_cz_ladder(1)

    def test_closed_cluster_emulation(self):
        for n, m in ((2, 2), (2, 3), (3, 2)):
            _, pattern = emulate_closed_cluster(n, m)
            output = run_positive_branch(pattern)
            expected = closed_cluster_state(n, m).with_labels(output.labels)
            self.assertGreater(fidelity(output, expected), 1 - 1e-10, msg=f"{n}x{m}")

    def test_prefix_columns_match_concatenation(self):
        n, m = 2, 3
        plans = [compile_primitive(LogicalGate.rx(1, 0.4), n), all_x_slab(n)]
        direct = assemble(n, plans, prefix_columns=m - 1)
        joined = concatenate(all_x_pattern(n, m), assemble(n, plans))
        self.assertEqual(direct.geometry, joined.geometry)
        self.assertEqual(direct.angles(), joined.angles())
        self.assertEqual(slab_count(direct, prefix_columns=m - 1), 2)

    def test_closed_oracle_differs_from_open(self):
        # lo stato chiuso non coincide con quello open-ended della stessa geometria
        closed = closed_cluster_state(2, 2)
        open_output = run_positive_branch(all_x_pattern(2, 2)).with_labels(closed.labels)
        self.assertLess(fidelity(closed, open_output), 1 - 1e-3)
        self.assertEqual(Geometry(2, 2, ClusterKind.CLOSED).kind, ClusterKind.CLOSED)


if __name__ == "__main__":
    unittest.main()
