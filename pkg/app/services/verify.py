"""
Verify Service - Oracoli a forza bruta e verifica delle identità algebriche.

Ogni verifica produce un CheckRecord (nome, parametri, deviazione massima, esito);
run_suite li raccoglie in un VerificationReport.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from app.core import gates
from app.core.circuit import LogicalCircuit, LogicalGate, ZXOrientation, decompose
from app.core.cluster import ClusterKind, Geometry, InputSpec, build_state
from app.core.compiler import (
    assemble,
    build_cz_ladder,
    compile_primitive,
    emulate_closed_cluster,
)
from app.core.config import get_settings
from app.core.errors import InvalidStateError
from app.core.logger import get_logger
from app.core.pattern import all_x_pattern, extract_unitary, measure_site, run_positive_branch
from app.core.statevec import StateVector, apply_operator, fidelity, init_plus

# Logger
logger = get_logger(__name__)

settings = get_settings()


# ---------------------------------------------------------------------------
# Matrici di riferimento
# ---------------------------------------------------------------------------

def cz_ladder_matrix(n: int) -> np.ndarray:
    """Prodotto dei Ctrl-Z tra qubit adiacenti (diagonale)."""
    result = np.eye(2 ** n, dtype=np.complex128)
    for k in range(1, n):
        result = gates.embed(gates.CZ, [k, k + 1], n) @ result
    return result


def hadamard_all(n: int) -> np.ndarray:
    result = np.ones((1, 1), dtype=np.complex128)
    for _ in range(n):
        result = np.kron(gates.H, result)
    return result


def c_n_matrix(n: int) -> np.ndarray:
    """
    Operatore di strato C_n: scala di Ctrl-Z seguita da Hadamard su tutte le righe.
    """
    if not 1 <= n <= 6:
        raise InvalidStateError(f"c_n_matrix supporta 1 <= n <= 6 (n={n})")
    return hadamard_all(n) @ cz_ladder_matrix(n)


def mirror_matrix(n: int) -> np.ndarray:
    """Permutazione che inverte l'ordine dei qubit (riga i -> riga n+1-i)."""
    dim = 2 ** n
    result = np.zeros((dim, dim), dtype=np.complex128)
    for index in range(dim):
        reversed_index = int(format(index, f"0{n}b")[::-1], 2) if n > 0 else 0
        result[reversed_index, index] = 1.0
    return result


def pauli(name: str, q: int, n: int) -> np.ndarray:
    """Pauli singolo ('x', 'y', 'z') sul qubit q di n."""
    return gates.pauli_string(n, **{name: [q]})


def _deviation(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b))) if a.size else 0.0


# ---------------------------------------------------------------------------
# Specchio e identità algebriche
# ---------------------------------------------------------------------------

def mirror_deviations(n: int) -> Tuple[float, float, complex]:
    """
    Returns:
        (deviazione da lambda*M, deviazione delle coniugazioni di Z e X, lambda)
    """
    power = np.linalg.matrix_power(c_n_matrix(n), n + 1)
    mirror = mirror_matrix(n)

    flat = power.reshape(-1)
    index = int(np.argmax(np.abs(flat) > 1e-9))
    phase = complex(flat[index] / mirror.reshape(-1)[index]) if mirror.reshape(-1)[index] != 0 else 0j
    proportional = _deviation(power, phase * mirror) if phase != 0 else float("inf")

    conjugation = 0.0
    for i in range(1, n + 1):
        for name in ("z", "x"):
            lhs = power @ pauli(name, i, n) @ power.conj().T
            conjugation = max(conjugation, _deviation(lhs, pauli(name, n + 1 - i, n)))
    return proportional, conjugation, phase


def mirror_check(n: int) -> Tuple[bool, complex]:
    """
    Verifica che C_n^{n+1} sia proporzionale al mirror e che coniughi Z_i, X_i
    nei corrispondenti sulla riga n+1-i.
    """
    proportional, conjugation, phase = mirror_deviations(n)
    tolerance = settings.identity_tolerance
    passed = proportional < tolerance and conjugation < tolerance
    logger.debug(f"Mirror n={n}: lambda={phase:.6f}, deviazioni {proportional:.2e}/{conjugation:.2e}")
    return passed, phase


def commutation_deviations(seed: int = 0) -> Dict[str, float]:
    """
    Deviazioni delle quattro identità di commutazione di Ctrl-Z, R_Z e H.
    """
    rng = np.random.default_rng(seed)
    cz = gates.CZ
    z1, z2 = pauli("z", 1, 2), pauli("z", 2, 2)
    x1, x2 = pauli("x", 1, 2), pauli("x", 2, 2)

    results = {
        "cz-z": max(_deviation(cz @ z1, z1 @ cz), _deviation(cz @ z2, z2 @ cz)),
        "cz-x": max(_deviation(cz @ x1, x1 @ z2 @ cz), _deviation(cz @ x2, x2 @ z1 @ cz)),
    }
    rotation = 0.0
    for theta in rng.uniform(0, 2 * math.pi, size=10):
        for q in (1, 2):
            r = gates.embed(gates.rz(theta), [q], 2)
            rotation = max(rotation, _deviation(cz @ r, r @ cz))
    results["cz-rz"] = rotation
    results["hzh-x"] = _deviation(gates.H @ gates.Z @ gates.H, gates.X)
    return results


def commutation_identities(seed: int = 0) -> List["CheckRecord"]:
    """Report delle identità di commutazione (una voce per identità)."""
    tolerance = settings.commutation_tolerance
    return [
        CheckRecord.build(f"commutation/{name}", {}, deviation, tolerance)
        for name, deviation in commutation_deviations(seed).items()
    ]


def propagation_deviations(n: int, p: int) -> Dict[str, float]:
    """
    Propagazione di Z_1 e Z_n attraverso C_n^{p'} con p' = n-p+2.
    """
    if not (2 <= n and 1 < p < n + 1):
        raise InvalidStateError(f"Parametri di propagazione non validi: n={n}, p={p}")
    power = np.linalg.matrix_power(c_n_matrix(n), n - p + 2)
    row_one = gates.pauli_string(n, z=[n - p + 1], x=[n - p + 2])
    row_n = gates.pauli_string(n, x=[p - 1], z=[p])
    return {
        "row-1": _deviation(power @ pauli("z", 1, n), row_one @ power),
        "row-n": _deviation(power @ pauli("z", n, n), row_n @ power),
    }


def single_step_deviations(n: int) -> Dict[str, float]:
    """
    Passo singolo: C_n Z_1 C_n^dag = X_1, C_n X_1 C_n^dag = Z_1 X_2, e per lo strato
    con Hadamard prima della scala L Z_1 = X_1 Z_2 L.
    """
    if n < 2:
        raise InvalidStateError(f"Il passo singolo richiede n >= 2 (n={n})")
    layer = c_n_matrix(n)
    hadamard_first = cz_ladder_matrix(n) @ hadamard_all(n)
    return {
        "z1-to-x1": _deviation(layer @ pauli("z", 1, n) @ layer.conj().T, pauli("x", 1, n)),
        "x1-to-z1x2": _deviation(layer @ pauli("x", 1, n) @ layer.conj().T,
                                 gates.pauli_string(n, z=[1], x=[2])),
        "hadamard-first": _deviation(hadamard_first @ pauli("z", 1, n),
                                     gates.pauli_string(n, x=[1], z=[2]) @ hadamard_first),
    }


def propagation_check(n: int, p: int) -> bool:
    """Relazioni di propagazione a più passi per (n, p) e relazioni a passo singolo."""
    tolerance = settings.identity_tolerance
    deviations = list(propagation_deviations(n, p).values()) + list(single_step_deviations(n).values())
    return all(d < tolerance for d in deviations)


# ---------------------------------------------------------------------------
# Equivalenza e simulazione diretta
# ---------------------------------------------------------------------------

def unitary_equiv(u: np.ndarray, v: np.ndarray, tol: Optional[float] = None) -> Tuple[bool, complex]:
    """
    Equivalenza a meno di fase globale: |Tr(U^dag V)|/dim >= 1 - tol.

    Returns:
        (esito, fase) con U ~ fase * V
    """
    tol = settings.equivalence_tolerance if tol is None else tol
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        raise InvalidStateError(f"Dimensioni diverse: {u.shape} e {v.shape}")
    dim = u.shape[0]
    trace = complex(np.trace(v.conj().T @ u))
    phase = trace / abs(trace) if abs(trace) > 0 else 1.0 + 0j
    return abs(trace) / dim >= 1 - tol, phase


def aligned_deviation(u: np.ndarray, v: np.ndarray) -> float:
    """Deviazione elemento per elemento dopo l'allineamento della fase."""
    _, phase = unitary_equiv(u, v, tol=1.0)
    return _deviation(u, phase * v)


def oracle_simulate(circuit: LogicalCircuit, input_state: StateVector) -> StateVector:
    """
    Applica direttamente le matrici dei gate (qubit k in posizione k-1).
    """
    circuit.validate()
    if input_state.num_qubits != circuit.n:
        raise InvalidStateError(f"Stato con {input_state.num_qubits} qubit per un circuito di larghezza {circuit.n}")
    amplitudes = input_state.amplitudes
    for gate in circuit.gates:
        amplitudes = apply_operator(amplitudes, circuit.n, [q - 1 for q in gate.qubits], gate.matrix())
    return StateVector(amplitudes, input_state.labels)


def decomposition_deviation(gate: LogicalGate, n: int) -> float:
    target = LogicalCircuit(n, [gate]).unitary()
    product = LogicalCircuit(n, decompose(gate)).unitary()
    return aligned_deviation(product, target)


# ---------------------------------------------------------------------------
# Verifiche sui pattern
# ---------------------------------------------------------------------------

def all_x_deviation(n: int, m: int) -> float:
    """Pattern n x m con angoli 0 contro C_n^{m-1}."""
    expected = np.linalg.matrix_power(c_n_matrix(n), m - 1)
    return aligned_deviation(extract_unitary(all_x_pattern(n, m)), expected)


def single_slab_deviation(gate: LogicalGate, n: int) -> float:
    """Slab singola (rho = identità) contro M * G."""
    pattern = assemble(n, [compile_primitive(gate, n)])
    expected = mirror_matrix(n) @ LogicalCircuit(n, [gate]).unitary()
    return aligned_deviation(extract_unitary(pattern), expected)


def cz_ladder_infidelity(n: int) -> float:
    _, pattern = build_cz_ladder(n)
    output = run_positive_branch(pattern)
    expected = StateVector(cz_ladder_matrix(n) @ init_plus(n, output.labels).amplitudes, output.labels)
    return 1.0 - fidelity(output, expected)


def closed_cluster_state(n: int, m: int) -> StateVector:
    """
    Stato di output del cluster chiuso n x m con misure ad angolo 0 sulle colonne
    operative (costruzione completa, ramo positivo).
    """
    geometry = Geometry(n, m, ClusterKind.CLOSED)
    state = build_state(geometry, InputSpec.standard())
    for site in geometry.operational_sites():
        _, state, _ = measure_site(state, geometry.site_label(site), 0.0, outcome=0)
    return state.reorder(geometry.column_labels(m))


def closed_emulation_infidelity(n: int, m: int) -> float:
    _, pattern = emulate_closed_cluster(n, m)
    output = run_positive_branch(pattern)
    expected = closed_cluster_state(n, m).with_labels(output.labels)
    return 1.0 - fidelity(output, expected)


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------

class CheckRecord(BaseModel):
    """Esito di una singola verifica."""
    name: str
    params: Dict[str, Any] = Field(default_factory=dict)
    max_deviation: float
    tolerance: float
    passed: bool
    detail: str = ""

    @classmethod
    def build(cls, name: str, params: Dict[str, Any], deviation: float, tolerance: float,
              detail: str = "") -> "CheckRecord":
        return cls(name=name, params=params, max_deviation=deviation, tolerance=tolerance,
                   passed=bool(deviation < tolerance), detail=detail)


class VerificationReport(BaseModel):
    """Report della suite di verifica."""
    max_n: int
    seed: int
    records: List[CheckRecord] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    def failures(self) -> List[CheckRecord]:
        return [record for record in self.records if not record.passed]


@dataclass(frozen=True)
class PlannedCheck:
    """Verifica pianificata: run() restituisce (deviazione, dettaglio)."""
    name: str
    params: Dict[str, Any]
    tolerance: float
    run: Callable[[], Tuple[float, str]]

    def execute(self) -> CheckRecord:
        try:
            deviation, detail = self.run()
        except Exception as e:
            logger.error(f"Errore nella verifica {self.name} {self.params}: {str(e)}")
            deviation, detail = float("inf"), f"errore: {str(e)}"
        return CheckRecord.build(self.name, self.params, deviation, self.tolerance, detail)


def _rotation_gates(n: int, rng: np.random.Generator) -> List[Tuple[str, LogicalGate]]:
    result = []
    for k in range(1, n + 1):
        result.append(("rz", LogicalGate.rz(k, rng.uniform(0, 2 * math.pi))))
        result.append(("rx", LogicalGate.rx(k, rng.uniform(0, 2 * math.pi))))
    for k in range(1, n):
        for orientation in ZXOrientation:
            result.append(("rzx", LogicalGate.rzx(k, rng.uniform(0, 2 * math.pi), orientation)))
    return result


def plan_checks(max_n: int, seed: Optional[int] = None) -> List[PlannedCheck]:
    """
    Enumera le verifiche per n fino a max_n (mirror, commutazione, propagazione,
    decomposizioni, pattern con angoli 0, slab singole, scala di Ctrl-Z,
    emulazione del cluster chiuso).
    """
    seed = settings.default_seed if seed is None else seed
    if not 1 <= max_n <= settings.max_verify_n:
        raise InvalidStateError(f"max_n deve essere tra 1 e {settings.max_verify_n} (ricevuto {max_n})")

    identity_tol = settings.identity_tolerance
    extract_tol = settings.extract_unitarity_tolerance
    rng = np.random.default_rng(seed)
    plan: List[PlannedCheck] = []

    for n in range(1, max_n + 1):
        def proportional(n=n):
            deviation, _, phase = mirror_deviations(n)
            return deviation, f"lambda={phase.real:.6f}{phase.imag:+.6f}j"

        def conjugation(n=n):
            return mirror_deviations(n)[1], ""

        plan.append(PlannedCheck("mirror/proportional", {"n": n}, identity_tol, proportional))
        plan.append(PlannedCheck("mirror/conjugation", {"n": n}, identity_tol, conjugation))

    commutation = commutation_deviations(seed)
    for name in commutation:
        plan.append(PlannedCheck(f"commutation/{name}", {}, settings.commutation_tolerance,
                                 lambda name=name: (commutation[name], "")))

    for n in range(2, min(max_n, 4) + 1):
        for p in range(2, n + 1):
            for row in ("row-1", "row-n"):
                plan.append(PlannedCheck(f"propagation/{row}", {"n": n, "p": p}, identity_tol,
                                         lambda n=n, p=p, row=row: (propagation_deviations(n, p)[row], "")))
        for relation in ("z1-to-x1", "x1-to-z1x2", "hadamard-first"):
            plan.append(PlannedCheck(f"single-step/{relation}", {"n": n}, identity_tol,
                                     lambda n=n, relation=relation: (single_step_deviations(n)[relation], "")))

    decompositions = [
        ("h", LogicalGate.h(1), 2),
        ("cnot-down", LogicalGate.cnot(1, 2), 2),
        ("cnot-up", LogicalGate.cnot(2, 1), 2),
        ("swap", LogicalGate.swap(1), 2),
        ("cz", LogicalGate.cz(1), 2),
    ]
    if max_n >= 3:
        decompositions += [("cnot-routed", LogicalGate.cnot(1, 3), 3),
                           ("cnot-routed", LogicalGate.cnot(3, 1), 3)]
    for name, gate, n in decompositions:
        plan.append(PlannedCheck(f"decomposition/{name}", {"n": n, "gate": gate.describe()},
                                 settings.commutation_tolerance,
                                 lambda gate=gate, n=n: (decomposition_deviation(gate, n), "")))

    for n in range(1, min(max_n, 3) + 1):
        for m in range(2, 6):
            plan.append(PlannedCheck("pattern/all-x", {"n": n, "m": m}, identity_tol,
                                     lambda n=n, m=m: (all_x_deviation(n, m), "")))

    for n in range(1, min(max_n, 4) + 1):
        for family, gate in _rotation_gates(n, rng):
            plan.append(PlannedCheck(f"slab/{family}", {"n": n, "gate": gate.describe()}, extract_tol,
                                     lambda gate=gate, n=n: (single_slab_deviation(gate, n), "")))

    for n in range(2, min(max_n, 4) + 1):
        plan.append(PlannedCheck("cz-ladder", {"n": n}, identity_tol,
                                 lambda n=n: (cz_ladder_infidelity(n), "")))

    for n, m in ((2, 2), (2, 3), (3, 2)):
        if n <= max_n:
            plan.append(PlannedCheck("closed-emulation", {"n": n, "m": m}, identity_tol,
                                     lambda n=n, m=m: (closed_emulation_infidelity(n, m), "")))

    return plan


def run_suite(max_n: int, seed: Optional[int] = None) -> VerificationReport:
    """
    Esegue tutte le verifiche pianificate e restituisce il report.
    """
    seed = settings.default_seed if seed is None else seed
    plan = plan_checks(max_n, seed)
    logger.info(f"Avvio verifica: {len(plan)} controlli (max_n={max_n}, seed={seed})")

    with ThreadPoolExecutor(max_workers=settings.max_worker_threads) as executor:
        records = list(executor.map(lambda check: check.execute(), plan))

    report = VerificationReport(max_n=max_n, seed=seed, records=records)
    failures = report.failures()
    if failures:
        logger.warning(f"Verifica completata con {len(failures)} fallimenti su {len(records)}")
    else:
        logger.info(f"Verifica completata: {len(records)} controlli superati")
    return report
