"""
Circuiti logici sull'insieme universale {R_Z, R_X, R_ZX} e gate derivati
{H, CNOT, SWAP, CZ}, con le decomposizioni nei gate primitivi.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from app.core import gates
from app.core.errors import CircuitValidationError
from app.core.logger import get_logger

# Logger
logger = get_logger(__name__)


class GateKind(str, Enum):
    RZ = "rz"
    RX = "rx"
    RZX = "rzx"
    H = "h"
    CNOT = "cnot"
    SWAP = "swap"
    CZ = "cz"


class ZXOrientation(str, Enum):
    """Qubit della coppia (k, k+1) su cui agisce il fattore Z."""
    Z_ON_LOWER = "z-lower"
    Z_ON_UPPER = "z-upper"


PRIMITIVE_KINDS = {GateKind.RZ, GateKind.RX, GateKind.RZX}
ANGLE_KINDS = PRIMITIVE_KINDS


@dataclass(frozen=True)
class LogicalGate:
    """
    Gate su qubit logici 1..n; angoli in radianti.
    """
    kind: GateKind
    qubits: Tuple[int, ...]
    angle: float = 0.0
    orientation: Optional[ZXOrientation] = None

    @classmethod
    def rz(cls, k: int, theta: float) -> "LogicalGate":
        return cls(GateKind.RZ, (k,), theta)

    @classmethod
    def rx(cls, k: int, theta: float) -> "LogicalGate":
        return cls(GateKind.RX, (k,), theta)

    @classmethod
    def rzx(cls, k: int, theta: float,
            orientation: ZXOrientation = ZXOrientation.Z_ON_LOWER) -> "LogicalGate":
        return cls(GateKind.RZX, (k, k + 1), theta, ZXOrientation(orientation))

    @classmethod
    def h(cls, k: int) -> "LogicalGate":
        return cls(GateKind.H, (k,))

    @classmethod
    def cnot(cls, control: int, target: int) -> "LogicalGate":
        return cls(GateKind.CNOT, (control, target))

    @classmethod
    def swap(cls, k: int) -> "LogicalGate":
        return cls(GateKind.SWAP, (k, k + 1))

    @classmethod
    def cz(cls, k: int) -> "LogicalGate":
        return cls(GateKind.CZ, (k, k + 1))

    @property
    def is_primitive(self) -> bool:
        return self.kind in PRIMITIVE_KINDS

    def validate(self, n: int):
        """
        Raises:
            CircuitValidationError: indici fuori da 1..n o coppia non adiacente
        """
        arity = 1 if self.kind in (GateKind.RZ, GateKind.RX, GateKind.H) else 2
        if len(self.qubits) != arity:
            raise CircuitValidationError(f"Il gate {self.kind.value} richiede {arity} qubit, ricevuti {self.qubits}")
        for q in self.qubits:
            if not 1 <= q <= n:
                raise CircuitValidationError(f"Qubit {q} fuori dall'intervallo 1..{n} ({self.kind.value})")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise CircuitValidationError(f"Il gate {self.kind.value} richiede qubit distinti")
        if self.kind in (GateKind.RZX, GateKind.SWAP, GateKind.CZ) and self.qubits[1] != self.qubits[0] + 1:
            raise CircuitValidationError(f"Il gate {self.kind.value} agisce solo su coppie (k, k+1): {self.qubits}")
        if self.kind is GateKind.RZX and self.orientation is None:
            raise CircuitValidationError("Il gate rzx richiede un'orientazione")
        if not math.isfinite(self.angle):
            raise CircuitValidationError(f"Angolo non finito: {self.angle}")

    def matrix(self) -> np.ndarray:
        """Matrice locale sui qubit del gate, nell'ordine di `qubits`."""
        if self.kind is GateKind.RZ:
            return gates.rz(self.angle)
        if self.kind is GateKind.RX:
            return gates.rx(self.angle)
        if self.kind is GateKind.RZX:
            return gates.rzx(self.angle, z_first=self.orientation is ZXOrientation.Z_ON_LOWER)
        if self.kind is GateKind.H:
            return gates.H
        if self.kind is GateKind.CNOT:
            return gates.CNOT
        if self.kind is GateKind.SWAP:
            return gates.SWAP
        return gates.CZ

    def describe(self) -> str:
        qubits = ",".join(str(q) for q in self.qubits)
        if self.kind is GateKind.RZX:
            return f"rzx({qubits}, {self.angle:.4f}, {self.orientation.value})"
        if self.kind in ANGLE_KINDS:
            return f"{self.kind.value}({qubits}, {self.angle:.4f})"
        return f"{self.kind.value}({qubits})"


@dataclass
class LogicalCircuit:
    """Sequenza ordinata di gate su n qubit logici."""
    n: int
    gates: List[LogicalGate] = field(default_factory=list)

    def validate(self):
        if self.n < 1:
            raise CircuitValidationError(f"Larghezza del circuito non valida: {self.n}")
        for index, gate in enumerate(self.gates):
            try:
                gate.validate(self.n)
            except CircuitValidationError as e:
                raise CircuitValidationError(f"Gate {index}: {e}")

    def unitary(self) -> np.ndarray:
        """Prodotto delle matrici dei gate (il primo gate agisce per primo)."""
        self.validate()
        result = np.eye(2 ** self.n, dtype=np.complex128)
        for gate in self.gates:
            result = gates.embed(gate.matrix(), gate.qubits, self.n) @ result
        return result


def _cnot_adjacent(control: int, target: int) -> List[LogicalGate]:
    # CNOT = e^{i pi/4} R_Z(pi/2)_c R_X(pi/2)_t exp(+i pi/4 Z_c X_t)
    half = math.pi / 2
    if target == control + 1:
        return [LogicalGate.rz(control, half), LogicalGate.rx(target, half),
                LogicalGate.rzx(control, -half, ZXOrientation.Z_ON_LOWER)]
    return [LogicalGate.rz(control, half), LogicalGate.rx(target, half),
            LogicalGate.rzx(target, -half, ZXOrientation.Z_ON_UPPER)]


def _route(control: int, target: int) -> List[LogicalGate]:
    # Porta il target accanto al controllo con una catena di SWAP, poi la disfa
    if control < target:
        swaps = [LogicalGate.swap(j) for j in range(target - 1, control, -1)]
        core = LogicalGate.cnot(control, control + 1)
    else:
        swaps = [LogicalGate.swap(j) for j in range(target, control - 1)]
        core = LogicalGate.cnot(control, control - 1)
    return swaps + [core] + list(reversed(swaps))


def decompose(gate: LogicalGate) -> List[LogicalGate]:
    """
    Espande un gate in una sequenza di primitivi {rz, rx, rzx} uguale al gate a
    meno di una fase globale.
    """
    if gate.is_primitive:
        return [gate]

    if gate.kind is GateKind.H:
        k = gate.qubits[0]
        half = math.pi / 2
        return [LogicalGate.rz(k, half), LogicalGate.rx(k, half), LogicalGate.rz(k, half)]

    if gate.kind is GateKind.CNOT:
        control, target = gate.qubits
        if abs(control - target) == 1:
            return _cnot_adjacent(control, target)
        return [p for g in _route(control, target) for p in decompose(g)]

    k = gate.qubits[0]
    if gate.kind is GateKind.SWAP:
        sequence = [LogicalGate.cnot(k, k + 1), LogicalGate.cnot(k + 1, k), LogicalGate.cnot(k, k + 1)]
    else:
        sequence = [LogicalGate.h(k + 1), LogicalGate.cnot(k, k + 1), LogicalGate.h(k + 1)]
    return [p for g in sequence for p in decompose(g)]


def decompose_circuit(circuit: LogicalCircuit) -> LogicalCircuit:
    """Circuito equivalente composto solo da gate primitivi."""
    circuit.validate()
    primitives = [p for gate in circuit.gates for p in decompose(gate)]
    logger.debug(f"Decomposizione: {len(circuit.gates)} gate -> {len(primitives)} primitivi")
    return LogicalCircuit(circuit.n, primitives)
