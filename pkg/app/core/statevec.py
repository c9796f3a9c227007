"""
StateVector - Simulatore denso a vettore di stato.

Convenzione sui bit: la posizione k nella lista delle etichette corrisponde al
bit k dell'indice di ampiezza; la prima etichetta è il bit meno significativo.
Le misure rimuovono il qubit misurato dal vettore.
"""

from dataclasses import dataclass, field
from typing import Hashable, List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import get_settings
from app.core.errors import ImpossibleBranchError, InvalidStateError
from app.core.logger import get_logger

# Logger
logger = get_logger(__name__)

settings = get_settings()

Label = Hashable


def apply_operator(amplitudes: np.ndarray, num_qubits: int, positions: Sequence[int],
                   matrix: np.ndarray) -> np.ndarray:
    """
    Applica una matrice 2^k x 2^k alle posizioni di bit indicate.

    Il primo elemento di `positions` è il bit più significativo dell'indice locale
    della matrice. Eventuali assi oltre il primo (es. colonne di una matrice) sono
    trattati come batch.

    Args:
        amplitudes: Array di forma (2^q, ...)
        num_qubits: Numero q di qubit
        positions: Posizioni di bit su cui agisce la matrice
        matrix: Matrice locale

    Returns:
        Nuovo array con la stessa forma di `amplitudes`.
    """
    k = len(positions)
    batch = list(amplitudes.shape[1:])
    psi = amplitudes.reshape([2] * num_qubits + batch)
    axes = [num_qubits - 1 - p for p in positions]
    gate = np.asarray(matrix, dtype=np.complex128).reshape([2] * (2 * k))
    psi = np.tensordot(gate, psi, axes=(list(range(k, 2 * k)), axes))
    psi = np.moveaxis(psi, list(range(k)), axes)
    return psi.reshape(amplitudes.shape)


@dataclass
class StateVector:
    """
    Vettore di ampiezze complesse su un insieme ordinato di etichette.
    """
    amplitudes: np.ndarray
    labels: List[Label] = field(default_factory=list)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        self.labels = list(self.labels)

        if len(set(self.labels)) != len(self.labels):
            raise InvalidStateError(f"Etichette duplicate: {self.labels}")
        if self.amplitudes.size != 2 ** len(self.labels):
            raise InvalidStateError(
                f"Dimensione {self.amplitudes.size} incompatibile con {len(self.labels)} etichette"
            )

        deviation = abs(self.norm() - 1.0)
        if deviation > settings.norm_tolerance:
            raise InvalidStateError(f"Stato non normalizzato (deviazione {deviation:.3e})")

    @classmethod
    def from_amplitudes(cls, amplitudes, labels: Sequence[Label], normalize: bool = True) -> "StateVector":
        """Costruisce uno stato, normalizzando le ampiezze se richiesto."""
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise InvalidStateError("Vettore di ampiezze nullo")
            amps = amps / norm
        return cls(amps, list(labels))

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    def norm(self) -> float:
        """Restituisce la somma dei moduli quadri delle ampiezze."""
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def position(self, label: Label) -> int:
        """Restituisce la posizione di bit di un'etichetta."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidStateError(f"Etichetta sconosciuta: {label}")

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), list(self.labels))

    def with_labels(self, labels: Sequence[Label]) -> "StateVector":
        """Rinomina le etichette posizione per posizione senza toccare le ampiezze."""
        return StateVector(self.amplitudes.copy(), list(labels))

    def reorder(self, labels: Sequence[Label]) -> "StateVector":
        """
        Restituisce lo stesso stato con le etichette nell'ordine richiesto.
        """
        labels = list(labels)
        if set(labels) != set(self.labels) or len(labels) != len(self.labels):
            raise InvalidStateError(f"Insiemi di etichette diversi: {labels} vs {self.labels}")
        if labels == self.labels:
            return self.copy()

        q = self.num_qubits
        psi = self.amplitudes.reshape([2] * q)
        source = [q - 1 - self.labels.index(labels[q - 1 - axis]) for axis in range(q)]
        return StateVector(np.transpose(psi, source).reshape(-1), labels)

    def tensor(self, other: "StateVector") -> "StateVector":
        """Prodotto tensoriale: le etichette di `other` diventano i bit più significativi."""
        if set(self.labels) & set(other.labels):
            raise InvalidStateError("Le etichette dei due stati non sono disgiunte")
        return StateVector(np.kron(other.amplitudes, self.amplitudes), self.labels + other.labels)


@dataclass(frozen=True)
class SingleQubitGate:
    """
    Gate a singolo qubit (matrice 2x2 unitaria).
    """
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.shape != (2, 2):
            raise InvalidStateError(f"Un gate a singolo qubit deve essere 2x2, ricevuto {entries.shape}")
        deviation = np.max(np.abs(entries.conj().T @ entries - np.eye(2)))
        if deviation > settings.gate_unitarity_tolerance:
            raise InvalidStateError(f"Gate non unitario (deviazione {deviation:.3e})")
        object.__setattr__(self, "entries", entries)


def init_plus(q: int, labels: Sequence[Label]) -> StateVector:
    """
    Prepara |+>^q sulle etichette indicate.
    """
    if q < 0 or len(labels) != q:
        raise InvalidStateError(f"Numero di etichette ({len(labels)}) diverso da q={q}")
    return StateVector(np.full(2 ** q, 2 ** (-q / 2), dtype=np.complex128), list(labels))


def basis_state(bits: Sequence[int], labels: Sequence[Label]) -> StateVector:
    """
    Stato della base computazionale; bits[k] è il valore del qubit labels[k].
    """
    if len(bits) != len(labels):
        raise InvalidStateError("Numero di bit diverso dal numero di etichette")
    index = sum(int(bit) << k for k, bit in enumerate(bits))
    amps = np.zeros(2 ** len(labels), dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps, list(labels))


def apply_cz(state: StateVector, a: Label, b: Label) -> StateVector:
    """
    Applica Ctrl-Z tra i qubit a e b (operatore simmetrico).
    """
    if a == b:
        raise InvalidStateError(f"Ctrl-Z richiede due qubit distinti, ricevuto {a}")
    q = state.num_qubits
    pa, pb = state.position(a), state.position(b)

    psi = state.amplitudes.copy().reshape([2] * q)
    index = [slice(None)] * q
    index[q - 1 - pa] = 1
    index[q - 1 - pb] = 1
    psi[tuple(index)] *= -1
    return StateVector(psi.reshape(-1), state.labels)


def apply_single(state: StateVector, q: Label, g) -> StateVector:
    """
    Applica un gate a singolo qubit al qubit q.

    Args:
        state: Stato di partenza
        q: Etichetta del qubit
        g: SingleQubitGate o matrice 2x2 (validata come SingleQubitGate)
    """
    gate = g if isinstance(g, SingleQubitGate) else SingleQubitGate(g)
    position = state.position(q)
    amps = apply_operator(state.amplitudes, state.num_qubits, [position], gate.entries)
    return StateVector(amps, state.labels)


def apply_two(state: StateVector, a: Label, b: Label, matrix: np.ndarray) -> StateVector:
    """
    Applica una matrice 4x4 alla coppia ordinata (a, b); indice locale 2*bit_a + bit_b.
    """
    if a == b:
        raise InvalidStateError(f"Un gate a due qubit richiede qubit distinti, ricevuto {a}")
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (4, 4):
        raise InvalidStateError(f"Un gate a due qubit deve essere 4x4, ricevuto {matrix.shape}")
    deviation = np.max(np.abs(matrix.conj().T @ matrix - np.eye(4)))
    if deviation > settings.gate_unitarity_tolerance:
        raise InvalidStateError(f"Gate non unitario (deviazione {deviation:.3e})")
    positions = [state.position(a), state.position(b)]
    amps = apply_operator(state.amplitudes, state.num_qubits, positions, matrix)
    return StateVector(amps, state.labels)


def _xy_bra(theta: float, outcome: int) -> np.ndarray:
    # <+_theta| per outcome 0, <-_theta| per outcome 1
    sign = 1.0 if outcome == 0 else -1.0
    return np.array([1.0, sign * np.exp(-1j * theta)], dtype=np.complex128) / np.sqrt(2)


def _project(state: StateVector, position: int, theta: float, outcome: int) -> Tuple[np.ndarray, float]:
    q = state.num_qubits
    psi = state.amplitudes.reshape([2] * q)
    reduced = np.tensordot(_xy_bra(theta, outcome), psi, axes=([0], [q - 1 - position])).reshape(-1)
    probability = float(np.vdot(reduced, reduced).real)
    return reduced, probability


def born_probability(state: StateVector, q: Label, theta: float, outcome: int) -> float:
    """Probabilità dell'esito `outcome` misurando q nel piano (X,Y) con angolo theta."""
    _, probability = _project(state, state.position(q), theta, outcome)
    return probability


def project_xy(state: StateVector, q: Label, theta: float, outcome: int) -> Tuple[StateVector, float]:
    """
    Proietta q su |+_theta> (outcome 0) o |-_theta> (outcome 1) e lo rimuove.

    Returns:
        Tupla (stato rinormalizzato senza q, probabilità del ramo)

    Raises:
        ImpossibleBranchError: se il ramo ha probabilità <= branch_threshold
    """
    if outcome not in (0, 1):
        raise InvalidStateError(f"Esito non valido: {outcome}")
    position = state.position(q)
    reduced, probability = _project(state, position, theta, outcome)
    if probability <= settings.branch_threshold:
        raise ImpossibleBranchError(
            f"Ramo impossibile: qubit {q}, angolo {theta:.6f}, esito {outcome} (p={probability:.3e})"
        )
    labels = state.labels[:position] + state.labels[position + 1:]
    return StateVector(reduced / np.sqrt(probability), labels), probability


def measure_xy(state: StateVector, q: Label, theta: float, outcome: Optional[int] = None,
               rng: Optional[np.random.Generator] = None) -> Tuple[int, StateVector]:
    """
    Misura proiettiva nel piano (X,Y) nella base {|+_theta>, |-_theta>}.

    Args:
        state: Stato da misurare
        q: Etichetta del qubit misurato
        theta: Angolo di misura in radianti
        outcome: Esito forzato (0 o 1); se None l'esito viene estratto da rng
        rng: Generatore casuale esplicito, obbligatorio se outcome è None

    Returns:
        Tupla (esito, stato senza il qubit misurato)
    """
    if outcome is None:
        if rng is None:
            raise InvalidStateError("Serve un generatore casuale esplicito o un esito forzato")
        p0 = born_probability(state, q, theta, 0)
        outcome = 0 if rng.random() < p0 else 1

    new_state, probability = project_xy(state, q, theta, outcome)
    logger.debug(f"Misura qubit {q} angolo {theta:.6f}: esito {outcome} (p={probability:.6f})")
    return outcome, new_state


def overlap(a: StateVector, b: StateVector) -> complex:
    """
    Restituisce <a|b>; se l'ordine delle etichette differisce, b viene riordinato.
    """
    if set(a.labels) != set(b.labels):
        raise InvalidStateError(f"Insiemi di etichette diversi: {a.labels} vs {b.labels}")
    if b.labels != a.labels:
        b = b.reorder(a.labels)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Modulo dell'overlap, insensibile alla fase globale."""
    return abs(overlap(a, b))


def random_state(labels: Sequence[Label], rng: np.random.Generator) -> StateVector:
    """Stato casuale (distribuzione gaussiana complessa normalizzata)."""
    dim = 2 ** len(labels)
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector.from_amplitudes(amps, labels)
