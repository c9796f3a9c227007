"""
Compiler - Da circuiti logici a pattern di misura su stati cluster open-ended.

Ogni gate primitivo diventa una slab di n+1 colonne operative con un solo sito
ruotato. Una slab con tutti gli angoli a 0 implementa C_n^{n+1}, proporzionale
all'inversione dell'ordine delle righe (mirror). La mappa di posizionamento rho
(riga fisica di ogni qubit logico all'ingresso della slab) si alterna quindi tra
identità e mirror.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.circuit import GateKind, LogicalCircuit, LogicalGate, ZXOrientation, decompose_circuit
from app.core.cluster import ClusterKind, Geometry, Site
from app.core.errors import CircuitValidationError
from app.core.logger import get_logger
from app.core.pattern import MeasurementPattern, all_x_pattern, build_pattern, concatenate, normalize_angle

# Logger
logger = get_logger(__name__)

Placement = Tuple[int, ...]


def identity_placement(n: int) -> Placement:
    """rho(k) = k, indicizzata come placement[k-1]."""
    return tuple(range(1, n + 1))


def mirror_placement(placement: Placement) -> Placement:
    """Posizionamento dopo una slab: rho'(k) = n+1-rho(k)."""
    n = len(placement)
    return tuple(n + 1 - row for row in placement)


@dataclass
class SlabPlan:
    """
    Blocco di n+1 colonne operative che realizza un gate primitivo seguito dal mirror.

    rotated_sites usa colonne locali 1..n+1; gli altri siti hanno angolo 0.
    """
    n: int
    rotated_sites: List[Tuple[Site, float]] = field(default_factory=list)
    mirror: bool = True
    gate: Optional[LogicalGate] = None

    @property
    def columns(self) -> int:
        return self.n + 1


def compile_primitive(gate: LogicalGate, n: int, placement: Optional[Placement] = None) -> SlabPlan:
    """
    Posiziona un gate primitivo in una slab.

    - rz(k): sito (rho(k), 1)
    - rx(k): sito (rho'(k), n+1)
    - rzx: con zr = rho'(qubit Z) e xr = rho'(qubit X), sito (1, n-zr+1) se
      xr = zr+1, sito (n, zr) se xr = zr-1

    Raises:
        CircuitValidationError: gate non primitivo o coppia non adiacente dopo il mirror
    """
    placement = tuple(placement) if placement is not None else identity_placement(n)
    if sorted(placement) != list(range(1, n + 1)):
        raise CircuitValidationError(f"Posizionamento non valido: {placement}")
    if not gate.is_primitive:
        raise CircuitValidationError(f"Il gate {gate.kind.value} non è primitivo: usare decompose")
    gate.validate(n)

    after = mirror_placement(placement)
    angle = normalize_angle(gate.angle)

    if gate.kind is GateKind.RZ:
        site = (placement[gate.qubits[0] - 1], 1)
    elif gate.kind is GateKind.RX:
        site = (after[gate.qubits[0] - 1], n + 1)
    else:
        lower, upper = gate.qubits
        z_qubit, x_qubit = (lower, upper) if gate.orientation is ZXOrientation.Z_ON_LOWER else (upper, lower)
        zr, xr = after[z_qubit - 1], after[x_qubit - 1]
        if xr == zr + 1:
            site = (1, n - zr + 1)
        elif xr == zr - 1:
            site = (n, zr)
        else:
            raise CircuitValidationError(f"Righe fisiche non adiacenti per rzx: Z su {zr}, X su {xr}")

    logger.debug(f"Slab per {gate.describe()}: sito {site}, angolo {angle:.6f}")
    return SlabPlan(n, [(site, angle)], True, gate)


def all_x_slab(n: int) -> SlabPlan:
    """Slab senza rotazioni (solo mirror)."""
    return SlabPlan(n)


def assemble(n: int, plans: Sequence[SlabPlan], prefix_columns: int = 0) -> MeasurementPattern:
    """
    Unisce le slab in un unico pattern open-ended con dipendenze di flusso.

    Args:
        n: Numero di righe
        plans: Slab in ordine
        prefix_columns: Colonne operative iniziali con angolo 0 prima delle slab
    """
    cols = prefix_columns + len(plans) * (n + 1) + 1
    angles: Dict[Site, float] = {}
    offset = prefix_columns
    for plan in plans:
        if plan.n != n:
            raise CircuitValidationError(f"Slab con {plan.n} righe in un pattern con {n} righe")
        for (i, j), angle in plan.rotated_sites:
            angles[(i, j + offset)] = angle
        offset += plan.columns
    return build_pattern(Geometry(n, cols, ClusterKind.OPEN_ENDED), angles, with_flow=True)


def slab_count(pattern: MeasurementPattern, prefix_columns: int = 0) -> int:
    """Numero di slab di un pattern prodotto da assemble."""
    n = pattern.geometry.rows
    return (pattern.geometry.cols - 1 - prefix_columns) // (n + 1)


def compile_circuit(circuit: LogicalCircuit, fix_parity: bool = True) -> Tuple[Geometry, MeasurementPattern]:
    """
    Compila un circuito in un pattern open-ended n x (S(n+1)+1).

    Con fix_parity=True e S dispari viene aggiunta una slab senza rotazioni, così
    la permutazione complessiva è l'identità.
    """
    circuit.validate()
    n = circuit.n
    primitives = decompose_circuit(circuit).gates

    placement = identity_placement(n)
    plans: List[SlabPlan] = []
    for gate in primitives:
        plans.append(compile_primitive(gate, n, placement))
        placement = mirror_placement(placement)

    if fix_parity and len(plans) % 2 == 1:
        plans.append(all_x_slab(n))

    pattern = assemble(n, plans)
    logger.info(
        f"Circuito compilato: {len(circuit.gates)} gate, {len(primitives)} primitivi, "
        f"{len(plans)} slab, geometria {n}x{pattern.geometry.cols}"
    )
    return pattern.geometry, pattern


def build_cz_ladder(n: int) -> Tuple[Geometry, MeasurementPattern]:
    """
    Pattern che implementa il prodotto dei Ctrl-Z tra righe adiacenti; sull'input
    |+>^n produce lo stato a scala di Ctrl-Z.
    """
    if n < 2:
        raise CircuitValidationError(f"La scala di Ctrl-Z richiede n >= 2 (n={n})")
    circuit = LogicalCircuit(n, [LogicalGate.cz(k) for k in range(1, n)])
    return compile_circuit(circuit)


def emulate_closed_cluster(n: int, m: int) -> Tuple[Geometry, MeasurementPattern]:
    """
    Pattern open-ended equivalente allo stato cluster chiuso n x m misurato con
    angoli 0 sulle colonne operative: pattern n x m seguito dalla scala di Ctrl-Z.
    """
    if n < 2 or m < 2:
        raise CircuitValidationError(f"Emulazione definita per n >= 2 e m >= 2 (n={n}, m={m})")
    _, ladder = build_cz_ladder(n)
    pattern = concatenate(all_x_pattern(n, m), ladder)
    return pattern.geometry, pattern
