"""
Pattern - Pattern di misura su stati cluster ed esecuzione.

Convenzione sugli angoli: un passo con angolo alpha applica R_Z(alpha) al sito e
poi lo teletrasporta, cioè misura nella base {|+_{-alpha}>, |-_{-alpha}>}.

Flusso fisso per griglie rettangolari misurate per colonne: f(i, j) = (i, j+1).
La correzione X di v agisce su f(v), le correzioni Z sui vicini di f(v) diversi
da v.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from app.core.cluster import ClusterKind, ColumnStreamer, Geometry, InputSpec, Site, build_state
from app.core.config import get_settings
from app.core.errors import (
    InvalidStateError,
    PatternNotAdaptiveError,
    PatternValidationError,
    PhaseInconsistencyError,
)
from app.core.gates import X, Z
from app.core.logger import get_logger
from app.core.statevec import StateVector, apply_single, basis_state, born_probability, project_xy

# Logger
logger = get_logger(__name__)

TWO_PI = 2 * math.pi


def normalize_angle(theta: float) -> float:
    """Riporta un angolo nell'intervallo [0, 2*pi)."""
    value = float(theta) % TWO_PI
    return 0.0 if value >= TWO_PI else value


@dataclass(frozen=True)
class MeasurementStep:
    """
    Misura di un sito nel piano (X,Y).

    x_deps/z_deps sono None quando le dipendenze non sono state calcolate.
    """
    site: Site
    angle: float
    x_deps: Optional[FrozenSet[Site]] = None
    z_deps: Optional[FrozenSet[Site]] = None

    @property
    def has_dependencies(self) -> bool:
        return self.x_deps is not None and self.z_deps is not None


@dataclass
class PauliFrame:
    """
    Esponenti dei sottoprodotti di Pauli sui siti di output.
    """
    x: Dict[Site, int] = field(default_factory=dict)
    z: Dict[Site, int] = field(default_factory=dict)

    def compose(self, other: "PauliFrame") -> "PauliFrame":
        sites = set(self.x) | set(self.z) | set(other.x) | set(other.z)
        return PauliFrame(
            x={s: self.x.get(s, 0) ^ other.x.get(s, 0) for s in sites},
            z={s: self.z.get(s, 0) ^ other.z.get(s, 0) for s in sites},
        )

    def is_identity(self) -> bool:
        return not any(self.x.values()) and not any(self.z.values())

    def apply(self, state: StateVector, geometry: Geometry) -> StateVector:
        """
        Applica le correzioni X^x Z^z allo stato di output (etichette dei siti).
        """
        for site, bit in self.x.items():
            if bit:
                state = apply_single(state, geometry.site_label(site), X)
        for site, bit in self.z.items():
            if bit:
                state = apply_single(state, geometry.site_label(site), Z)
        return state


@dataclass
class MeasurementPattern:
    """
    Sequenza ordinata di misure più i siti di output (colonna m).
    """
    geometry: Geometry
    steps: List[MeasurementStep]
    outputs: List[Site] = field(default_factory=list)

    def __post_init__(self):
        if not self.outputs:
            self.outputs = self.geometry.output_sites()
        self.validate()

    @property
    def measured_count(self) -> int:
        return len(self.steps)

    def validate(self):
        """
        Verifica gli invarianti del pattern.

        Raises:
            PatternValidationError: pattern malformato
        """
        g = self.geometry
        if list(self.outputs) != g.output_sites():
            raise PatternValidationError(f"Gli output devono essere i siti della colonna {g.cols}")

        measured = [step.site for step in self.steps]
        if len(set(measured)) != len(measured):
            raise PatternValidationError("Un sito compare in più di un passo")
        if set(measured) != set(g.operational_sites()):
            missing = sorted(set(g.operational_sites()) - set(measured))
            extra = sorted(set(measured) - set(g.operational_sites()))
            raise PatternValidationError(f"Siti misurati non validi (mancanti: {missing}, estranei: {extra})")

        seen = set()
        last_column = 0
        for step in self.steps:
            column = step.site[1]
            if column < last_column:
                raise PatternValidationError(f"Passo {step.site} fuori ordine per colonne")
            last_column = column
            if not (0.0 <= step.angle < TWO_PI) or not math.isfinite(step.angle):
                raise PatternValidationError(f"Angolo {step.angle} del sito {step.site} fuori da [0, 2pi)")
            for deps in (step.x_deps, step.z_deps):
                if deps is not None and not deps <= seen:
                    raise PatternValidationError(f"Il sito {step.site} dipende da passi non precedenti")
            seen.add(step.site)

    def is_adaptive_ready(self) -> bool:
        return all(step.has_dependencies for step in self.steps)

    def angles(self) -> Dict[Site, float]:
        return {step.site: step.angle for step in self.steps}

    def rotated_sites(self) -> List[Tuple[Site, float]]:
        return [(step.site, step.angle) for step in self.steps if step.angle != 0.0]


class Dependencies(NamedTuple):
    x: Dict[Site, FrozenSet[Site]]
    z: Dict[Site, FrozenSet[Site]]


def flow_dependencies(geometry: Geometry) -> Dependencies:
    """
    Insiemi di dipendenza X e Z di ogni sito (compresi gli output) per il flusso fisso.
    """
    x_deps: Dict[Site, set] = {site: set() for site in geometry.sites()}
    z_deps: Dict[Site, set] = {site: set() for site in geometry.sites()}

    for v in geometry.operational_sites():
        target = (v[0], v[1] + 1)
        x_deps[target].add(v)
        for u in geometry.neighbors(target):
            if u != v:
                z_deps[u].add(v)

    return Dependencies(
        x={site: frozenset(deps) for site, deps in x_deps.items()},
        z={site: frozenset(deps) for site, deps in z_deps.items()},
    )


def build_pattern(geometry: Geometry, angles: Optional[Dict[Site, float]] = None,
                  with_flow: bool = True) -> MeasurementPattern:
    """
    Pattern con un passo per ogni sito operativo in ordine per colonne.

    Args:
        geometry: Geometria del pattern
        angles: Angoli per sito (default 0), normalizzati in [0, 2pi)
        with_flow: Se True popola le dipendenze del flusso fisso
    """
    angles = angles or {}
    operational = set(geometry.operational_sites())
    unknown = [site for site in angles if site not in operational]
    if unknown:
        raise PatternValidationError(f"Angoli assegnati a siti non operativi: {unknown}")

    deps = flow_dependencies(geometry) if with_flow else None
    steps = []
    for site in geometry.operational_sites():
        steps.append(MeasurementStep(
            site=site,
            angle=normalize_angle(angles.get(site, 0.0)),
            x_deps=deps.x[site] if deps else None,
            z_deps=deps.z[site] if deps else None,
        ))
    return MeasurementPattern(geometry, steps)


def all_x_pattern(rows: int, cols: int, kind: ClusterKind = ClusterKind.OPEN_ENDED) -> MeasurementPattern:
    """Pattern con tutti gli angoli a 0 (misure X)."""
    return build_pattern(Geometry(rows, cols, kind))


def concatenate(first: MeasurementPattern, second: MeasurementPattern) -> MeasurementPattern:
    """
    Concatena due pattern open-ended della stessa altezza: la colonna di input del
    secondo coincide con la colonna di output del primo.
    """
    g1, g2 = first.geometry, second.geometry
    if g1.rows != g2.rows:
        raise PatternValidationError(f"Altezze diverse: {g1.rows} e {g2.rows}")
    if g1.kind is not ClusterKind.OPEN_ENDED or g2.kind is not ClusterKind.OPEN_ENDED:
        raise PatternValidationError("Si possono concatenare solo pattern open-ended")

    shift = g1.cols - 1
    geometry = Geometry(g1.rows, g1.cols + g2.cols - 1, ClusterKind.OPEN_ENDED)
    angles = first.angles()
    angles.update({(i, j + shift): angle for (i, j), angle in second.angles().items()})
    with_flow = first.is_adaptive_ready() and second.is_adaptive_ready()
    return build_pattern(geometry, angles, with_flow=with_flow)


def measure_site(state: StateVector, label: int, angle: float, outcome: Optional[int] = None,
                 rng: Optional[np.random.Generator] = None) -> Tuple[int, StateVector, float]:
    """
    Misura un sito con l'angolo del pattern (base |+-_{-angle}>).

    Returns:
        Tupla (esito, stato senza il sito, probabilità dell'esito)
    """
    basis_angle = -angle
    if outcome is None:
        if rng is None:
            raise InvalidStateError("Serve un generatore casuale esplicito o un esito forzato")
        p0 = born_probability(state, label, basis_angle, 0)
        outcome = 0 if rng.random() < p0 else 1
    new_state, probability = project_xy(state, label, basis_angle, outcome)
    return outcome, new_state, probability


@dataclass
class ExecutionTrace:
    """
    Risultato dell'esecuzione di un pattern.
    """
    state: StateVector
    outcomes: List[int]
    frame: PauliFrame
    branch_probability: float
    peak_live_qubits: int

    def corrected(self, geometry: Geometry) -> StateVector:
        """Stato di output dopo l'applicazione delle correzioni del frame."""
        return self.frame.apply(self.state, geometry)


def _output_frame(pattern: MeasurementPattern, outcomes: Dict[Site, int]) -> PauliFrame:
    deps = flow_dependencies(pattern.geometry)
    frame = PauliFrame()
    for site in pattern.outputs:
        frame.x[site] = sum(outcomes[v] for v in deps.x[site]) % 2
        frame.z[site] = sum(outcomes[v] for v in deps.z[site]) % 2
    return frame


def execute_pattern(pattern: MeasurementPattern, input_spec: Optional[InputSpec] = None,
                    adaptive: bool = False, forced: Sequence[int] = (),
                    rng: Optional[np.random.Generator] = None, streaming: bool = True) -> ExecutionTrace:
    """
    Esegue un pattern.

    In modalità non adattiva ogni esito non forzato vale 0 (ramo positivo). In
    modalità adattiva gli angoli sono corretti con (-1)^{s_x} alpha + s_z pi e gli
    esiti oltre il prefisso `forced` sono estratti da `rng`.

    Args:
        pattern: Pattern da eseguire
        input_spec: Stato di input (default |+>^n)
        adaptive: Abilita il feed-forward
        forced: Prefisso di esiti forzati, nell'ordine dei passi
        rng: Generatore casuale per gli esiti non forzati (modalità adattiva)
        streaming: Se False costruisce prima l'intero stato cluster

    Returns:
        ExecutionTrace con lo stato di output (riga k in posizione k-1)
    """
    if adaptive and not pattern.is_adaptive_ready():
        raise PatternNotAdaptiveError("Il pattern non contiene le dipendenze per il feed-forward")
    if adaptive and rng is None and len(forced) < pattern.measured_count:
        raise InvalidStateError("La modalità adattiva richiede un generatore casuale esplicito")

    g = pattern.geometry
    input_spec = input_spec or InputSpec.standard()
    outcomes: Dict[Site, int] = {}
    ordered: List[int] = []
    probability = 1.0

    def run_step(state: StateVector, step: MeasurementStep) -> StateVector:
        nonlocal probability
        index = len(ordered)
        angle = step.angle
        if adaptive:
            s_x = sum(outcomes[v] for v in step.x_deps) % 2
            s_z = sum(outcomes[v] for v in step.z_deps) % 2
            angle = (-1) ** s_x * angle + s_z * math.pi

        if index < len(forced):
            outcome = forced[index]
        elif adaptive:
            outcome = None
        else:
            outcome = 0

        outcome, state, p = measure_site(state, g.site_label(step.site), angle, outcome, rng)
        outcomes[step.site] = outcome
        ordered.append(outcome)
        probability *= p
        return state

    if streaming:
        by_column: Dict[int, List[MeasurementStep]] = {}
        for step in pattern.steps:
            by_column.setdefault(step.site[1], []).append(step)

        def consumer(column: int, state: StateVector, labels: List[int]) -> StateVector:
            for step in by_column.get(column, []):
                state = run_step(state, step)
            return state

        streamer = ColumnStreamer(g, input_spec)
        output = streamer.run(consumer)
        peak = streamer.peak_live_qubits
    else:
        state = build_state(g, input_spec)
        peak = state.num_qubits
        for step in pattern.steps:
            state = run_step(state, step)
        output = state.reorder(g.column_labels(g.cols))

    frame = _output_frame(pattern, outcomes)
    logger.debug(f"Pattern {g.rows}x{g.cols} eseguito: {len(ordered)} misure, p={probability:.3e}")
    return ExecutionTrace(output, ordered, frame, probability, peak)


def run_positive_branch(pattern: MeasurementPattern, input_spec: Optional[InputSpec] = None,
                        streaming: bool = True) -> StateVector:
    """Esegue il pattern forzando tutti gli esiti a 0."""
    return execute_pattern(pattern, input_spec, streaming=streaming).state


class AdaptiveResult(NamedTuple):
    state: StateVector
    outcomes: List[int]
    frame: PauliFrame


def run_adaptive(pattern: MeasurementPattern, input_spec: Optional[InputSpec] = None,
                 rng: Optional[np.random.Generator] = None, forced: Sequence[int] = (),
                 streaming: bool = True) -> AdaptiveResult:
    """
    Esecuzione con feed-forward; restituisce lo stato grezzo, gli esiti e il frame residuo.
    """
    trace = execute_pattern(pattern, input_spec, adaptive=True, forced=forced, rng=rng, streaming=streaming)
    return AdaptiveResult(trace.state, trace.outcomes, trace.frame)


def _basis_column(pattern: MeasurementPattern, index: int) -> np.ndarray:
    n = pattern.geometry.rows
    bits = [(index >> k) & 1 for k in range(n)]
    trace = execute_pattern(pattern, InputSpec.generic(basis_state(bits, list(range(n)))))
    return trace.state.amplitudes * math.sqrt(trace.branch_probability)


def extract_unitary(pattern: MeasurementPattern, max_workers: Optional[int] = None) -> np.ndarray:
    """
    Matrice implementata dal ramo positivo del pattern.

    Le colonne sono le uscite sugli input di base pesate con sqrt(p) del ramo; la
    matrice viene riscalata a norma di Frobenius sqrt(2^n) e la fase fissata sul
    primo elemento non nullo. Il risultato non dipende da max_workers (default:
    max_worker_threads).

    Raises:
        PhaseInconsistencyError: se la matrice ottenuta non è unitaria
    """
    settings = get_settings()
    n = pattern.geometry.rows
    if n > settings.max_extract_n:
        raise InvalidStateError(f"extract_unitary supporta al più {settings.max_extract_n} righe (n={n})")

    if max_workers is not None and max_workers < 1:
        raise InvalidStateError(f"max_workers deve essere >= 1 (ricevuto {max_workers})")

    dim = 2 ** n
    with ThreadPoolExecutor(max_workers=max_workers or settings.max_worker_threads) as executor:
        columns = list(executor.map(lambda index: _basis_column(pattern, index), range(dim)))

    matrix = np.column_stack(columns)
    matrix = matrix * (math.sqrt(dim) / np.linalg.norm(matrix))

    flat = matrix.reshape(-1)
    leading = flat[np.argmax(np.abs(flat) > 1e-9)]
    matrix = matrix * (abs(leading) / leading)

    deviation = float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(dim))))
    if deviation > settings.extract_unitarity_tolerance:
        raise PhaseInconsistencyError(f"Matrice estratta non unitaria (deviazione {deviation:.3e})")
    return matrix
