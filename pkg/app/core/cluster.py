"""
Cluster - Geometrie e stati cluster (chiusi e open-ended).

Il sito (i, j) (riga i, colonna j, entrambi 1-based) ha etichetta (j-1)*n + i.
La colonna 1 è la colonna di input, la colonna m quella di output.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Tuple

from app.core.errors import ColumnIncompleteError, InvalidStateError
from app.core.logger import get_logger
from app.core.statevec import StateVector, apply_cz, init_plus

# Logger
logger = get_logger(__name__)

Site = Tuple[int, int]
Edge = Tuple[Site, Site]


class ClusterKind(str, Enum):
    """Tipo di stato cluster."""
    CLOSED = "closed"
    OPEN_ENDED = "open-ended"


@dataclass(frozen=True)
class Geometry:
    """
    Griglia n x m di qubit.
    """
    rows: int
    cols: int
    kind: ClusterKind = ClusterKind.OPEN_ENDED

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise InvalidStateError(f"Geometria non valida: {self.rows}x{self.cols}")
        object.__setattr__(self, "kind", ClusterKind(self.kind))

    @property
    def input_column(self) -> int:
        return 1

    @property
    def output_column(self) -> int:
        return self.cols

    def contains(self, site: Site) -> bool:
        i, j = site
        return 1 <= i <= self.rows and 1 <= j <= self.cols

    def site_label(self, site: Site) -> int:
        if not self.contains(site):
            raise InvalidStateError(f"Sito {site} fuori dalla geometria {self.rows}x{self.cols}")
        i, j = site
        return (j - 1) * self.rows + i

    def site_of(self, label: int) -> Site:
        if label < 1 or label > self.rows * self.cols:
            raise InvalidStateError(f"Etichetta {label} fuori dalla geometria")
        j, i = divmod(label - 1, self.rows)
        return i + 1, j + 1

    def column_sites(self, j: int) -> List[Site]:
        return [(i, j) for i in range(1, self.rows + 1)]

    def column_labels(self, j: int) -> List[int]:
        return [self.site_label(site) for site in self.column_sites(j)]

    def sites(self) -> List[Site]:
        """Tutti i siti in ordine colonna per colonna."""
        return [site for j in range(1, self.cols + 1) for site in self.column_sites(j)]

    def operational_sites(self) -> List[Site]:
        return [site for j in range(1, self.cols) for site in self.column_sites(j)]

    def output_sites(self) -> List[Site]:
        return self.column_sites(self.cols)

    def has_vertical_edges(self, j: int) -> bool:
        last = self.cols if self.kind is ClusterKind.CLOSED else self.cols - 1
        return 1 <= j <= last

    def neighbors(self, site: Site) -> List[Site]:
        """Vicini del sito secondo le regole degli archi della geometria."""
        i, j = site
        result = []
        if j > 1:
            result.append((i, j - 1))
        if j < self.cols:
            result.append((i, j + 1))
        if self.has_vertical_edges(j):
            if i > 1:
                result.append((i - 1, j))
            if i < self.rows:
                result.append((i + 1, j))
        return result


def edges(g: Geometry) -> List[Edge]:
    """
    Archi Ctrl-Z della geometria: orizzontali (i,j)-(i,j+1) e verticali (i,j)-(i+1,j).
    """
    result: List[Edge] = []
    for j in range(1, g.cols):
        for i in range(1, g.rows + 1):
            result.append(((i, j), (i, j + 1)))
    for j in range(1, g.cols + 1):
        if g.has_vertical_edges(j):
            for i in range(1, g.rows):
                result.append(((i, j), (i + 1, j)))
    return result


class InputSpec:
    """
    Stato iniziale della colonna di input: |+>^n oppure uno stato generico.

    Lo stato generico ha il qubit della riga k in posizione k-1.
    """

    def __init__(self, state: Optional[StateVector] = None):
        self.state = state

    @classmethod
    def standard(cls) -> "InputSpec":
        return cls()

    @classmethod
    def generic(cls, state: StateVector) -> "InputSpec":
        return cls(state)

    @property
    def is_standard(self) -> bool:
        return self.state is None

    def materialize(self, g: Geometry) -> StateVector:
        """Stato della colonna di input con le etichette dei siti (i, 1)."""
        labels = g.column_labels(g.input_column)
        if self.state is None:
            return init_plus(g.rows, labels)
        if self.state.num_qubits != g.rows:
            raise InvalidStateError(
                f"Input con {self.state.num_qubits} qubit per una geometria con {g.rows} righe"
            )
        return self.state.with_labels(labels)


def build_state(g: Geometry, input_spec: Optional[InputSpec] = None) -> StateVector:
    """
    Costruisce lo stato cluster completo (costo 2^(n*m)): input sulla colonna 1,
    |+> sulle altre, Ctrl-Z su ogni arco.
    """
    input_spec = input_spec or InputSpec.standard()
    state = input_spec.materialize(g)
    if g.cols > 1:
        rest = [label for j in range(2, g.cols + 1) for label in g.column_labels(j)]
        state = state.tensor(init_plus(len(rest), rest))

    for a, b in edges(g):
        state = apply_cz(state, g.site_label(a), g.site_label(b))
    return state


ColumnConsumer = Callable[[int, StateVector, List[int]], StateVector]


class ColumnStreamer:
    """
    Costruzione colonna per colonna: al più 2n qubit vivi.

    Per ogni colonna operativa j: archi verticali della colonna j, aggiunta della
    colonna j+1 in |+>, archi orizzontali, poi il consumer deve misurare tutta la
    colonna j.
    """

    def __init__(self, geometry: Geometry, input_spec: Optional[InputSpec] = None):
        self.geometry = geometry
        self.input_spec = input_spec or InputSpec.standard()
        self.peak_live_qubits = 0

    def _track(self, state: StateVector):
        self.peak_live_qubits = max(self.peak_live_qubits, state.num_qubits)

    def _vertical(self, state: StateVector, j: int) -> StateVector:
        g = self.geometry
        if g.has_vertical_edges(j):
            for i in range(1, g.rows):
                state = apply_cz(state, g.site_label((i, j)), g.site_label((i + 1, j)))
        return state

    def run(self, consumer: ColumnConsumer) -> StateVector:
        """
        Esegue lo streaming e restituisce lo stato della colonna di output
        (riga k in posizione k-1).
        """
        g = self.geometry
        state = self.input_spec.materialize(g)
        self._track(state)

        for j in range(1, g.cols):
            state = self._vertical(state, j)
            state = state.tensor(init_plus(g.rows, g.column_labels(j + 1)))
            self._track(state)
            for i in range(1, g.rows + 1):
                state = apply_cz(state, g.site_label((i, j)), g.site_label((i, j + 1)))

            labels = g.column_labels(j)
            state = consumer(j, state, labels)
            remaining = [label for label in labels if label in state.labels]
            if remaining:
                raise ColumnIncompleteError(
                    f"Colonna {j} non misurata completamente: siti {[g.site_of(l) for l in remaining]}"
                )

        state = self._vertical(state, g.cols)
        logger.debug(f"Streaming {g.rows}x{g.cols} completato, picco {self.peak_live_qubits} qubit")
        return state.reorder(g.column_labels(g.cols))


def stream_columns(g: Geometry, input_spec: Optional[InputSpec], consumer: ColumnConsumer) -> StateVector:
    """Versione funzionale di ColumnStreamer.run."""
    return ColumnStreamer(g, input_spec).run(consumer)
