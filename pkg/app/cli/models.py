"""
Documenti JSON per circuiti e pattern.

Gli angoli sono stringhe decimali con 17 cifre significative; la serializzazione
usa indentazione a 2 spazi e una newline finale.
"""

import json
import math
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ValidationError, field_validator

from app.core.circuit import GateKind, LogicalCircuit, LogicalGate, ZXOrientation
from app.core.cluster import ClusterKind, Geometry
from app.core.config import get_settings
from app.core.errors import DocumentParseError
from app.core.logger import get_logger
from app.core.pattern import MeasurementPattern, MeasurementStep

# Logger
logger = get_logger(__name__)

SitePair = Tuple[int, int]


def format_angle(theta: float) -> str:
    return f"{float(theta):.{get_settings().angle_digits}g}"


def _angle_text(value: Union[str, int, float, None]) -> Optional[str]:
    if value is None:
        return None
    if isinstance(value, bool):
        raise ValueError("angolo non valido")
    if isinstance(value, (int, float)):
        value = repr(float(value))
    try:
        parsed = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"angolo non valido: {value!r}")
    if not math.isfinite(parsed):
        raise ValueError(f"angolo non finito: {value!r}")
    return value


class GateEntry(BaseModel):
    kind: GateKind
    qubits: List[int]
    angle: Optional[str] = None
    orientation: Optional[ZXOrientation] = None

    @field_validator("angle", mode="before")
    @classmethod
    def check_angle(cls, value):
        return _angle_text(value)


class CircuitDocument(BaseModel):
    """Circuito logico in formato testuale."""
    version: int
    n: int
    gates: List[GateEntry] = []

    @classmethod
    def from_circuit(cls, circuit: LogicalCircuit) -> "CircuitDocument":
        entries = []
        for gate in circuit.gates:
            entries.append(GateEntry(
                kind=gate.kind,
                qubits=list(gate.qubits),
                angle=format_angle(gate.angle) if gate.is_primitive else None,
                orientation=gate.orientation,
            ))
        return cls(version=get_settings().document_version, n=circuit.n, gates=entries)

    def to_circuit(self) -> LogicalCircuit:
        gates = []
        for entry in self.gates:
            angle = float(entry.angle) if entry.angle is not None else 0.0
            orientation = entry.orientation
            if entry.kind is GateKind.RZX and orientation is None:
                orientation = ZXOrientation.Z_ON_LOWER
            gates.append(LogicalGate(entry.kind, tuple(entry.qubits), angle, orientation))
        circuit = LogicalCircuit(self.n, gates)
        circuit.validate()
        return circuit


class MeasurementEntry(BaseModel):
    row: int
    col: int
    angle: str
    x_deps: Optional[List[SitePair]] = None
    z_deps: Optional[List[SitePair]] = None

    @field_validator("angle", mode="before")
    @classmethod
    def check_angle(cls, value):
        return _angle_text(value)


class PatternDocument(BaseModel):
    """Pattern di misura in formato testuale."""
    version: int
    rows: int
    cols: int
    kind: ClusterKind
    measurements: List[MeasurementEntry] = []
    outputs: List[SitePair] = []

    @classmethod
    def from_pattern(cls, pattern: MeasurementPattern) -> "PatternDocument":
        g = pattern.geometry

        def deps(values):
            return None if values is None else [list(site) for site in sorted(values)]

        return cls(
            version=get_settings().document_version,
            rows=g.rows,
            cols=g.cols,
            kind=g.kind,
            measurements=[
                MeasurementEntry(row=step.site[0], col=step.site[1], angle=format_angle(step.angle),
                                 x_deps=deps(step.x_deps), z_deps=deps(step.z_deps))
                for step in pattern.steps
            ],
            outputs=[tuple(site) for site in pattern.outputs],
        )

    def to_pattern(self) -> MeasurementPattern:
        def deps(values):
            return None if values is None else frozenset(tuple(site) for site in values)

        steps = [
            MeasurementStep((entry.row, entry.col), float(entry.angle), deps(entry.x_deps), deps(entry.z_deps))
            for entry in self.measurements
        ]
        geometry = Geometry(self.rows, self.cols, self.kind)
        return MeasurementPattern(geometry, steps, [tuple(site) for site in self.outputs])


def _load(text: str, model):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentParseError(f"JSON non valido: {e.msg}", line=e.lineno, column=e.colno)

    try:
        document = model.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        raise DocumentParseError(f"Campo non valido: {error['msg']}", field=field)

    expected = get_settings().document_version
    if document.version != expected:
        raise DocumentParseError(f"Versione {document.version} non supportata (attesa {expected})",
                                 field="version")
    return document


def _dump(document: BaseModel, exclude_none: bool) -> str:
    data = document.model_dump(mode="json", exclude_none=exclude_none)
    return json.dumps(data, indent=2) + "\n"


def parse_circuit(text: str) -> LogicalCircuit:
    return _load(text, CircuitDocument).to_circuit()


def serialize_circuit(circuit: LogicalCircuit) -> str:
    return _dump(CircuitDocument.from_circuit(circuit), exclude_none=True)


def parse_pattern(text: str) -> MeasurementPattern:
    return _load(text, PatternDocument).to_pattern()


def serialize_pattern(pattern: MeasurementPattern) -> str:
    return _dump(PatternDocument.from_pattern(pattern), exclude_none=False)


def read_document(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def write_document(path: str, text: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.debug(f"Documento scritto in {path}")
