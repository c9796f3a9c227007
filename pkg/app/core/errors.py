"""
Eccezioni del ClusterCompiler.
"""

from typing import Optional


class ClusterCompilerError(Exception):
    """Errore base di tutti i moduli del compilatore."""


class InvalidStateError(ClusterCompilerError, ValueError):
    """Etichette duplicate o sconosciute, arità errata, gate non unitario."""


class ImpossibleBranchError(ClusterCompilerError):
    """Ramo di misura forzato con probabilità (quasi) nulla."""


class ColumnIncompleteError(ClusterCompilerError):
    """Il consumer dello streaming non ha misurato tutta la colonna."""


class PatternValidationError(ClusterCompilerError, ValueError):
    """Pattern di misura malformato."""


class PatternNotAdaptiveError(ClusterCompilerError):
    """Il pattern non contiene le dipendenze necessarie al feed-forward."""


class PhaseInconsistencyError(ClusterCompilerError):
    """La matrice estratta dal ramo positivo non è unitaria."""


class CircuitValidationError(ClusterCompilerError, ValueError):
    """Circuito logico non valido."""


class DocumentParseError(ClusterCompilerError):
    """
    Errore di lettura di un documento (circuito o pattern).

    Args:
        message: Descrizione dell'errore
        line: Riga (1-based) se l'errore è sintattico
        column: Colonna (1-based) se l'errore è sintattico
        field: Percorso del campo non valido (es. "gates.0.angle")
    """

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, field: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.field = field

    def __str__(self) -> str:
        position = ""
        if self.line is not None:
            position = f" (riga {self.line}, colonna {self.column})"
        field = f" [campo: {self.field}]" if self.field else ""
        return f"{self.message}{position}{field}"
