"""
Formattazione dell'output dei comandi (stdout è l'unico canale dati).
"""

import argparse
from typing import List, Sequence

import numpy as np

from app.core.config import get_settings
from app.core.errors import InvalidStateError
from app.core.statevec import StateVector, basis_state

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2

# Sotto questa soglia le componenti vengono stampate come 0
PRINT_FLOOR = 1e-14


def phase_aligned(amplitudes: np.ndarray) -> np.ndarray:
    """Ruota la fase globale rendendo reale positiva la prima ampiezza non nulla."""
    nonzero = np.flatnonzero(np.abs(amplitudes) > 1e-12)
    if nonzero.size == 0:
        return amplitudes
    leading = amplitudes[nonzero[0]]
    return amplitudes * (abs(leading) / leading)


def _component(value: float) -> float:
    return 0.0 if abs(value) < PRINT_FLOOR else value + 0.0


def format_amplitudes(amplitudes: Sequence[complex]) -> List[str]:
    """Una riga per indice di base: `indice re,im` con 12 cifre significative."""
    digits = get_settings().amplitude_digits
    lines = []
    for index, amplitude in enumerate(amplitudes):
        re, im = _component(amplitude.real), _component(amplitude.imag)
        lines.append(f"{index} {re:.{digits}g},{im:.{digits}g}")
    return lines


def parse_input_spec(text: str, n: int) -> StateVector:
    """
    Converte `--input`: "plus" oppure una stringa di bit con la riga 1 per prima.
    """
    labels = list(range(n))
    if text == "plus":
        return StateVector(np.full(2 ** n, 2 ** (-n / 2), dtype=np.complex128), labels)
    if len(text) != n or any(c not in "01" for c in text):
        raise InvalidStateError(f"Input non valido '{text}': atteso 'plus' o {n} bit")
    return basis_state([int(c) for c in text], labels)


def non_negative_int(text: str) -> int:
    """Tipo argparse per i semi: intero >= 0 (numpy rifiuta i semi negativi)."""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"intero non valido: '{text}'")
    if value < 0:
        raise argparse.ArgumentTypeError(f"il seme deve essere >= 0, ricevuto {value}")
    return value
