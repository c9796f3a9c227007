"""
Matrici dei gate e immersione di operatori locali su n qubit.

Il qubit logico k corrisponde al bit k-1 dell'indice di base. Le matrici a due
qubit agiscono sulla coppia ordinata (a, b) con indice locale 2*bit_a + bit_b.
"""

import math
from typing import Sequence

import numpy as np

from app.core.errors import InvalidStateError
from app.core.statevec import apply_operator

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)

CZ = np.diag([1, 1, 1, -1]).astype(np.complex128)
CNOT = np.array([[1, 0, 0, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1],
                 [0, 0, 1, 0]], dtype=np.complex128)
SWAP = np.array([[1, 0, 0, 0],
                 [0, 0, 1, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1]], dtype=np.complex128)


def _pauli_exponential(theta: float, pauli: np.ndarray) -> np.ndarray:
    # exp(-i theta/2 P) per P con P^2 = I
    dim = pauli.shape[0]
    return math.cos(theta / 2) * np.eye(dim, dtype=np.complex128) - 1j * math.sin(theta / 2) * pauli


def rz(theta: float) -> np.ndarray:
    """R_Z(theta) = exp(-i theta/2 Z)."""
    return _pauli_exponential(theta, Z)


def rx(theta: float) -> np.ndarray:
    """R_X(theta) = exp(-i theta/2 X)."""
    return _pauli_exponential(theta, X)


def rzx(theta: float, z_first: bool = True) -> np.ndarray:
    """
    exp(-i theta/2 Z (x) X) sulla coppia ordinata; con z_first=False il fattore Z
    agisce sul secondo qubit della coppia.
    """
    generator = np.kron(Z, X) if z_first else np.kron(X, Z)
    return _pauli_exponential(theta, generator)


def embed(matrix: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """
    Immerge una matrice locale in uno spazio di n qubit.

    Args:
        matrix: Matrice 2^k x 2^k
        targets: Qubit logici (1-based), il primo è il bit più significativo della matrice locale
        n: Numero totale di qubit

    Returns:
        Matrice 2^n x 2^n
    """
    targets = list(targets)
    if len(set(targets)) != len(targets) or any(t < 1 or t > n for t in targets):
        raise InvalidStateError(f"Qubit non validi {targets} per n={n}")
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (2 ** len(targets), 2 ** len(targets)):
        raise InvalidStateError(f"Matrice {matrix.shape} incompatibile con {len(targets)} qubit")
    identity = np.eye(2 ** n, dtype=np.complex128)
    return apply_operator(identity, n, [t - 1 for t in targets], matrix)


def pauli_string(n: int, **factors: Sequence[int]) -> np.ndarray:
    """
    Prodotto di Pauli su n qubit, es. pauli_string(3, z=[1], x=[2]).
    """
    table = {"x": X, "y": Y, "z": Z}
    result = np.eye(2 ** n, dtype=np.complex128)
    for name, qubits in factors.items():
        for q in qubits:
            result = embed(table[name], [q], n) @ result
    return result
