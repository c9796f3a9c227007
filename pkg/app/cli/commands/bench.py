"""
Comando bench: streaming per colonne di un pattern con angoli 0 e confronto
streaming/costruzione completa su un'istanza ridotta.
"""

import math
import time

import numpy as np
from tabulate import tabulate

from app.cli.output import EXIT_OK, EXIT_VERIFICATION_FAILED, non_negative_int, phase_aligned
from app.core.cluster import Geometry, InputSpec
from app.core.config import get_settings
from app.core.logger import get_logger
from app.core.pattern import all_x_pattern, build_pattern, execute_pattern
from app.core.statevec import random_state

# Logger
logger = get_logger(__name__)


def register(subparsers):
    settings = get_settings()
    parser = subparsers.add_parser("bench", help="Misura tempo e memoria dello streaming per colonne")
    parser.add_argument("--rows", type=int, default=8)
    parser.add_argument("--cols", type=int, default=50)
    parser.add_argument("--seed", type=non_negative_int, default=settings.default_seed)
    parser.add_argument("--check-rows", type=int, default=3)
    parser.add_argument("--check-cols", type=int, default=6)
    parser.set_defaults(handler=handle)


def streamed_vs_eager(rows: int, cols: int, seed: int) -> float:
    """
    Deviazione massima tra esecuzione in streaming e costruzione completa, con
    angoli e input casuali, dopo l'allineamento della fase.
    """
    rng = np.random.default_rng(seed)
    geometry = Geometry(rows, cols)
    angles = {site: rng.uniform(0, 2 * math.pi) for site in geometry.operational_sites()}
    pattern = build_pattern(geometry, angles)
    input_spec = InputSpec.generic(random_state(list(range(rows)), rng))

    streamed = execute_pattern(pattern, input_spec, streaming=True).state.amplitudes
    eager = execute_pattern(pattern, input_spec, streaming=False).state.amplitudes
    return float(np.max(np.abs(phase_aligned(streamed) - phase_aligned(eager))))


def handle(args) -> int:
    settings = get_settings()
    pattern = all_x_pattern(args.rows, args.cols)

    start = time.perf_counter()
    trace = execute_pattern(pattern, InputSpec.standard(), streaming=True)
    elapsed = time.perf_counter() - start

    deviation = streamed_vs_eager(args.check_rows, args.check_cols, args.seed)
    rows = [
        ["streaming", f"{args.rows}x{args.cols}", f"{elapsed:.3f}", trace.peak_live_qubits, ""],
        ["streaming vs completo", f"{args.check_rows}x{args.check_cols}", "", "", f"{deviation:.2e}"],
    ]
    print(tabulate(rows, headers=["Esecuzione", "Geometria", "Secondi", "Qubit vivi (picco)", "Deviazione"]))

    logger.info(f"Benchmark {args.rows}x{args.cols}: {elapsed:.3f}s, picco {trace.peak_live_qubits} qubit")
    return EXIT_OK if deviation < settings.identity_tolerance else EXIT_VERIFICATION_FAILED
