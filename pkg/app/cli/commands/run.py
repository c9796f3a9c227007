"""
Comando run: esecuzione di un pattern (ramo positivo o feed-forward).
"""

import numpy as np

from app.cli.models import parse_pattern, read_document
from app.cli.output import EXIT_OK, format_amplitudes, non_negative_int, parse_input_spec, phase_aligned
from app.core.cluster import InputSpec
from app.core.config import get_settings
from app.core.logger import get_logger
from app.core.pattern import execute_pattern

# Logger
logger = get_logger(__name__)


def register(subparsers):
    settings = get_settings()
    parser = subparsers.add_parser("run", help="Esegue un pattern di misura")
    parser.add_argument("pattern", help="Documento del pattern (JSON)")
    parser.add_argument("--mode", choices=["positive", "adaptive"], default="positive")
    parser.add_argument("--seed", type=non_negative_int, default=settings.default_seed)
    parser.add_argument("--input", default="plus", help="'plus' oppure bit con la riga 1 per prima (es. 10)")
    parser.add_argument("--eager", action="store_true", help="Costruisce l'intero stato prima di misurare")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    pattern = parse_pattern(read_document(args.pattern))
    geometry = pattern.geometry
    input_spec = InputSpec.generic(parse_input_spec(args.input, geometry.rows))

    if args.mode == "positive":
        trace = execute_pattern(pattern, input_spec, streaming=not args.eager)
        amplitudes = trace.state.amplitudes
    else:
        rng = np.random.default_rng(args.seed)
        trace = execute_pattern(pattern, input_spec, adaptive=True, rng=rng, streaming=not args.eager)
        print(f"outcomes: {''.join(str(bit) for bit in trace.outcomes)}")
        print(f"frame x: {' '.join(str(trace.frame.x[site]) for site in pattern.outputs)}")
        print(f"frame z: {' '.join(str(trace.frame.z[site]) for site in pattern.outputs)}")
        amplitudes = trace.corrected(geometry).amplitudes

    for line in format_amplitudes(phase_aligned(amplitudes)):
        print(line)
    logger.debug(f"Esecuzione {args.mode} completata ({len(trace.outcomes)} misure)")
    return EXIT_OK
