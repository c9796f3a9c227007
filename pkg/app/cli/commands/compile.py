"""
Comando compile: circuito -> pattern.
"""

from app.cli.models import parse_circuit, read_document, serialize_pattern, write_document
from app.cli.output import EXIT_OK
from app.core.compiler import compile_circuit, slab_count
from app.core.logger import get_logger

# Logger
logger = get_logger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("compile", help="Compila un circuito in un pattern di misura")
    parser.add_argument("circuit", help="Documento del circuito (JSON)")
    parser.add_argument("output", help="File del pattern da scrivere")
    parser.add_argument("--no-parity-fix", action="store_true",
                        help="Non aggiunge la slab finale che annulla il mirror")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    circuit = parse_circuit(read_document(args.circuit))
    geometry, pattern = compile_circuit(circuit, fix_parity=not args.no_parity_fix)
    write_document(args.output, serialize_pattern(pattern))

    print(f"slabs: {slab_count(pattern)}")
    print(f"geometry: {geometry.rows}x{geometry.cols}")
    print(f"measured: {pattern.measured_count}")
    logger.info(f"Pattern scritto in {args.output}")
    return EXIT_OK
