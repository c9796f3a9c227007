"""
Comando diagram: griglia ASCII di un pattern.
"""

from app.cli.models import parse_pattern, read_document
from app.cli.output import EXIT_OK
from app.utils.diagram import render


def register(subparsers):
    parser = subparsers.add_parser("diagram", help="Disegna un pattern in ASCII")
    parser.add_argument("pattern", help="Documento del pattern (JSON)")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    pattern = parse_pattern(read_document(args.pattern))
    print(render(pattern), end="")
    return EXIT_OK
