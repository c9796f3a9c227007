"""
Modulo CLI del ClusterCompiler.

Codici di uscita: 0 successo, 1 verifica fallita, 2 errore di input o di parsing.
"""

import argparse
from typing import List, Optional

from app.cli.commands import bench, diagram, run, verify
from app.cli.commands import compile as compile_command
from app.cli.output import EXIT_INPUT_ERROR, EXIT_OK, EXIT_VERIFICATION_FAILED
from app.core.config import get_settings
from app.core.errors import ClusterCompilerError
from app.core.logger import get_logger, setup_logging

# Logger
logger = get_logger(__name__)

# Sottocomandi registrati
COMMANDS = [compile_command, run, verify, diagram, bench]


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="cluster-compiler",
        description=f"{settings.app_name} {settings.app_version}: compilazione di circuiti in pattern MBQC",
    )
    parser.add_argument("--log-level", default=None, help="Livello di logging (default: LOG_LEVEL o INFO)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def run_cli(argv: Optional[List[str]] = None) -> int:
    """
    Esegue la CLI e restituisce il codice di uscita.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT_ERROR

    if args.log_level:
        setup_logging(args.log_level)

    try:
        return args.handler(args)
    except ClusterCompilerError as e:
        logger.error(f"Errore nel comando {args.command}: {str(e)}")
        return EXIT_INPUT_ERROR
    except OSError as e:
        logger.error(f"Errore di accesso al file: {str(e)}")
        return EXIT_INPUT_ERROR


__all__ = ["run_cli", "build_parser", "EXIT_OK", "EXIT_VERIFICATION_FAILED", "EXIT_INPUT_ERROR"]
