"""
Comando verify: suite di verifica delle identità e delle costruzioni.
"""

import json

from tabulate import tabulate

from app.cli.output import EXIT_OK, EXIT_VERIFICATION_FAILED, non_negative_int
from app.core.config import get_settings
from app.core.logger import get_logger
from app.services.verify import run_suite

# Logger
logger = get_logger(__name__)


def register(subparsers):
    settings = get_settings()
    parser = subparsers.add_parser("verify", help="Esegue la suite di verifica")
    parser.add_argument("--max-n", type=int, default=3, help=f"Massimo numero di righe (<= {settings.max_verify_n})")
    parser.add_argument("--seed", type=non_negative_int, default=settings.default_seed)
    parser.add_argument("--json", action="store_true", help="Stampa il report in JSON")
    parser.set_defaults(handler=handle)


def _params(params) -> str:
    return ", ".join(f"{key}={value}" for key, value in params.items())


def handle(args) -> int:
    report = run_suite(args.max_n, args.seed)

    if args.json:
        print(json.dumps(report.model_dump(mode="json"), indent=2))
    else:
        rows = [
            [record.name, _params(record.params), f"{record.max_deviation:.2e}",
             f"{record.tolerance:.0e}", "PASS" if record.passed else "FAIL", record.detail]
            for record in report.records
        ]
        print(tabulate(rows, headers=["Controllo", "Parametri", "Deviazione", "Tolleranza", "Esito", "Dettaglio"]))
        failures = report.failures()
        print(f"\n{len(report.records)} controlli, {len(failures)} fallimenti")
        for record in failures:
            print(f"FALLITO: {record.name} ({_params(record.params)})")

    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED
