# -*- coding: utf-8 -*-
"""
PramaIA-ClusterCompiler - Compilazione di circuiti quantistici in pattern di misura
su stati cluster open-ended.

Questo strumento fornisce:
1. Compilazione di circuiti {R_Z, R_X, R_ZX, H, CNOT, SWAP, CZ} in pattern con misure nel piano (X,Y)
2. Esecuzione dei pattern nel ramo positivo o con feed-forward adattivo
3. Verifica numerica delle identità e delle costruzioni
4. Diagrammi ASCII e benchmark dello streaming per colonne
"""

import sys

from dotenv import load_dotenv

from app.core.logger import setup_logging

# Carica variabili d'ambiente
load_dotenv()

# Configura logger
logger = setup_logging()


def main() -> int:
    from app.cli import run_cli
    return run_cli(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
