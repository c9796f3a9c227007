#!/usr/bin/env python
"""
Script di configurazione per PramaIA-ClusterCompiler.

Passi eseguiti:
1. Controllo della versione di Python
2. Installazione dei pacchetti di requirements.txt
3. Creazione di .env con i valori CLUSTER_* predefiniti
4. Creazione della directory dei log
5. Verifica rapida dell'installazione (verify --max-n 1)
"""

import argparse
import subprocess
import sys
from pathlib import Path

MIN_PYTHON = (3, 10)

DEFAULT_ENV = """# Configurazione ClusterCompiler
LOG_LEVEL=INFO
CLUSTER_MAX_WORKERS=4
CLUSTER_DEFAULT_SEED=0
CLUSTER_LOG_TO_FILE=True
"""


def python_supported() -> bool:
    found = sys.version_info[:2]
    if found < MIN_PYTHON:
        print(f"ERRORE: serve Python {MIN_PYTHON[0]}.{MIN_PYTHON[1]}+, trovato {found[0]}.{found[1]}")
        return False
    print(f"✓ Python {found[0]}.{found[1]}")
    return True


def install_requirements() -> bool:
    """pip install -r requirements.txt con l'interprete corrente."""
    print("\nInstallazione dei pacchetti...")
    result = subprocess.run([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"])
    if result.returncode != 0:
        print(f"ERRORE: pip ha restituito {result.returncode}")
        return False
    print("✓ Pacchetti installati")
    return True


def write_env_file() -> bool:
    env_file = Path(".env")
    if env_file.exists():
        print("\n✓ .env presente, configurazione mantenuta")
        return True
    env_file.write_text(DEFAULT_ENV, encoding="utf-8")
    print("✓ .env creato con i valori predefiniti")
    return True


def ensure_logs_dir() -> bool:
    Path("logs").mkdir(parents=True, exist_ok=True)
    print("✓ Directory logs pronta")
    return True


def smoke_verify() -> bool:
    """Esegue la suite di verifica più piccola."""
    print("\nVerifica dell'installazione...")
    result = subprocess.run([sys.executable, "main.py", "verify", "--max-n", "1"],
                            stdout=subprocess.DEVNULL)
    if result.returncode != 0:
        print(f"ERRORE: verify ha restituito il codice {result.returncode}")
        return False
    print("✓ Verifica superata")
    return True


def main() -> int:
    parser = argparse.ArgumentParser(description="Configurazione di PramaIA-ClusterCompiler")
    parser.add_argument("--skip-install", action="store_true", help="Non installa i pacchetti")
    parser.add_argument("--skip-verify", action="store_true", help="Non esegue la verifica finale")
    args = parser.parse_args()

    print("=== Configurazione PramaIA-ClusterCompiler ===\n")

    steps = [python_supported]
    if not args.skip_install:
        steps.append(install_requirements)
    steps += [write_env_file, ensure_logs_dir]
    if not args.skip_verify:
        steps.append(smoke_verify)

    for step in steps:
        if not step():
            return 1

    print("\n=== Configurazione completata ===")
    print("Esempio: python main.py verify --max-n 3")
    return 0


if __name__ == "__main__":
    sys.exit(main())
