"""
Configurazione del ClusterCompiler.

Le impostazioni partono dai valori predefiniti del modello, vengono sovrascritte
dal file config/settings.json e infine dalle variabili d'ambiente (caricate da
.env in main.py).
"""

import os
import json
import logging
from functools import lru_cache
from typing import Dict, Any

from pydantic import BaseModel, Field, ValidationError

# Logger
logger = logging.getLogger(__name__)

APP_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEFAULT_CONFIG_PATH = os.path.join(APP_DIR, "config", "settings.json")


class Settings(BaseModel):
    """
    Impostazioni di configurazione del compilatore e del simulatore.
    """
    # Informazioni sull'applicazione
    app_name: str = "PramaIA-ClusterCompiler"
    app_version: str = "1.0.1"
    app_dir: str = APP_DIR

    # Tolleranze numeriche
    norm_tolerance: float = 1e-10
    gate_unitarity_tolerance: float = 1e-12
    branch_threshold: float = 1e-12
    extract_unitarity_tolerance: float = 1e-9
    identity_tolerance: float = 1e-10
    commutation_tolerance: float = 1e-12
    equivalence_tolerance: float = 1e-8

    # Impostazioni di esecuzione
    max_worker_threads: int = Field(default=4, ge=1)
    default_seed: int = Field(default=0, ge=0)
    max_verify_n: int = 5
    max_extract_n: int = 6

    # Formato dei documenti e dell'output
    angle_digits: int = 17
    amplitude_digits: int = 12
    document_version: int = 1

    # Impostazioni di logging
    log_dir: str = "logs"
    log_file: str = "cluster_compiler.log"
    log_to_file: bool = True


# Variabili d'ambiente riconosciute -> campo delle impostazioni
ENV_OVERRIDES = {
    "CLUSTER_MAX_WORKERS": "max_worker_threads",
    "CLUSTER_DEFAULT_SEED": "default_seed",
    "CLUSTER_LOG_TO_FILE": "log_to_file",
}


def load_settings_from_json(config_path: str = None) -> Dict[str, Any]:
    """
    Carica le impostazioni dal file settings.json.

    Args:
        config_path: Percorso del file. Se None, usa CLUSTER_CONFIG_PATH o il file predefinito.

    Returns:
        Dizionario con le impostazioni lette (vuoto se il file manca o non è valido).
    """
    if config_path is None:
        config_path = os.environ.get("CLUSTER_CONFIG_PATH", DEFAULT_CONFIG_PATH)

    if not os.path.exists(config_path):
        logger.warning(f"File di configurazione {config_path} non trovato. Utilizzo impostazioni predefinite.")
        return {}

    try:
        with open(config_path, "r") as f:
            return json.load(f)
    except Exception as e:
        logger.error(f"Errore nel caricamento delle impostazioni dal file {config_path}: {str(e)}")
        return {}


def load_settings_from_env() -> Dict[str, Any]:
    """
    Legge le sovrascritture dalle variabili d'ambiente.
    """
    overrides: Dict[str, Any] = {}
    for env_name, field_name in ENV_OVERRIDES.items():
        value = os.environ.get(env_name)
        if value is not None:
            overrides[field_name] = value
    return overrides


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Restituisce le impostazioni del servizio.
    """
    data = load_settings_from_json()
    data.update(load_settings_from_env())
    try:
        return Settings(**data)
    except ValidationError as e:
        # I campi non validi tornano ai valori predefiniti
        invalid = {error["loc"][0] for error in e.errors() if error["loc"]}
        logger.error(f"Impostazioni non valide ({', '.join(map(str, sorted(invalid)))}): uso i valori predefiniti")
        return Settings(**{key: value for key, value in data.items() if key not in invalid})
