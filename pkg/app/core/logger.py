"""
Logger configuration module.
"""

import os
import sys
import logging
from logging.handlers import RotatingFileHandler

from app.core.config import get_settings

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def get_logger(name):
    """
    Get a logger instance with the specified name.
    """
    return logging.getLogger(name)


def setup_logging(log_level=None):
    """
    Set up logging configuration.

    Console output goes to stderr: stdout is reserved for command data.

    Args:
        log_level: Log level to use. Defaults to LOG_LEVEL or INFO.
    """
    settings = get_settings()

    # Determine log level from environment variable or parameter
    if not log_level:
        log_level = os.environ.get("LOG_LEVEL", "INFO")

    numeric_level = getattr(logging, str(log_level).upper(), None)
    if not isinstance(numeric_level, int):
        numeric_level = logging.INFO
        print(f"Livello di logging non valido: {log_level}. Uso INFO come default.", file=sys.stderr)

    logger = logging.getLogger()
    logger.setLevel(numeric_level)

    # Remove existing handlers to avoid duplicates
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    formatter = logging.Formatter(LOG_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if settings.log_to_file:
        logs_dir = os.path.join(os.getcwd(), settings.log_dir)
        os.makedirs(logs_dir, exist_ok=True)

        # File handler with rotation
        file_handler = RotatingFileHandler(
            os.path.join(logs_dir, settings.log_file),
            maxBytes=10 * 1024 * 1024,  # 10 MB
            backupCount=5
        )
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger
