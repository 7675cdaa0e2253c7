# config_loader.py - Build run settings from command-line flags

import logging
from argparse import Namespace
from typing import Any, Dict, Optional

from pydantic import ValidationError

from models import AppSettings

logger = logging.getLogger(__name__)

# settings field <- argparse destination
FLAG_FIELDS = {
    "n": "n",
    "n_max": "n_max",
    "expensive": "expensive",
    "output_format": "format",
    "seed": "seed",
    "samples": "samples",
    "subset_budget": "subset_budget",
    "log_level": "log_level",
    "data_dir": "data_dir",
}


def load_app_config(namespace: Optional[Namespace] = None) -> AppSettings:
    """
    Validates the parsed flags into settings. Flags the namespace leaves
    unset (None) take the model defaults; nothing is read from the
    environment.
    """
    try:
        raw: Dict[str, Any] = {}
        for field, dest in FLAG_FIELDS.items():
            value = getattr(namespace, dest, None) if namespace is not None else None
            if value is not None:
                raw[field] = value
        settings = AppSettings(**raw)

        logger.info("Configuration loaded successfully.")
        logger.info(f"n={settings.n}, n_max={settings.n_max}, expensive={settings.expensive}, format={settings.output_format}")
        logger.debug(f"Seed {settings.seed}, {settings.samples} samples, subset budget {settings.subset_budget}")
        return settings

    except (ValidationError, ValueError) as e:
        logger.error(f"Configuration validation failed: {e}")
        if "exceeds 6" in str(e):
            logger.error("Dimensions above 6 need the --expensive flag.")
        # refuse to run with an invalid configuration
        raise ValueError(f"Invalid application configuration: {e}") from e
