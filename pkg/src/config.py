"""
Configuration Module

Settings are read from the environment (optionally from a .env file loaded
with python-dotenv) and validated with pydantic. Command-line flags override
these values; see src/cli.py.
"""

import os
import logging
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from src.exceptions import InvalidParameterError

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    """Process-wide defaults."""

    log_file: str = Field(default=os.path.join("logs", "skewt_predictive.log"))
    log_level: str = "INFO"
    seed: int = 20240601
    n_mc: int = Field(default=100_000, ge=1)
    workers: int = Field(default=1, ge=1)
    chunk_size: int = Field(default=8192, ge=1)
    progress: bool = True
    host: str = "0.0.0.0"
    port: int = 8000


def _env_bool(value: str) -> bool:
    return value.strip().lower() not in ("0", "false", "no", "off", "")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Build the settings from environment variables.

    Returns:
        Cached Settings instance

    Raises:
        InvalidParameterError: if a variable does not parse (e.g. SKEWT_NMC=abc)
    """
    try:
        settings = Settings(
            log_file=os.getenv("LOG_FILE", os.path.join("logs", "skewt_predictive.log")),
            log_level=os.getenv("LOG_LEVEL", "INFO"),
            seed=os.getenv("SKEWT_SEED", "20240601"),
            n_mc=os.getenv("SKEWT_NMC", "100000"),
            workers=os.getenv("SKEWT_WORKERS", "1"),
            chunk_size=os.getenv("SKEWT_CHUNK_SIZE", "8192"),
            progress=_env_bool(os.getenv("SKEWT_PROGRESS", "1")),
            host=os.getenv("SKEWT_HOST", "0.0.0.0"),
            port=os.getenv("SKEWT_PORT", "8000"),
        )
    except ValidationError as e:
        raise InvalidParameterError(f"Invalid environment settings: {e}") from e
    logger.debug(f"Loaded settings: {settings.model_dump()}")
    return settings
