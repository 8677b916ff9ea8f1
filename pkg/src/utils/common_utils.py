"""
Common utility functions shared by the CLI, the service and the library.
"""

import os
import logging
from typing import List, Optional

import numpy as np

from src.exceptions import InvalidParameterError

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

_configured = False


def configure_logging(log_file: Optional[str] = None, level: str = "INFO", console: bool = True) -> None:
    """
    Configure root logging once: a file handler plus an optional console handler.

    Args:
        log_file: Path of the log file; its directory is created if needed
        level: Logging level name
        console: Whether to also log to stderr
    """
    global _configured
    if _configured:
        logging.getLogger().setLevel(level.upper())
        return

    handlers: List[logging.Handler] = []
    if log_file:
        directory = os.path.dirname(log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))
    if console:
        handlers.append(logging.StreamHandler())

    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, handlers=handlers)
    _configured = True


def format_number(value: float, full_precision: bool = False) -> str:
    """
    Format a float for output: 6 significant digits unless full precision is requested.
    """
    if full_precision:
        return repr(float(value))
    return f"{float(value):.6g}"


def parse_deltas(spec: str) -> List[float]:
    """
    Parse a START:STOP:STEP grid (inclusive of STOP) or a comma-separated list.

    Args:
        spec: Grid specification, e.g. "0:5:0.5" or "0,1,2"

    Returns:
        List of grid values
    """
    try:
        if ":" in spec:
            start, stop, step = (float(part) for part in spec.split(":"))
            if step <= 0 or stop < start:
                raise InvalidParameterError(f"Invalid delta grid '{spec}'")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(count)]
        values = [float(part) for part in spec.split(",") if part.strip()]
    except ValueError as e:
        if isinstance(e, InvalidParameterError):
            raise
        raise InvalidParameterError(f"Invalid delta grid '{spec}': {e}") from e
    if not values:
        raise InvalidParameterError("Delta grid is empty")
    return values
