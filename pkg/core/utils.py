"""
Common utility functions for the analog search lab.
"""

import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import colorlog

from .errors import DomainError, NumericError

# Floating-point drift allowed before a probability or cosine is clamped.
CLAMP_TOLERANCE = 1e-12

DEFAULT_CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> None:
    """Setup logging configuration.

    Results go to stdout, so every log record is routed to stderr.
    """
    stream_handler = colorlog.StreamHandler(sys.stderr)
    stream_handler.setFormatter(colorlog.ColoredFormatter(
        '%(log_color)s' + LOG_FORMAT,
        log_colors={
            'DEBUG': 'cyan',
            'INFO': 'green',
            'WARNING': 'yellow',
            'ERROR': 'red',
            'CRITICAL': 'red,bg_white',
        },
    ))
    handlers = [stream_handler]

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handlers.append(file_handler)

    logging.basicConfig(
        level=getattr(logging, level.upper()),
        handlers=handlers,
        force=True,
    )


def load_config(config_path: str) -> Dict[str, Any]:
    """Load configuration from JSON file."""
    try:
        with open(config_path, 'r') as f:
            config = json.load(f)
        return config
    except FileNotFoundError:
        logger.error(f"Configuration file not found: {config_path}")
        return {}
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in configuration file {config_path}: {e}")
        return {}


def hbar_from_h(h: float) -> float:
    """Convert Planck's constant h to the reduced constant used internally."""
    if not h > 0:
        raise DomainError("h", f"must be positive, got {h}")
    return h / (2.0 * math.pi)


def h_from_hbar(hbar: float) -> float:
    return 2.0 * math.pi * hbar


def clamp_probability(value: float, name: str = "probability") -> float:
    """Clamp a computed probability drifting by at most CLAMP_TOLERANCE."""
    if value < -CLAMP_TOLERANCE or value > 1.0 + CLAMP_TOLERANCE:
        raise NumericError(f"{name} {value!r} lies outside [0, 1]")
    if value < 0.0 or value > 1.0:
        logger.debug(f"Clamping {name}: raw value {value!r}")
    return min(max(value, 0.0), 1.0)


def safe_acos(argument: float, name: str = "acos argument") -> float:
    """acos with [-1, 1] clamping inside the drift tolerance."""
    if argument < -1.0 - CLAMP_TOLERANCE or argument > 1.0 + CLAMP_TOLERANCE:
        raise NumericError(f"{name} {argument!r} lies outside [-1, 1]")
    if argument > 1.0 or argument < -1.0:
        logger.debug(f"Clamping {name}: raw value {argument!r}")
    return math.acos(min(max(argument, -1.0), 1.0))


def filter_enabled_items(config: Dict[str, Any]) -> Dict[str, Any]:
    """Filter configuration items that are enabled."""
    return {
        name: item for name, item in config.items()
        if item.get('enabled', True)
    }
