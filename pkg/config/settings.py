"""
Ambient settings. The repository-root .env is loaded on import; variables
already set in the environment win over it.
"""

import logging
import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv


ENV_FILE = Path(__file__).resolve().parents[1] / ".env"
load_dotenv(ENV_FILE)


DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_WORKERS = 1


@dataclass(frozen=True)
class Settings:
    log_level: int
    workers: int


def _log_level() -> int:
    raw = os.getenv("HEISENBERG_LOG_LEVEL", DEFAULT_LOG_LEVEL)
    level = logging.getLevelName(raw.strip().upper())
    return level if isinstance(level, int) else logging.WARNING


def _workers() -> int:
    raw = os.getenv("HEISENBERG_WORKERS")
    try:
        value = int(raw) if raw is not None else DEFAULT_WORKERS
    except ValueError:
        return DEFAULT_WORKERS
    return value if value >= 1 else DEFAULT_WORKERS


def get_settings() -> Settings:
    """
    Ambient settings read from the environment.
    Neither value changes any computed number, only logging and fan-out.
    """
    return Settings(log_level=_log_level(), workers=_workers())
