"""Process settings and logging setup for mixot."""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import find_dotenv, load_dotenv

from .constants import DEFAULT_EPS_REL
from .errors import InvalidInputError

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
LOGGER_NAME = 'mixot'
VALID_LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


@dataclass(frozen=True)
class Settings:
    threads: int = 1
    log_level: str = 'INFO'
    eps_rel: float = DEFAULT_EPS_REL

    def to_dict(self) -> dict:
        return {'threads': self.threads, 'log_level': self.log_level, 'eps_rel': self.eps_rel}


def _read_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInputError('invalid_setting', f'{name} must be an integer, got {raw!r}')
    if value < 1:
        raise InvalidInputError('invalid_setting', f'{name} must be >= 1, got {value}')
    return value


def _read_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = float(raw)
    except ValueError:
        raise InvalidInputError('invalid_setting', f'{name} must be a number, got {raw!r}')
    if not value > 0:
        raise InvalidInputError('invalid_setting', f'{name} must be positive, got {value}')
    return value


def load_settings(env_file: Optional[str | Path] = None) -> Settings:
    """Read settings from an optional .env file and the environment."""
    # gesetzte Umgebungsvariablen gewinnen immer, die .env ist nur der Fallback
    dotenv_path = str(env_file) if env_file else find_dotenv(usecwd=True)
    if dotenv_path:
        load_dotenv(dotenv_path, override=False)

    log_level = (os.environ.get('MIXOT_LOG_LEVEL') or 'INFO').strip().upper()
    if log_level not in VALID_LOG_LEVELS:
        raise InvalidInputError('invalid_setting', f'MIXOT_LOG_LEVEL must be one of {VALID_LOG_LEVELS}')

    return Settings(
        threads=_read_int('MIXOT_THREADS', os.cpu_count() or 1),
        log_level=log_level,
        eps_rel=_read_float('MIXOT_EPS_REL', DEFAULT_EPS_REL),
    )


def configure_logging(level: str = 'INFO') -> logging.Logger:
    """Configure the package logger with consistent formatting."""
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    formatter = logging.Formatter(LOG_FORMAT)
    # hier haenge ich den Handler an das aktuelle stderr
    for handler in list(logger.handlers):
        if getattr(handler, '_mixot_handler', False):
            logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler._mixot_handler = True
    handler.setFormatter(formatter)
    logger.addHandler(handler)
    return logger


__all__ = ['LOG_FORMAT', 'Settings', 'configure_logging', 'load_settings']
