"""Small thread pool helper for embarrassingly parallel evaluations."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from .config import Settings

T = TypeVar('T')
R = TypeVar('R')

logger = logging.getLogger(__name__)

# darunter laeuft alles im aufrufenden Thread
MIN_PARALLEL_ITEMS = 16

_configured_threads: Optional[int] = None


def configure_threads(settings: Optional[Settings]) -> None:
    """Take the process-wide worker cap from loaded settings (``None`` resets to one thread)."""
    global _configured_threads
    _configured_threads = None if settings is None else max(1, int(settings.threads))


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads is not None:
        return max(1, int(threads))
    if _configured_threads is not None:
        return _configured_threads
    return 1


def parallel_map(func: Callable[[T], R], items: Iterable[T], *, threads: Optional[int] = None) -> List[R]:
    """Apply ``func`` to every item and return the results in input order."""
    work = list(items)
    workers = min(resolve_threads(threads), len(work))
    if workers <= 1 or len(work) < MIN_PARALLEL_ITEMS:
        return [func(item) for item in work]
    logger.debug('Evaluating %d items on %d threads', len(work), workers)
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix='mixot') as pool:
        return list(pool.map(func, work))


__all__ = ['configure_threads', 'parallel_map', 'resolve_threads']
