"""Bounded worker pool for row-independent computations."""

from __future__ import annotations

import logging
import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

_LOGGER = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: int) -> int:
    """Translate a thread cap (0 = auto) into a worker count."""
    if threads > 0:
        return threads
    return os.cpu_count() or 1


def map_rows(func: Callable[[T], R], items: Iterable[T], threads: int = 0) -> list[R]:
    """Apply func to every item, preserving input order.

    Each call must be self-contained: results never depend on how many
    workers ran, only on the item itself.
    """
    items = list(items)
    workers = min(resolve_threads(threads), max(len(items), 1))
    if workers == 1:
        return [func(item) for item in items]
    _LOGGER.debug("Mapping %d rows over %d workers", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
