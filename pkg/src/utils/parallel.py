"""Chunked work partitioning with an order-preserving merge."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Tuple, TypeVar

T = TypeVar('T')

logger = logging.getLogger(__name__)


def chunk_bounds(total: int, chunk_size: int) -> List[Tuple[int, int]]:
    chunk_size = max(1, int(chunk_size))
    return [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


def map_chunks(fn: Callable[[int, int], T], total: int, threads: int = 1,
               chunk_size: int = 1 << 18) -> List[T]:
    """Apply fn(lo, hi) to consecutive ranges of [0, total); results come back in range order."""
    bounds = chunk_bounds(total, chunk_size)
    if threads <= 1 or len(bounds) <= 1:
        return [fn(lo, hi) for lo, hi in bounds]

    logger.debug(f"Dispatching {len(bounds)} chunks to {threads} workers")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda bound: fn(*bound), bounds))
