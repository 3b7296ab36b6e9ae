"""
Parallel fan-out helpers
Runs independent tasks on a thread pool and keeps input order
"""

import concurrent.futures
from typing import Callable, Iterable, List, TypeVar

from config.settings import MAX_WORKERS
from utils.logging import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_parallel(func: Callable[[T], R], items: Iterable[T],
                 max_workers: int = MAX_WORKERS, label: str = "tasks") -> List[R]:
    """
    Apply func to every item using a ThreadPoolExecutor
    Returns results in input order
    """
    items = list(items)
    if not items:
        return []

    if max_workers <= 1 or len(items) == 1:
        return [func(item) for item in items]

    workers = min(max_workers, len(items))
    logger.debug(f"Running {len(items)} {label} with {workers} parallel workers...")

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(func, items))

    logger.debug(f"Completed {len(results)} {label}")
    return results


def chunked(items: List[T], chunks: int) -> List[List[T]]:
    """Split items into at most `chunks` contiguous slices"""
    if chunks <= 1 or len(items) <= 1:
        return [list(items)]

    size = -(-len(items) // chunks)
    return [items[i:i + size] for i in range(0, len(items), size)]
