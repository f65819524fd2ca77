"""Optional process-level parallelism, capped by HECKE_EHRHART_THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("HECKE_EHRHART_THREADS", "1")))
    except ValueError:
        return 1


def pmap(func: Callable[[T], R], items: Iterable[T], min_items: int = 64) -> list[R]:
    """map() that fans out to worker processes when allowed and worthwhile.

    Results keep the input order, so downstream sums do not depend on
    scheduling.
    """
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) < min_items:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * workers))))
