"""Order-preserving process-parallel map with the worker count taken from THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"THREADS must be a positive integer, got {raw!r}") from None
    return os.cpu_count() or 1


def pmap(fn, items, workers: int | None = None) -> list:
    """[fn(x) for x in items], computed by up to `workers` processes.

    Results come back in input order, so any reduction over them is
    independent of the worker count. fn must be a module-level function.
    """
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunk))
