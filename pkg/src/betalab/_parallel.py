"""Optional thread parallelism with results returned in input order."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("BETALAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn, items, threads: int | None = None) -> list:
    items = list(items)
    k = thread_count() if threads is None else max(1, threads)
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))
