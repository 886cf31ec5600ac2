"""Deterministic sample-indexed parallel map.

Each task computes one sample from its own split random stream and writes
into a slot keyed by its index, so the assembled result is bit-identical
for any thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def resolve_threads(threads: int) -> int:
    if threads < 0:
        raise ValueError("thread count must be >= 0")
    return threads if threads > 0 else (os.cpu_count() or 1)


def indexed_map(func, count: int, threads: int = 0) -> list:
    """Return ``[func(0), ..., func(count - 1)]`` computed on a thread pool."""
    n_threads = resolve_threads(threads)
    results = [None] * count
    if n_threads == 1 or count <= 1:
        for i in range(count):
            results[i] = func(i)
        return results
    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        for i, value in zip(range(count), pool.map(func, range(count))):
            results[i] = value
    return results
