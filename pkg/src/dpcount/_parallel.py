"""Deterministic fan-out over worker processes."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")


def resolve_workers(workers: int | None) -> int:
    """Explicit value, else DPCOUNT_WORKERS, else 1."""
    if workers is None:
        env = os.environ.get("DPCOUNT_WORKERS")
        workers = int(env) if env else 1
    if workers < 1:
        raise ValueError("worker count must be >= 1")
    return workers


def run_tasks(func: Callable[..., T], tasks: Sequence[tuple], workers: int) -> list[T]:
    """Apply func to each argument tuple; results keep task order."""
    if workers == 1 or len(tasks) <= 1:
        return [func(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as ex:
        futs = [ex.submit(func, *t) for t in tasks]
        return [f.result() for f in futs]
