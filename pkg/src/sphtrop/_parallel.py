"""Order-preserving parallel map, capped by SPHTROP_THREADS."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def max_workers() -> int:
    raw = os.environ.get("SPHTROP_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    items = list(items)
    n = min(max_workers(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
