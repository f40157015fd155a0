"""
Per-image parallelism capped by LESION_BENCH_THREADS
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from config import Config, env_int
from .errors import ConfigError

T = TypeVar("T")
R = TypeVar("R")


def thread_cap() -> int:
    """
    Returns the current worker cap, re-read from the environment on every
    call; `Config.THREADS` (set at startup, .env included) is the default.
    """
    try:
        return env_int("LESION_BENCH_THREADS", Config.THREADS)
    except ValueError as err:
        raise ConfigError(str(err))


def map_ordered(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """
    Apply `fn` to every item using a thread pool and return the results in
    input order, so reductions over them keep a fixed summation order.
    """
    items = list(items)
    workers = min(thread_cap(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
