from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from structlabel.config.settings import get_settings

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Sequence[T], threads: int | None = None) -> list[R]:
    """Apply ``fn`` to every item, sentence-parallel, results in input order.

    ``threads`` defaults to ``STRUCTLABEL_THREADS``.
    """
    workers = threads if threads is not None else get_settings().threads
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
