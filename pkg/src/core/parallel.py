from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from config import WORKERS

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: Optional[int]) -> int:
    return max(1, WORKERS if workers is None else workers)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """Map ``fn`` over ``items`` in worker processes, results in input order.

    ``fn`` must be a module-level function. With one worker (or one item) the
    map runs inline so callers get identical results either way.
    """
    items = list(items)
    workers = min(resolve_workers(workers), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
