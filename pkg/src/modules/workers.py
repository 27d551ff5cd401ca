import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence

logger = logging.getLogger(__name__)


def run_parallel(
    func: Callable,
    items: Iterable,
    jobs: int,
    initializer: Optional[Callable] = None,
    initargs: Sequence = (),
) -> List:
    """Map ``func`` over ``items`` and return results in input order.

    With ``jobs <= 1`` everything runs in this process after calling the
    initializer once, so per-worker state set up by ``initializer`` is
    available on both paths.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        if initializer is not None:
            initializer(*initargs)
        return [func(item) for item in items]

    workers = min(jobs, len(items))
    logger.debug(f"Dispatching {len(items)} work units to {workers} processes")
    with ProcessPoolExecutor(max_workers=workers, initializer=initializer, initargs=tuple(initargs)) as pool:
        return list(pool.map(func, items))
