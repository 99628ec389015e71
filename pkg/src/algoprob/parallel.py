"""Deterministic fan-out of machine-index shards to worker processes."""

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import TypeVar

from algoprob.models import IndexRange

logger = logging.getLogger(__name__)

T = TypeVar("T")


def plan_shards(space_size: int, workers: int = 1, shards_per_worker: int = 4) -> list[IndexRange]:
    """Split [0, space_size) into ordered, disjoint, near-equal ranges.

    Args:
        space_size: Number of indices to cover
        workers: Worker count the plan is made for
        shards_per_worker: Shards per worker (more shards balance uneven work)

    Returns:
        Ranges in ascending order; empty list when space_size is 0
    """
    if space_size <= 0:
        return []
    count = min(space_size, max(1, workers) * max(1, shards_per_worker))
    base, extra = divmod(space_size, count)
    shards = []
    start = 0
    for i in range(count):
        stop = start + base + (1 if i < extra else 0)
        shards.append(IndexRange(start=start, stop=stop))
        start = stop
    return shards


def run_shards(
    fn: Callable[..., T],
    shards: Sequence[IndexRange],
    args: tuple = (),
    workers: int = 1,
    progress_callback: Callable[[int, int], None] | None = None,
) -> list[T]:
    """Apply ``fn(start, stop, *args)`` to every shard.

    Args:
        fn: Module-level (picklable) function of a shard's bounds
        shards: Ranges to process
        args: Extra positional arguments passed to every call
        workers: Process count (1 = sequential, in-process)
        progress_callback: Called with (completed, total) after each shard

    Returns:
        Results in shard order, whatever the completion order was
    """
    total = len(shards)
    results: list[T | None] = [None] * total

    if workers <= 1 or total <= 1:
        for i, shard in enumerate(shards):
            results[i] = fn(shard.start, shard.stop, *args)
            logger.debug("Shard %d/%d [%d, %d) done", i + 1, total, shard.start, shard.stop)
            if progress_callback:
                progress_callback(i + 1, total)
        return results  # type: ignore[return-value]

    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(fn, shard.start, shard.stop, *args): i
            for i, shard in enumerate(shards)
        }
        completed = 0
        for future in as_completed(futures):
            i = futures[future]
            results[i] = future.result()
            completed += 1
            logger.debug("Shard %d finished (%d/%d)", i, completed, total)
            if progress_callback:
                progress_callback(completed, total)

    return results  # type: ignore[return-value]
