"""Experimental output-frequency distributions and CTM-style complexity estimates."""

import logging
import math
import time
from collections import Counter
from collections.abc import Callable, Iterable

from algoprob.config import get_settings
from algoprob.machines import (
    check_capacity,
    decode_table,
    is_mirror_representative,
    machine_space_size,
    runaway_flags,
    simulate,
    table_can_halt,
)
from algoprob.models import (
    IndexRange,
    InitMode,
    MergeError,
    NotObservedError,
    ParameterError,
    PatternDistribution,
    SourceDescriptor,
    SourceKind,
)
from algoprob.parallel import plan_shards, run_shards
from algoprob.rng import random_bits

logger = logging.getLogger(__name__)


def window_counts(bits: str, k: int, overlap: bool = True) -> Counter[str]:
    """Count the k-tuples of a bit string.

    Overlapping mode slides a window one bit at a time (len - k + 1 windows);
    otherwise the string is cut into disjoint blocks and a short remainder is
    dropped (len // k windows).
    """
    if k < 1:
        raise ParameterError(f"k must be at least 1, got {k}")
    if k > len(bits):
        raise ParameterError(f"k={k} exceeds the string length {len(bits)}")
    step = 1 if overlap else k
    return Counter(bits[i : i + k] for i in range(0, len(bits) - k + 1, step))


def distribution_from_rows(
    rows: Iterable[str],
    k: int,
    overlap: bool,
    source: SourceDescriptor,
    seed: int | None = None,
) -> PatternDistribution:
    """Pool the k-tuples of several rows into one distribution."""
    counts: Counter[str] = Counter()
    for row in rows:
        counts.update(window_counts(row, k, overlap))
    windows = sum(counts.values())
    return PatternDistribution(
        source=source,
        seed=seed,
        total_runs=windows,
        contributing_runs=windows,
        counts=dict(counts),
    )


def _distribution_shard(
    start: int, stop: int, n: int, cap: int, tapes: tuple[str, ...], use_mirror: bool
) -> tuple[int, int, dict[str, int]]:
    total = contributing = 0
    counts: Counter[str] = Counter()
    for index in range(start, stop):
        weight = 1
        if use_mirror:
            if not is_mirror_representative(index, n):
                continue
            weight = 2
        total += weight * len(tapes)
        table = decode_table(index, n)
        if not table_can_halt(table):
            continue
        runaway = runaway_flags(table, n)
        for tape in tapes:
            result = simulate(table, tape, cap, runaway)
            if result is None or not result[0]:
                continue
            output = result[3]
            contributing += weight
            counts[output] += 1
            if use_mirror:
                counts[output[::-1]] += 1
    return total, contributing, dict(counts)


def machine_source(
    n: int,
    cap: int,
    init_mode: InitMode,
    segment_length: int | None = None,
    samples: int | None = None,
) -> SourceDescriptor:
    params: dict[str, int | str | None] = {
        "n": n,
        "cap": cap,
        "init": init_mode.value,
        "space_size": machine_space_size(n),
    }
    if init_mode is InitMode.RANDOM:
        params["segment_length"] = segment_length
        params["samples"] = samples
    return SourceDescriptor(kind=SourceKind.MACHINES, params=params)


def build_distribution(
    n: int,
    cap: int,
    init_mode: InitMode = InitMode.BLANK,
    segment_length: int | None = None,
    samples: int | None = None,
    seed: int | None = None,
    workers: int | None = None,
    use_mirror: bool = False,
    progress_callback: Callable[[int, int], None] | None = None,
) -> PatternDistribution:
    """Run every machine of (n,2) and count the outputs of the halters.

    Blank mode runs each machine once from blank tape. Random mode runs each
    machine on `samples` seeded random segments of `segment_length` bits placed
    from cell 0, pooling halter outputs across samples.

    Args:
        n: Number of states
        cap: Step cap for each run
        init_mode: Blank or random initial tapes
        segment_length: Random segment length (random mode)
        samples: Number of random tapes (random mode)
        seed: Seed for the random tapes (random mode)
        workers: Process count (defaults to settings)
        use_mirror: Simulate one machine per mirror pair (blank mode only)
        progress_callback: Called with (completed shards, total shards)

    Returns:
        The unsharded distribution; identical for every worker count
    """
    if cap < 1:
        raise ParameterError(f"cap must be at least 1, got {cap}")
    check_capacity(n)
    if init_mode is InitMode.RANDOM:
        if seed is None:
            raise ParameterError("random initial conditions require a seed")
        if segment_length is None or segment_length < 1:
            raise ParameterError("segment length must be at least 1")
        if samples is None or samples < 1:
            raise ParameterError("samples must be at least 1")
        if use_mirror:
            raise ParameterError("mirror reduction applies to blank tapes only")
        tapes = tuple(random_bits(segment_length, seed, sample) for sample in range(samples))
    else:
        seed = None
        tapes = ("",)

    settings = get_settings()
    workers = workers or settings.workers
    source = machine_source(n, cap, init_mode, segment_length, samples)
    shards = plan_shards(machine_space_size(n), workers, settings.shards_per_worker)

    started = time.perf_counter()
    parts = run_shards(
        _distribution_shard,
        shards,
        args=(n, cap, tapes, use_mirror),
        workers=workers,
        progress_callback=progress_callback,
    )

    result = PatternDistribution.empty(source, seed)
    for shard, (total, contributing, counts) in zip(shards, parts):
        part = PatternDistribution(
            source=source,
            seed=seed,
            total_runs=total,
            contributing_runs=contributing,
            counts=counts,
            shards=[shard],
        )
        result = merge(result, part)
    logger.info(
        "Built distribution n=%d cap=%d init=%s: %d/%d contributing, %d strings in %.2fs",
        n,
        cap,
        init_mode.value,
        result.contributing_runs,
        result.total_runs,
        result.support_size,
        time.perf_counter() - started,
    )
    return result


def _is_empty(d: PatternDistribution) -> bool:
    # the merge identity: no runs and no shard range claimed
    return d.total_runs == 0 and not d.counts and d.shards is None


def _space_size(d: PatternDistribution) -> int | None:
    if d.source.kind is not SourceKind.MACHINES:
        return None
    space_size = d.source.params.get("space_size")
    return space_size if isinstance(space_size, int) else None


def _claimed_ranges(d: PatternDistribution) -> list[IndexRange] | None:
    # an unsharded machine distribution covers the whole space
    if d.shards is not None:
        return d.shards
    space_size = _space_size(d)
    if space_size is None:
        return None
    return [IndexRange(start=0, stop=space_size)]


def _merge_shards(a: PatternDistribution, b: PatternDistribution) -> list[IndexRange] | None:
    if _is_empty(a):
        return b.shards
    if _is_empty(b):
        return a.shards
    a_ranges, b_ranges = _claimed_ranges(a), _claimed_ranges(b)
    if a_ranges is None or b_ranges is None:
        return None
    ranges = sorted([*a_ranges, *b_ranges], key=lambda r: (r.start, r.stop))
    merged: list[IndexRange] = []
    for r in ranges:
        if merged and r.start < merged[-1].stop:
            raise MergeError(f"shard [{r.start}, {r.stop}) overlaps another shard")
        if merged and r.start == merged[-1].stop:
            merged[-1] = IndexRange(start=merged[-1].start, stop=r.stop)
        else:
            merged.append(r)
    space_size = _space_size(a)
    if len(merged) == 1 and merged[0].start == 0 and merged[0].stop == space_size:
        return None
    return merged


def merge(a: PatternDistribution, b: PatternDistribution) -> PatternDistribution:
    """Add two distributions of the same source pointwise.

    Shard ranges are unioned; once they cover the whole machine space the
    result is unsharded.
    """
    if a.source != b.source:
        raise MergeError(f"incompatible sources: {a.source.params} vs {b.source.params}")
    if a.seed != b.seed:
        raise MergeError(f"incompatible seeds: {a.seed} vs {b.seed}")
    shards = _merge_shards(a, b)
    counts = Counter(a.counts)
    counts.update(b.counts)
    return PatternDistribution(
        source=a.source,
        seed=a.seed,
        total_runs=a.total_runs + b.total_runs,
        contributing_runs=a.contributing_runs + b.contributing_runs,
        counts=dict(counts),
        shards=shards,
    )


def ctm_complexity(d: PatternDistribution, s: str) -> float:
    """CTM-style estimate -log2(frequency(s)) in bits."""
    try:
        count = d.counts[s]
    except KeyError:
        raise NotObservedError(s) from None
    return math.log2(d.total_count / count)


def ctm_table(d: PatternDistribution) -> list[tuple[str, float]]:
    """CTM estimate of every support string, in canonical order."""
    total = d.total_count
    return [(e.string, math.log2(total / e.count)) for e in d.entries()]


def rank_of(d: PatternDistribution, s: str, length_restricted: bool = False) -> int:
    """1-based rank of s by descending frequency, ties broken lexicographically.

    With `length_restricted`, only strings of the same length as s compete.
    """
    try:
        count = d.counts[s]
    except KeyError:
        raise NotObservedError(s) from None
    pool = d.by_length(len(s)) if length_restricted else d.counts
    return 1 + sum(1 for t, c in pool.items() if c > count or (c == count and t < s))
