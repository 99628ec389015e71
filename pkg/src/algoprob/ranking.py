"""Rank correlation between two pattern distributions, with permutation significance.

Ranks are assigned by descending value with average ranks for ties and are
kept doubled (so they are integers); correlations are then computed in exact
integer arithmetic, which makes identical rankings give exactly 1.0 and
lets permuted statistics be compared without rounding.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from operator import mul

import numpy as np
from scipy.stats import rankdata

from algoprob.config import get_settings
from algoprob.distribution import rank_of
from algoprob.models import (
    CorrelationReport,
    InsufficientSupportError,
    NotObservedError,
    ParameterError,
    PatternDistribution,
    ProbeRank,
    SupportPolicy,
    UndefinedCorrelationError,
)
from algoprob.rng import substream

logger = logging.getLogger(__name__)

MIN_PAIRS = 3


def align(
    a: PatternDistribution,
    b: PatternDistribution,
    k: int,
    policy: SupportPolicy = SupportPolicy.INTERSECTION,
) -> tuple[list[str], list[float], list[float]]:
    """Pair the length-k frequencies of two distributions.

    Returns:
        (strings, frequencies in a, frequencies in b), strings sorted lexicographically
    """
    a_k, b_k = a.by_length(k), b.by_length(k)
    if not a_k or not b_k:
        raise ParameterError(f"both distributions need length-{k} entries")
    if policy is SupportPolicy.INTERSECTION:
        strings = sorted(a_k.keys() & b_k.keys())
    else:
        strings = sorted(a_k.keys() | b_k.keys())
    if len(strings) < MIN_PAIRS:
        raise InsufficientSupportError(len(strings), k)
    a_total, b_total = a.total_count, b.total_count
    x = [a_k.get(s, 0) / a_total for s in strings]
    y = [b_k.get(s, 0) / b_total for s in strings]
    return strings, x, y


def _doubled_ranks(values: Sequence[float]) -> list[int]:
    # rank 1 = largest value; ties share the average rank
    ranks = rankdata(-np.asarray(values, dtype=float), method="average")
    return [int(r) for r in np.rint(ranks * 2)]


def _validate(x: Sequence[float], y: Sequence[float]) -> None:
    if len(x) != len(y):
        raise ParameterError(f"vectors differ in length: {len(x)} vs {len(y)}")
    if len(x) < MIN_PAIRS:
        raise ParameterError(f"need at least {MIN_PAIRS} pairs, got {len(x)}")


def _spread(ranks: Sequence[int]) -> int:
    # m * Σr² - (Σr)², proportional to the rank variance
    m = len(ranks)
    total = sum(ranks)
    spread = m * sum(r * r for r in ranks) - total * total
    if spread == 0:
        raise UndefinedCorrelationError("a rank vector has zero variance (all values tied)")
    return spread


def _covariance(ra: Sequence[int], rb: Sequence[int], sum_a: int, sum_b: int) -> int:
    return len(ra) * sum(map(mul, ra, rb)) - sum_a * sum_b


def _rho(cov: int, spread_a: int, spread_b: int) -> float:
    if spread_a == spread_b:
        rho = cov / spread_a
    else:
        rho = cov / math.sqrt(spread_a * spread_b)
    return max(-1.0, min(1.0, rho))


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman's rho: Pearson correlation of the (average-tie) rank vectors."""
    _validate(x, y)
    ra, rb = _doubled_ranks(x), _doubled_ranks(y)
    spread_a, spread_b = _spread(ra), _spread(rb)
    return _rho(_covariance(ra, rb, sum(ra), sum(rb)), spread_a, spread_b)


def _shuffled(values: Sequence[int], seed: int, index: int) -> list[int]:
    # Fisher-Yates driven by the substream of (seed, shuffle index)
    gen = substream(seed, index)
    out = list(values)
    for j in range(len(out) - 1, 0, -1):
        r = gen.bounded(j + 1)
        out[j], out[r] = out[r], out[j]
    return out


def permutation_pvalue(
    x: Sequence[float], y: Sequence[float], permutations: int, seed: int
) -> float:
    """Two-sided permutation p-value of Spearman's rho.

    p = (1 + #{shuffles with |rho| >= |rho observed|}) / (permutations + 1),
    where each shuffle is a seeded Fisher-Yates permutation of y.
    """
    _validate(x, y)
    if permutations < 1:
        raise ParameterError(f"permutations must be at least 1, got {permutations}")
    ra, rb = _doubled_ranks(x), _doubled_ranks(y)
    _spread(ra)
    _spread(rb)
    sum_a, sum_b = sum(ra), sum(rb)
    observed = abs(_covariance(ra, rb, sum_a, sum_b))
    # the denominator is invariant under permuting y, so covariances compare directly
    hits = sum(
        1
        for i in range(permutations)
        if abs(_covariance(ra, _shuffled(rb, seed, i), sum_a, sum_b)) >= observed
    )
    return (1 + hits) / (permutations + 1)


def _probe(a: PatternDistribution, b: PatternDistribution, string: str) -> ProbeRank:
    def safe_rank(d: PatternDistribution, restricted: bool) -> int | None:
        try:
            return rank_of(d, string, length_restricted=restricted)
        except NotObservedError:
            return None

    return ProbeRank(
        string=string,
        rank_a=safe_rank(a, False),
        rank_b=safe_rank(b, False),
        length_rank_a=safe_rank(a, True),
        length_rank_b=safe_rank(b, True),
    )


def compare_report(
    a: PatternDistribution,
    b: PatternDistribution,
    k: int,
    policy: SupportPolicy = SupportPolicy.INTERSECTION,
    permutations: int | None = None,
    seed: int | None = None,
    probes: Iterable[str] = (),
) -> CorrelationReport:
    """Align, correlate and test two distributions at tuple length k.

    The result does not depend on argument order: the aligned vectors are put
    in checksum order before shuffling.
    """
    settings = get_settings()
    permutations = settings.permutations if permutations is None else permutations
    seed = settings.default_seed if seed is None else seed
    probes = list(probes)
    for probe in probes:
        if not probe or probe.strip("01"):
            raise ParameterError(f"probe must be a non-empty binary string, got '{probe}'")

    strings, x, y = align(a, b, k, policy)
    if b.checksum() < a.checksum():
        x, y = y, x
    rho = spearman(x, y)
    p_value = permutation_pvalue(x, y, permutations, seed)
    logger.info("Compared k=%d over %d pairs: rho=%.4f p=%.4g", k, len(strings), rho, p_value)

    return CorrelationReport(
        k=k,
        support_policy=policy,
        pair_count=len(strings),
        strings=strings,
        rho=rho,
        p_value=p_value,
        permutations=permutations,
        seed=seed,
        sources=(a.source, b.source),
        probes=[_probe(a, b, s) for s in probes],
    )
