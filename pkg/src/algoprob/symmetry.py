"""Orbits of binary strings under identity, reversal, complementation and both."""

import itertools
from collections import Counter
from collections.abc import Callable

from algoprob.models import ParameterError, PatternDistribution, SymmetryOrbit

MAX_BURNSIDE_LENGTH = 62

_COMPLEMENT = str.maketrans("01", "10")


def reverse(s: str) -> str:
    return s[::-1]


def complement(s: str) -> str:
    return s.translate(_COMPLEMENT)


def reverse_complement(s: str) -> str:
    return complement(s)[::-1]


transformations: dict[str, Callable[[str], str]] = {
    "id": lambda s: s,
    "re": reverse,
    "co": complement,
    "reco": reverse_complement,
}


def orbit(s: str) -> SymmetryOrbit:
    """Equivalence class of s under the four-element group."""
    if not s:
        raise ParameterError("orbit of the empty string is undefined")
    if s.strip("01"):
        raise ParameterError(f"not a binary string: '{s}'")
    members = frozenset(t(s) for t in transformations.values())
    return SymmetryOrbit(canonical=min(members), members=members)


def canonical(s: str) -> str:
    """Lexicographically smallest member of the orbit of s."""
    return orbit(s).canonical


def burnside_count(n: int) -> int:
    """Number of orbits among the 2^n strings of length n.

    Fixed points: id fixes 2^n, reversal fixes 2^ceil(n/2), complementation
    fixes none, reversal-complementation fixes 2^(n/2) when n is even.
    """
    if n < 1:
        raise ParameterError(f"length must be at least 1, got {n}")
    if n > MAX_BURNSIDE_LENGTH:
        raise ParameterError(f"length {n} exceeds the supported maximum of {MAX_BURNSIDE_LENGTH}")
    if n % 2 == 0:
        return (2**n + 2 ** (n // 2 + 1)) // 4
    return (2**n + 2 ** ((n + 1) // 2)) // 4


def brute_force_orbit_count(n: int) -> int:
    """Orbit count by enumerating every string of length n."""
    if n < 1:
        raise ParameterError(f"length must be at least 1, got {n}")
    return len({canonical("".join(bits)) for bits in itertools.product("01", repeat=n)})


def collapse_by_symmetry(d: PatternDistribution) -> PatternDistribution:
    """Sum the counts of each orbit under its canonical representative."""
    counts: Counter[str] = Counter()
    for string, count in d.counts.items():
        counts[canonical(string)] += count
    return d.model_copy(
        update={
            "source": d.source.with_params(symmetry="collapsed"),
            "counts": dict(counts),
        }
    )
