"""Data models for algoprob."""

import hashlib
import math
from enum import Enum
from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

BitString = Annotated[str, Field(pattern=r"^[01]+$")]
ParamValue = int | bool | str | None


class AlgoProbError(Exception):
    """Base class for algoprob errors."""


class ParameterError(AlgoProbError, ValueError):
    """Raised when an operation receives parameters outside its domain."""


class CapacityError(AlgoProbError):
    """Raised when a machine space exceeds the configured budget."""

    def __init__(self, n: int, max_states: int):
        self.n = n
        self.max_states = max_states
        super().__init__(
            f"(n,2) space with n={n} exceeds the configured budget of "
            f"max_states={max_states}"
        )


class NotObservedError(AlgoProbError, KeyError):
    """Raised when a string is absent from a distribution's support."""

    def __init__(self, string: str):
        self.string = string
        super().__init__(f"String '{string}' was not observed in the distribution")

    def __str__(self) -> str:
        return self.args[0]


class MergeError(AlgoProbError):
    """Raised when two distributions come from incompatible sources."""


class InsufficientSupportError(AlgoProbError):
    """Raised when fewer than three strings can be paired for a comparison."""

    def __init__(self, pair_count: int, k: int):
        self.pair_count = pair_count
        self.k = k
        super().__init__(
            f"Only {pair_count} length-{k} string(s) can be paired; at least 3 are required"
        )


class UndefinedCorrelationError(AlgoProbError):
    """Raised when a rank vector has zero variance."""


class DistributionLoadError(AlgoProbError):
    """Raised when a distribution file is malformed or inconsistent."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"Invalid distribution file ({field}): {message}")


# --- Turing machines -------------------------------------------------------


class Move(str, Enum):
    """Head movement after writing."""

    LEFT = "L"
    RIGHT = "R"


class TransitionEntry(BaseModel):
    """One row of a transition table: what to write, where to go, which state next."""

    model_config = ConfigDict(frozen=True)

    write_symbol: int = Field(ge=0, le=1)
    move: Move
    next_state: int = Field(ge=0, description="0 is the halt state")


class TuringMachineSpec(BaseModel):
    """Complete transition table of an n-state 2-symbol machine.

    Entries are ordered (state 1, symbol 0), (state 1, symbol 1), (state 2, symbol 0), ...
    """

    model_config = ConfigDict(frozen=True)

    n_states: int = Field(ge=1)
    entries: tuple[TransitionEntry, ...]

    @model_validator(mode="after")
    def _check_table(self) -> "TuringMachineSpec":
        if len(self.entries) != 2 * self.n_states:
            raise ValueError(
                f"expected {2 * self.n_states} entries, got {len(self.entries)}"
            )
        for entry in self.entries:
            if entry.next_state > self.n_states:
                raise ValueError(
                    f"next_state {entry.next_state} outside [0, {self.n_states}]"
                )
        return self

    def entry(self, state: int, symbol: int) -> TransitionEntry:
        return self.entries[2 * (state - 1) + symbol]


class RunStatus(str, Enum):
    HALTED = "halted"
    CAP_EXCEEDED = "cap_exceeded"


class RunOutcome(BaseModel):
    """Result of one bounded run."""

    model_config = ConfigDict(frozen=True)

    status: RunStatus
    steps: int = Field(ge=0)
    ones_count: int = Field(ge=0)
    output: BitString = Field(description="Cells scanned by the head, left to right")


class BusyBeaverResult(BaseModel):
    """Outcome of an exhaustive (n,2) search under a step cap."""

    n: int = Field(ge=1)
    sigma: int = Field(default=0, ge=0, description="Max ones among halters")
    s_max: int = Field(default=0, ge=0, description="Max steps among halters")
    halting_count: int = Field(default=0, ge=0)
    total_count: int = Field(ge=0)
    cap_used: int = Field(ge=1)
    sigma_index: int | None = Field(default=None, description="A machine achieving sigma")
    s_max_index: int | None = Field(default=None, description="A machine achieving s_max")

    @model_validator(mode="after")
    def _check_counts(self) -> "BusyBeaverResult":
        if self.halting_count > self.total_count:
            raise ValueError("halting_count exceeds total_count")
        if self.halting_count and self.sigma > self.s_max + 1:
            raise ValueError("sigma cannot exceed s_max + 1")
        return self

    def merge(self, other: "BusyBeaverResult") -> "BusyBeaverResult":
        """Combine the results of two disjoint index ranges of the same search.

        On equal values the champion of `self` is kept, so merging in index
        order keeps the lowest champion index.
        """
        if (self.n, self.cap_used) != (other.n, other.cap_used):
            raise MergeError(
                f"cannot merge searches n={self.n} cap={self.cap_used} "
                f"and n={other.n} cap={other.cap_used}"
            )

        def champion(mine: int | None, mine_value: int, theirs: int | None, theirs_value: int):
            if theirs is None or (mine is not None and mine_value >= theirs_value):
                return mine
            return theirs

        return BusyBeaverResult(
            n=self.n,
            sigma=max(self.sigma, other.sigma),
            s_max=max(self.s_max, other.s_max),
            halting_count=self.halting_count + other.halting_count,
            total_count=self.total_count + other.total_count,
            cap_used=self.cap_used,
            sigma_index=champion(self.sigma_index, self.sigma, other.sigma_index, other.sigma),
            s_max_index=champion(self.s_max_index, self.s_max, other.s_max_index, other.s_max),
        )


# --- Distributions ---------------------------------------------------------


class SourceKind(str, Enum):
    MACHINES = "machines"
    AUTOMATON = "automaton"
    EMPIRICAL = "empirical"


class InitMode(str, Enum):
    BLANK = "blank"
    RANDOM = "random"


class IndexRange(BaseModel):
    """Half-open range [start, stop) of machine indices."""

    model_config = ConfigDict(frozen=True)

    start: int = Field(ge=0)
    stop: int = Field(ge=0)

    @model_validator(mode="after")
    def _ordered(self) -> "IndexRange":
        if self.stop < self.start:
            raise ValueError("stop must not precede start")
        return self

    def __len__(self) -> int:
        return self.stop - self.start


class SourceDescriptor(BaseModel):
    """Provenance of a distribution: what produced it and with which parameters."""

    model_config = ConfigDict(frozen=True)

    kind: SourceKind
    params: dict[str, ParamValue] = Field(default_factory=dict)

    @field_validator("params")
    @classmethod
    def _sorted_params(cls, params: dict[str, Any]) -> dict[str, Any]:
        return dict(sorted(params.items()))

    def with_params(self, **extra: ParamValue) -> "SourceDescriptor":
        return SourceDescriptor(kind=self.kind, params={**self.params, **extra})


class PatternEntry(BaseModel):
    string: BitString
    count: int = Field(gt=0)
    frequency: float = Field(gt=0.0, le=1.0)


def canonical_key(item: tuple[str, int]) -> tuple[int, int, str]:
    """Sort key: length ascending, count (frequency) descending, lexicographic."""
    string, count = item
    return (len(string), -count, string)


class PatternDistribution(BaseModel):
    """A provenance-stamped frequency distribution over binary strings."""

    source: SourceDescriptor
    seed: int | None = Field(default=None, ge=0, lt=2**64)
    total_runs: int = Field(ge=0)
    contributing_runs: int = Field(ge=0)
    counts: dict[BitString, int] = Field(default_factory=dict)
    shards: list[IndexRange] | None = Field(
        default=None, description="Machine-index ranges covered, when this is a partial result"
    )

    @field_validator("counts")
    @classmethod
    def _positive_counts(cls, counts: dict[str, int]) -> dict[str, int]:
        for string, count in counts.items():
            if count <= 0:
                raise ValueError(f"count for '{string}' must be positive, got {count}")
        return counts

    @model_validator(mode="after")
    def _check_runs(self) -> "PatternDistribution":
        if self.contributing_runs > self.total_runs:
            raise ValueError("contributing_runs exceeds total_runs")
        return self

    @classmethod
    def empty(
        cls, source: SourceDescriptor, seed: int | None = None
    ) -> "PatternDistribution":
        return cls(source=source, seed=seed, total_runs=0, contributing_runs=0)

    @property
    def total_count(self) -> int:
        return sum(self.counts.values())

    @property
    def support_size(self) -> int:
        return len(self.counts)

    def frequency(self, string: str) -> float:
        """Relative frequency of a string; NotObservedError when absent."""
        try:
            count = self.counts[string]
        except KeyError:
            raise NotObservedError(string) from None
        return count / self.total_count

    def entries(self) -> list[PatternEntry]:
        """Entries in canonical order."""
        total = self.total_count
        return [
            PatternEntry(string=s, count=c, frequency=c / total)
            for s, c in sorted(self.counts.items(), key=canonical_key)
        ]

    def lengths(self) -> list[int]:
        return sorted({len(s) for s in self.counts})

    def by_length(self, length: int) -> dict[str, int]:
        """Derived view: counts of the strings of one length."""
        return {s: c for s, c in self.counts.items() if len(s) == length}

    def frequency_sum(self) -> float:
        total = self.total_count
        return math.fsum(c / total for c in self.counts.values()) if total else 0.0

    def checksum(self) -> str:
        """SHA-256 over the canonical entry list (string and count)."""
        digest = hashlib.sha256()
        for string, count in sorted(self.counts.items(), key=canonical_key):
            digest.update(f"{string},{count}\n".encode("ascii"))
        return digest.hexdigest()


# --- Automata --------------------------------------------------------------


class WhichRows(str, Enum):
    FINAL = "final"
    ALL = "all"


class InitialCondition(str, Enum):
    SINGLE = "single"
    RANDOM = "random"


class SpaceTime1D(BaseModel):
    """Rows of an elementary cellular automaton run; row 0 is the initial condition."""

    model_config = {"arbitrary_types_allowed": True}

    rule: int = Field(ge=0, le=255)
    width: int = Field(ge=3)
    boundary: str = "periodic"
    rows: np.ndarray = Field(description="uint8 array of shape (steps + 1, width)")
    seed: int | None = None
    init: InitialCondition | None = Field(default=None, description="None when an explicit row was given")

    @model_validator(mode="after")
    def _check_rows(self) -> "SpaceTime1D":
        if self.rows.ndim != 2 or self.rows.shape[1] != self.width:
            raise ValueError(f"rows must have shape (t, {self.width})")
        return self


class Snapshot(BaseModel):
    model_config = {"arbitrary_types_allowed": True}

    step: int = Field(ge=0)
    cells: np.ndarray


class Grid2D(BaseModel):
    """Snapshots of a 2D totalistic 9-neighbor automaton."""

    model_config = {"arbitrary_types_allowed": True}

    rule: int = Field(ge=0)
    size: tuple[int, int]
    snapshots: list[Snapshot]
    seed: int | None = None
    steps: int = Field(default=0, ge=0)
    snapshot_every: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_snapshots(self) -> "Grid2D":
        steps = [snap.step for snap in self.snapshots]
        if any(b <= a for a, b in zip(steps, steps[1:])):
            raise ValueError("snapshot steps must be strictly increasing")
        for snap in self.snapshots:
            if snap.cells.shape != self.size:
                raise ValueError(f"snapshot at step {snap.step} has shape {snap.cells.shape}")
        return self


# --- Empirical data --------------------------------------------------------


class Binarization(str, Enum):
    RAW_BITS = "rawbits"
    THRESHOLD_MEDIAN = "median"


class BitStream(BaseModel):
    bits: BitString
    origin: dict[str, ParamValue] = Field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.bits)


# --- Statistics ------------------------------------------------------------


class SupportPolicy(str, Enum):
    INTERSECTION = "intersection"
    UNION = "union"


class ProbeRank(BaseModel):
    """Rank of one probe string in both compared distributions (None when absent)."""

    string: BitString
    rank_a: int | None = None
    rank_b: int | None = None
    length_rank_a: int | None = None
    length_rank_b: int | None = None


class CorrelationReport(BaseModel):
    k: int = Field(ge=1)
    support_policy: SupportPolicy
    pair_count: int = Field(ge=3)
    strings: list[str]
    rho: float = Field(ge=-1.0, le=1.0)
    p_value: float = Field(gt=0.0, le=1.0)
    permutations: int = Field(ge=1)
    seed: int = Field(ge=0, lt=2**64)
    sources: tuple[SourceDescriptor, SourceDescriptor]
    probes: list[ProbeRank] = Field(default_factory=list)


# --- Symmetry --------------------------------------------------------------


class SymmetryOrbit(BaseModel):
    model_config = ConfigDict(frozen=True)

    canonical: BitString
    members: frozenset[str]

    @model_validator(mode="after")
    def _canonical_is_min(self) -> "SymmetryOrbit":
        if not 1 <= len(self.members) <= 4:
            raise ValueError("an orbit has between 1 and 4 members")
        if self.canonical != min(self.members):
            raise ValueError("canonical must be the lexicographic minimum of the orbit")
        return self


class CompressionReport(BaseModel):
    """Compressed-size ratios of π digits and of seeded random digits (ASCII)."""

    digits: int = Field(ge=1)
    pi_ratio: float = Field(gt=0.0)
    random_ratio: float = Field(gt=0.0)
    seed: int = Field(ge=0, lt=2**64)
