"""Enumeration and bounded simulation of n-state 2-symbol Turing machines.

Machines are indexed by a mixed-radix number: each of the 2n transition
entries is one digit d in base 4(n+1), least significant digit first, with
write = d mod 2, move = Left if (d div 2) mod 2 == 0 else Right, and
next_state = d div 4 (0 halts).
"""

import logging
import time
from collections.abc import Callable
from functools import lru_cache

from algoprob.config import get_settings
from algoprob.models import (
    BusyBeaverResult,
    CapacityError,
    Move,
    ParameterError,
    RunOutcome,
    RunStatus,
    TransitionEntry,
    TuringMachineSpec,
)
from algoprob.parallel import plan_shards, run_shards

logger = logging.getLogger(__name__)

Table = tuple[tuple[int, int, int], ...]

_TO_CELLS = bytes.maketrans(b"01", b"\x00\x01")
_TO_TEXT = bytes.maketrans(b"\x00\x01", b"01")


def machine_space_size(n: int) -> int:
    """Number of machines in (n,2): (4(n+1))^(2n)."""
    if n < 1:
        raise ParameterError(f"number of states must be at least 1, got {n}")
    return (4 * (n + 1)) ** (2 * n)


def check_capacity(n: int) -> None:
    """Reject machine spaces beyond the configured budget."""
    settings = get_settings()
    if n < 1:
        raise ParameterError(f"number of states must be at least 1, got {n}")
    if n > settings.max_states:
        raise CapacityError(n, settings.max_states)
    if n >= settings.long_running_states:
        logger.warning(
            "(%d,2) holds %d machines; expect a long-running enumeration",
            n,
            machine_space_size(n),
        )


@lru_cache(maxsize=None)
def _digit_entries(n: int) -> tuple[tuple[int, int, int], ...]:
    # (write, head delta, next state) for every digit of base 4(n+1)
    return tuple((d & 1, 1 if d & 2 else -1, d >> 2) for d in range(4 * (n + 1)))


def decode_table(index: int, n: int) -> Table:
    entries = _digit_entries(n)
    base = len(entries)
    table = []
    for _ in range(2 * n):
        index, digit = divmod(index, base)
        table.append(entries[digit])
    return tuple(table)


def _spec_table(spec: TuringMachineSpec) -> Table:
    return tuple(
        (e.write_symbol, 1 if e.move is Move.RIGHT else -1, e.next_state) for e in spec.entries
    )


def _entry_digit(entry: TransitionEntry) -> int:
    return entry.write_symbol + (2 if entry.move is Move.RIGHT else 0) + 4 * entry.next_state


def decode_machine(index: int, n: int) -> TuringMachineSpec:
    """Decode a machine index into its transition table."""
    size = machine_space_size(n)
    if not 0 <= index < size:
        raise ParameterError(f"index {index} outside the (n,2) space of {size} machines (n={n})")
    entries = tuple(
        TransitionEntry(
            write_symbol=write,
            move=Move.RIGHT if delta > 0 else Move.LEFT,
            next_state=nxt,
        )
        for write, delta, nxt in decode_table(index, n)
    )
    return TuringMachineSpec(n_states=n, entries=entries)


def encode_machine(spec: TuringMachineSpec) -> int:
    """Inverse of decode_machine."""
    base = 4 * (spec.n_states + 1)
    index = 0
    for entry in reversed(spec.entries):
        index = index * base + _entry_digit(entry)
    return index


def mirror_machine(spec: TuringMachineSpec) -> TuringMachineSpec:
    """Swap Left and Right in every entry."""
    flipped = tuple(
        entry.model_copy(
            update={"move": Move.LEFT if entry.move is Move.RIGHT else Move.RIGHT}
        )
        for entry in spec.entries
    )
    return TuringMachineSpec(n_states=spec.n_states, entries=flipped)


def format_machine(spec: TuringMachineSpec) -> str:
    """Compact text form, e.g. ``1RB 1LA 1LA 1RH`` (H is the halt state)."""
    parts = []
    for entry in spec.entries:
        target = "H" if entry.next_state == 0 else chr(ord("A") + entry.next_state - 1)
        parts.append(f"{entry.write_symbol}{entry.move.value}{target}")
    return " ".join(parts)


def table_can_halt(table: Table) -> bool:
    reachable = {1}
    frontier = [1]
    while frontier:
        state = frontier.pop()
        for symbol in (0, 1):
            nxt = table[2 * state - 2 + symbol][2]
            if nxt == 0:
                return True
            if nxt not in reachable:
                reachable.add(nxt)
                frontier.append(nxt)
    return False


def can_halt(spec: TuringMachineSpec) -> bool:
    """Whether a halt transition is reachable from state 1 in the transition graph.

    False means the machine never halts, whatever the tape holds.
    """
    return table_can_halt(_spec_table(spec))


def _runaway_states(table: Table, n: int, delta: int) -> tuple[bool, ...]:
    # flags[q]: starting in q on unexplored blank tape, the machine walks off
    # in direction `delta` forever
    flags = [False] * (n + 1)
    for q in range(1, n + 1):
        state = q
        seen = set()
        escapes = True
        while state not in seen:
            seen.add(state)
            _, move, nxt = table[2 * state - 2]
            if move != delta or nxt == 0:
                escapes = False
                break
            state = nxt
        flags[q] = escapes
    return tuple(flags)


def simulate(
    table: Table,
    tape: str,
    cap: int,
    runaway: tuple[tuple[bool, ...], tuple[bool, ...]] | None = None,
) -> tuple[bool, int, int, str] | None:
    """Run a machine table for at most `cap` steps.

    Returns (halted, steps, ones, output), or None when `runaway` flags are
    given and the machine provably walks off into blank tape forever.
    """
    offset = cap
    cells = bytearray(offset + max(len(tape), cap) + 1)
    if tape:
        cells[offset : offset + len(tape)] = tape.encode("ascii").translate(_TO_CELLS)
    blank_from = offset + len(tape)
    pos = lo = hi = offset
    state = 1
    steps = 0
    while steps < cap:
        if pos > hi:
            hi = pos
            if runaway is not None and pos >= blank_from and runaway[1][state]:
                return None
        elif pos < lo:
            lo = pos
            if runaway is not None and runaway[0][state]:
                return None
        write, delta, state = table[2 * state - 2 + cells[pos]]
        cells[pos] = write
        pos += delta
        steps += 1
        if state == 0:
            break
    output = bytes(cells[lo : hi + 1]).translate(_TO_TEXT).decode("ascii")
    return state == 0, steps, cells.count(1), output


def runaway_flags(table: Table, n: int) -> tuple[tuple[bool, ...], tuple[bool, ...]]:
    return _runaway_states(table, n, -1), _runaway_states(table, n, 1)


def run(spec: TuringMachineSpec, initial_tape: str = "", cap: int = 1000) -> RunOutcome:
    """Run a machine from state 1 with the head on cell 0.

    Args:
        spec: Machine to run
        initial_tape: Bits placed from cell 0 rightwards (empty = blank tape)
        cap: Maximum number of steps

    Returns:
        RunOutcome; CapExceeded is a normal outcome, never an error
    """
    if cap < 1:
        raise ParameterError(f"cap must be at least 1, got {cap}")
    if initial_tape.strip("01"):
        raise ParameterError("initial tape must be a binary string")
    halted, steps, ones, output = simulate(_spec_table(spec), initial_tape, cap)
    return RunOutcome(
        status=RunStatus.HALTED if halted else RunStatus.CAP_EXCEEDED,
        steps=steps,
        ones_count=ones,
        output=output,
    )


def is_mirror_representative(index: int, n: int) -> bool:
    """True for the member of a mirror pair whose (state 1, symbol 0) entry moves Left."""
    return not (index % (4 * (n + 1))) & 2


def _busy_beaver_shard(
    start: int, stop: int, n: int, cap: int, use_mirror: bool
) -> tuple[int, int, int, int, int | None, int | None]:
    # (total, halting, sigma, s_max, sigma_index, s_max_index)
    total = halting = sigma = s_max = 0
    sigma_index = s_max_index = None
    for index in range(start, stop):
        weight = 1
        if use_mirror:
            if not is_mirror_representative(index, n):
                continue
            weight = 2
        total += weight
        table = decode_table(index, n)
        if not table_can_halt(table):
            continue
        result = simulate(table, "", cap, runaway_flags(table, n))
        if result is None or not result[0]:
            continue
        _, steps, ones, _ = result
        halting += weight
        if sigma_index is None or ones > sigma:
            sigma, sigma_index = ones, index
        if s_max_index is None or steps > s_max:
            s_max, s_max_index = steps, index
    return total, halting, sigma, s_max, sigma_index, s_max_index


def busy_beaver_search(
    n: int,
    cap: int,
    workers: int | None = None,
    use_mirror: bool = True,
    progress_callback: Callable[[int, int], None] | None = None,
) -> BusyBeaverResult:
    """Run every machine of (n,2) from blank tape and report Σ(n), S(n) under the cap.

    Values are exact when cap exceeds the true S(n) and lower bounds otherwise.

    Args:
        n: Number of states
        cap: Step cap for each run
        workers: Process count (defaults to settings)
        use_mirror: Simulate one machine of each mirror pair and count it twice
        progress_callback: Called with (completed shards, total shards)
    """
    if cap < 1:
        raise ParameterError(f"cap must be at least 1, got {cap}")
    check_capacity(n)
    settings = get_settings()
    workers = workers or settings.workers
    size = machine_space_size(n)
    shards = plan_shards(size, workers, settings.shards_per_worker)

    started = time.perf_counter()
    parts = run_shards(
        _busy_beaver_shard,
        shards,
        args=(n, cap, use_mirror),
        workers=workers,
        progress_callback=progress_callback,
    )

    result = BusyBeaverResult(n=n, total_count=0, cap_used=cap)
    for total, halting, sigma, s_max, sigma_index, s_max_index in parts:
        result = result.merge(
            BusyBeaverResult(
                n=n,
                sigma=sigma,
                s_max=s_max,
                halting_count=halting,
                total_count=total,
                cap_used=cap,
                sigma_index=sigma_index,
                s_max_index=s_max_index,
            )
        )
    logger.info(
        "Busy Beaver search n=%d cap=%d: sigma=%d s_max=%d halting=%d/%d in %.2fs",
        n,
        cap,
        result.sigma,
        result.s_max,
        result.halting_count,
        result.total_count,
        time.perf_counter() - started,
    )
    return result

