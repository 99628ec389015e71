"""Elementary and 2D totalistic cellular automata with cutoff sampling.

Both automata use periodic boundaries. 1D rules follow the elementary
numbering (bit 4*left + 2*self + right of the rule gives the new cell); 2D
rules are totalistic over the 9-cell Moore neighborhood (bit `sum` of the
rule code, sum in 0..9, cell included).
"""

import logging
from pathlib import Path

import numpy as np

from algoprob.distribution import distribution_from_rows
from algoprob.models import (
    Grid2D,
    InitialCondition,
    ParameterError,
    PatternDistribution,
    Snapshot,
    SourceDescriptor,
    SourceKind,
    SpaceTime1D,
    WhichRows,
)
from algoprob.rng import random_bits

logger = logging.getLogger(__name__)

MAX_TOTALISTIC_RULE = 2**10


def _bits_to_array(bits: str) -> np.ndarray:
    return np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")


def _row_to_bits(row: np.ndarray) -> str:
    return (row.astype(np.uint8) + ord("0")).tobytes().decode("ascii")


def _initial_row(
    width: int,
    init: InitialCondition,
    seed: int | None,
    initial_row: str | None,
) -> np.ndarray:
    if initial_row is not None:
        if len(initial_row) != width or initial_row.strip("01"):
            raise ParameterError(f"initial row must be {width} bits")
        return _bits_to_array(initial_row)
    if init is InitialCondition.RANDOM:
        if seed is None:
            raise ParameterError("random initial condition requires a seed")
        return _bits_to_array(random_bits(width, seed))
    row = np.zeros(width, dtype=np.uint8)
    row[width // 2] = 1
    return row


def eca_run(
    rule: int,
    width: int,
    steps: int,
    init: InitialCondition = InitialCondition.SINGLE,
    seed: int | None = None,
    initial_row: str | None = None,
) -> SpaceTime1D:
    """Run an elementary cellular automaton with periodic boundary.

    Args:
        rule: Elementary rule number 0..255
        width: Number of cells (at least 3)
        steps: Number of updates; rows 0..steps are returned
        init: Single centered 1 or seeded random bits
        seed: Seed for random initial bits
        initial_row: Explicit initial row overriding `init`
    """
    if not 0 <= rule <= 255:
        raise ParameterError(f"elementary rule must be in 0..255, got {rule}")
    if width < 3:
        raise ParameterError(f"width must be at least 3, got {width}")
    if steps < 1:
        raise ParameterError(f"steps must be at least 1, got {steps}")

    rule_table = np.unpackbits(np.array([rule], dtype=np.uint8), bitorder="little").reshape(2, 2, 2)
    rows = np.empty((steps + 1, width), dtype=np.uint8)
    rows[0] = _initial_row(width, init, seed, initial_row)
    for t in range(steps):
        wrapped = np.pad(rows[t], 1, mode="wrap")
        rows[t + 1] = rule_table[wrapped[:-2], wrapped[1:-1], wrapped[2:]]

    logger.debug("ECA rule %d: %d steps over %d cells", rule, steps, width)
    return SpaceTime1D(
        rule=rule,
        width=width,
        rows=rows,
        seed=seed if initial_row is None and init is InitialCondition.RANDOM else None,
        init=None if initial_row is not None else init,
    )


def _totalistic_step(grid: np.ndarray, lookup: np.ndarray) -> np.ndarray:
    total = np.zeros(grid.shape, dtype=np.uint8)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            total += np.roll(grid, (dy, dx), axis=(0, 1))
    return lookup[total]


def ca2d_run(
    rule: int,
    size: tuple[int, int],
    steps: int,
    seed: int | None = None,
    snapshot_every: int = 1,
    initial: np.ndarray | None = None,
) -> Grid2D:
    """Run a 2D totalistic 9-neighbor automaton from seeded random bits.

    Snapshots are kept at steps 0, snapshot_every, 2*snapshot_every, ... up to `steps`.

    Args:
        rule: Totalistic code below 2**10
        size: (height, width), both at least 3
        steps: Number of updates
        seed: Seed for the initial matrix (each cell an independent fair bit)
        snapshot_every: Interval between snapshots
        initial: Explicit initial matrix overriding the seeded one
    """
    if not 0 <= rule < MAX_TOTALISTIC_RULE:
        raise ParameterError(f"totalistic rule must be in 0..{MAX_TOTALISTIC_RULE - 1}, got {rule}")
    height, width = size
    if height < 3 or width < 3:
        raise ParameterError(f"grid must be at least 3x3, got {height}x{width}")
    if steps < 1 or snapshot_every < 1:
        raise ParameterError("steps and snapshot interval must be positive")

    if initial is not None:
        grid = np.asarray(initial, dtype=np.uint8)
        if grid.shape != (height, width) or grid.max(initial=0) > 1:
            raise ParameterError(f"initial matrix must be a {height}x{width} bit array")
        seed = None
    else:
        if seed is None:
            raise ParameterError("a seed is required for the random initial matrix")
        grid = _bits_to_array(random_bits(height * width, seed)).reshape(height, width)

    lookup = np.array([(rule >> s) & 1 for s in range(10)], dtype=np.uint8)
    snapshots = [Snapshot(step=0, cells=grid.copy())]
    for t in range(1, steps + 1):
        grid = _totalistic_step(grid, lookup)
        if t % snapshot_every == 0:
            snapshots.append(Snapshot(step=t, cells=grid.copy()))

    logger.debug("2D rule %d: %d steps on %dx%d, %d snapshots", rule, steps, height, width, len(snapshots))
    return Grid2D(
        rule=rule,
        size=(height, width),
        snapshots=snapshots,
        seed=seed,
        steps=steps,
        snapshot_every=snapshot_every,
    )


def _source_descriptor(source: SpaceTime1D | Grid2D) -> SourceDescriptor:
    if isinstance(source, SpaceTime1D):
        params = {
            "dims": 1,
            "rule": source.rule,
            "width": source.width,
            "steps": source.rows.shape[0] - 1,
            "init": source.init.value if source.init else "explicit",
            "boundary": source.boundary,
        }
    else:
        params = {
            "dims": 2,
            "rule": source.rule,
            "height": source.size[0],
            "width": source.size[1],
            "steps": source.steps,
            "snapshot_every": source.snapshot_every,
            "init": "random" if source.seed is not None else "explicit",
            "boundary": "periodic",
        }
    return SourceDescriptor(kind=SourceKind.AUTOMATON, params=params)


def cutoff_distribution(
    source: SpaceTime1D | Grid2D,
    k: int,
    overlap: bool = True,
    which_rows: WhichRows = WhichRows.FINAL,
) -> PatternDistribution:
    """Cut automaton rows into k-tuples and count them.

    For a 2D source, each selected snapshot contributes its matrix rows.
    """
    if isinstance(source, SpaceTime1D):
        matrices = [source.rows]
        width = source.width
    else:
        matrices = [snap.cells for snap in source.snapshots]
        width = source.size[1]
    if k > width:
        raise ParameterError(f"k={k} exceeds the row width {width}")
    if which_rows is WhichRows.FINAL:
        rows = [matrices[-1][-1]] if isinstance(source, SpaceTime1D) else list(matrices[-1])
    else:
        rows = [row for matrix in matrices for row in matrix]

    descriptor = _source_descriptor(source).with_params(
        k=k, overlap=overlap, rows=which_rows.value
    )
    return distribution_from_rows(
        (_row_to_bits(row) for row in rows), k, overlap, descriptor, seed=source.seed
    )


def export_pbm(grid: Grid2D, directory: Path, prefix: str = "snapshot") -> list[Path]:
    """Write each snapshot as a binary PBM (P4) image, 1 = black.

    Returns:
        Written paths, in snapshot order
    """
    directory.mkdir(parents=True, exist_ok=True)
    height, width = grid.size
    paths = []
    for snap in grid.snapshots:
        path = directory / f"{prefix}_{snap.step:05d}.pbm"
        header = f"P4\n{width} {height}\n".encode("ascii")
        path.write_bytes(header + np.packbits(snap.cells.astype(np.uint8), axis=1).tobytes())
        paths.append(path)
    return paths


def render_rows(space_time: SpaceTime1D) -> str:
    """Text rendering of a space-time diagram, one line per row."""
    return "\n".join(
        "".join("█" if cell else " " for cell in row) for row in space_time.rows
    )
