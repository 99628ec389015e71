"""Tests for elementary and 2D totalistic cellular automata."""

import numpy as np
import pytest
from pydantic import ValidationError

from algoprob.automata import ca2d_run, cutoff_distribution, eca_run, export_pbm, render_rows
from algoprob.models import (
    Grid2D,
    InitialCondition,
    ParameterError,
    Snapshot,
    SourceKind,
    WhichRows,
)
from algoprob.rng import random_bits


def row(space_time, t: int) -> str:
    return "".join(str(c) for c in space_time.rows[t])


class TestEcaRun:
    def test_rule_30_first_step(self):
        result = eca_run(30, 7, 1)
        assert row(result, 0) == "0001000"
        assert row(result, 1) == "0011100"

    def test_rule_90_first_step(self):
        assert row(eca_run(90, 7, 1), 1) == "0010100"

    def test_rule_0_clears(self):
        result = eca_run(0, 9, 3)
        assert not result.rows[1:].any()

    def test_identity_rule_keeps_row(self):
        result = eca_run(204, 6, 5, initial_row="011010")
        assert all(row(result, t) == "011010" for t in range(6))
        assert result.init is None

    def test_periodic_boundary(self):
        # rule 170 shifts every cell one place left
        result = eca_run(170, 5, 1, initial_row="10000")
        assert row(result, 1) == "00001"

    def test_shape(self):
        assert eca_run(110, 20, 15).rows.shape == (16, 20)

    def test_shift_equivariance(self):
        for seed in range(5):
            bits = random_bits(31, seed)
            shifted = bits[5:] + bits[:5]
            a = eca_run(110, 31, 20, initial_row=bits)
            b = eca_run(110, 31, 20, initial_row=shifted)
            assert np.array_equal(np.roll(a.rows, -5, axis=1), b.rows)

    def test_random_init_is_seeded(self):
        a = eca_run(30, 64, 10, init=InitialCondition.RANDOM, seed=5)
        b = eca_run(30, 64, 10, init=InitialCondition.RANDOM, seed=5)
        assert np.array_equal(a.rows, b.rows)
        assert a.seed == 5

    def test_random_init_requires_seed(self):
        with pytest.raises(ParameterError):
            eca_run(30, 64, 10, init=InitialCondition.RANDOM)

    @pytest.mark.parametrize(
        "rule, width, steps", [(256, 7, 1), (-1, 7, 1), (30, 2, 1), (30, 7, 0)]
    )
    def test_invalid_parameters(self, rule, width, steps):
        with pytest.raises(ParameterError):
            eca_run(rule, width, steps)

    def test_initial_row_length(self):
        with pytest.raises(ParameterError):
            eca_run(30, 7, 1, initial_row="0101")


class TestCa2dRun:
    def test_quiescent_zero_grid(self):
        grid = ca2d_run(2, (5, 5), 6, initial=np.zeros((5, 5), dtype=np.uint8))
        assert all(not snap.cells.any() for snap in grid.snapshots)

    def test_all_sums_alive(self):
        grid = ca2d_run(2**10 - 1, (4, 4), 1, seed=1)
        assert grid.snapshots[-1].cells.all()

    def test_single_cell_with_rule_one_neighbor(self):
        # bit 1 set: a cell is alive iff exactly one cell of its neighborhood was
        initial = np.zeros((5, 5), dtype=np.uint8)
        initial[2, 2] = 1
        grid = ca2d_run(2, (5, 5), 1, initial=initial)
        expected = np.zeros((5, 5), dtype=np.uint8)
        expected[1:4, 1:4] = 1
        assert np.array_equal(grid.snapshots[-1].cells, expected)

    def test_snapshot_schedule(self):
        grid = ca2d_run(746, (6, 6), 10, seed=3, snapshot_every=3)
        assert [snap.step for snap in grid.snapshots] == [0, 3, 6, 9]

    def test_seeded_initial_grid(self):
        a = ca2d_run(746, (8, 8), 2, seed=9)
        b = ca2d_run(746, (8, 8), 2, seed=9)
        assert np.array_equal(a.snapshots[0].cells, b.snapshots[0].cells)

    def test_requires_seed(self):
        with pytest.raises(ParameterError):
            ca2d_run(746, (8, 8), 2)

    def test_rule_out_of_range(self):
        with pytest.raises(ParameterError):
            ca2d_run(1024, (8, 8), 2, seed=1)

    def test_rule_40_full_grid_dies(self):
        grid = ca2d_run(40, (3, 3), 1, initial=np.ones((3, 3), dtype=np.uint8))
        assert not grid.snapshots[-1].cells.any()

    def test_rule_40_snapshots_are_deterministic(self):
        a = ca2d_run(40, (100, 100), 18, seed=42, snapshot_every=6)
        b = ca2d_run(40, (100, 100), 18, seed=42, snapshot_every=6)
        assert len(a.snapshots) == 4
        assert all(np.array_equal(x.cells, y.cells) for x, y in zip(a.snapshots, b.snapshots))

    def test_step_zero_is_seeded_matrix(self):
        grid = ca2d_run(40, (4, 6), 1, seed=8)
        expected = np.array([int(b) for b in random_bits(24, 8)], dtype=np.uint8).reshape(4, 6)
        assert np.array_equal(grid.snapshots[0].cells, expected)

    def test_snapshots_must_increase(self):
        cells = np.zeros((3, 3), dtype=np.uint8)
        with pytest.raises(ValidationError):
            Grid2D(
                rule=0,
                size=(3, 3),
                snapshots=[Snapshot(step=2, cells=cells), Snapshot(step=1, cells=cells)],
            )


class TestCutoffDistribution:
    def test_final_row_overlapping(self):
        source = eca_run(204, 4, 1, initial_row="0101")
        d = cutoff_distribution(source, 2)
        assert d.counts == {"01": 2, "10": 1}
        assert d.frequency("01") == pytest.approx(2 / 3)

    def test_final_row_disjoint(self):
        source = eca_run(204, 4, 1, initial_row="0101")
        d = cutoff_distribution(source, 2, overlap=False)
        assert d.counts == {"01": 2}
        assert d.frequency("01") == 1.0

    def test_all_rows(self):
        source = eca_run(30, 7, 1)
        d = cutoff_distribution(source, 7, which_rows=WhichRows.ALL)
        assert d.counts == {"0001000": 1, "0011100": 1}

    def test_source_descriptor(self):
        d = cutoff_distribution(eca_run(30, 11, 5), 3)
        assert d.source.kind is SourceKind.AUTOMATON
        assert d.source.params["rule"] == 30
        assert d.source.params["k"] == 3
        assert d.source.params["rows"] == "final"

    def test_2d_final_snapshot_rows(self):
        grid = ca2d_run(746, (5, 8), 4, seed=2)
        d = cutoff_distribution(grid, 4)
        assert d.total_count == 5 * (8 - 4 + 1)
        assert d.seed == 2

    def test_k_equals_width(self):
        d = cutoff_distribution(eca_run(204, 5, 2, initial_row="01101"), 5)
        assert d.counts == {"01101": 1}

    def test_k_wider_than_row(self):
        with pytest.raises(ParameterError):
            cutoff_distribution(eca_run(30, 7, 1), 8)


class TestExportPbm:
    def test_writes_p4_files(self, tmp_path):
        grid = ca2d_run(746, (3, 10), 2, seed=4)
        paths = export_pbm(grid, tmp_path / "frames", prefix="r746")
        assert [p.name for p in paths] == ["r746_00000.pbm", "r746_00001.pbm", "r746_00002.pbm"]
        data = paths[0].read_bytes()
        assert data.startswith(b"P4\n10 3\n")
        # 10 columns pack into 2 bytes per row
        assert len(data) == len(b"P4\n10 3\n") + 3 * 2


class TestRenderRows:
    def test_one_line_per_row(self):
        text = render_rows(eca_run(30, 7, 2))
        lines = text.split("\n")
        assert len(lines) == 3
        assert lines[0] == "   █   "
