"""Tests for data ingestion, π digits and compressibility."""

import hashlib
import logging

import pytest

from algoprob.ingest import (
    binarize,
    compression_ratio,
    compression_report,
    pi_digits,
    read_bitstream,
    tuple_counts,
)
from algoprob.models import Binarization, BitStream, ParameterError, SourceKind
from algoprob.rng import random_bits, random_bytes


def _arctan_inverse(x: int, unity: int) -> int:
    total = term = unity // x
    x2 = x * x
    n = 1
    sign = -1
    while term:
        term //= x2
        total += sign * (term // (2 * n + 1))
        sign = -sign
        n += 1
    return total


def machin_digits(count: int, guard: int = 10) -> str:
    """π = 16 arctan(1/5) - 4 arctan(1/239), in scaled integers."""
    unity = 10 ** (count + guard)
    pi = 16 * _arctan_inverse(5, unity) - 4 * _arctan_inverse(239, unity)
    return str(pi // 10**guard)[:count]


class TestBinarize:
    def test_raw_bits_msb_first(self):
        assert binarize(b"\x0f\xf0").bits == "0000111111110000"

    def test_median_threshold(self):
        assert binarize(bytes([1, 2, 3, 4]), Binarization.THRESHOLD_MEDIAN).bits == "0011"

    def test_median_ties_are_zero(self):
        assert binarize(bytes([5, 5, 5]), Binarization.THRESHOLD_MEDIAN).bits == "000"

    def test_origin(self):
        stream = binarize(b"abc")
        assert stream.origin == {"binarize": "rawbits", "bytes": 3}

    def test_empty_input(self):
        with pytest.raises(ParameterError):
            binarize(b"")


class TestReadBitstream:
    def test_reads_file(self, tmp_path):
        path = tmp_path / "data.bin"
        path.write_bytes(b"\xaa")
        stream = read_bitstream(path)
        assert stream.bits == "10101010"
        assert stream.origin["file"] == "data.bin"
        assert stream.origin["sha256"] == hashlib.sha256(b"\xaa").hexdigest()

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParameterError, match="Cannot read"):
            read_bitstream(tmp_path / "missing.bin")


class TestTupleCounts:
    def test_overlapping(self):
        d = tuple_counts(BitStream(bits="0101"), 2)
        assert d.frequency("01") == pytest.approx(2 / 3)
        assert d.frequency("10") == pytest.approx(1 / 3)

    def test_single_symbol(self):
        assert tuple_counts(BitStream(bits="1111"), 1).frequency("1") == 1.0

    def test_single_window(self):
        assert tuple_counts(BitStream(bits="0110"), 4).counts == {"0110": 1}

    def test_source_records_origin(self):
        d = tuple_counts(binarize(b"\x01"), 3, overlap=False)
        assert d.source.kind is SourceKind.EMPIRICAL
        assert d.source.params["binarize"] == "rawbits"
        assert d.source.params["overlap"] is False
        assert d.total_count == 2


class TestUniformBaseline:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_random_blocks_are_near_uniform(self, k):
        stream = BitStream(bits=random_bits(2 ** (k + 12), 42, k))
        d = tuple_counts(stream, k, overlap=False)
        windows = d.total_count
        expected = 2.0**-k
        sd = (expected * (1 - expected) / windows) ** 0.5
        assert d.support_size == 2**k
        for string in d.counts:
            assert abs(d.frequency(string) - expected) < 5 * sd

    def test_four_tuples_over_a_million_bits(self):
        stream = BitStream(bits=random_bits(2**20, 42))
        d = tuple_counts(stream, 4, overlap=False)
        windows = d.total_count
        expected = 2.0**-4
        sd = (expected * (1 - expected) / windows) ** 0.5
        assert windows == 2**18
        assert d.support_size == 16
        for string in d.counts:
            assert abs(d.frequency(string) - expected) < 5 * sd


class TestPiDigits:
    def test_first_digits(self):
        assert pi_digits(10) == "3141592653"

    def test_matches_arctan_oracle(self):
        assert pi_digits(2400) == machin_digits(2400)

    def test_prefix_consistency(self):
        long = pi_digits(600)
        assert len(long) == 600
        assert long.startswith(pi_digits(250))

    @pytest.mark.parametrize("count", [0, 100_001])
    def test_count_bounds(self, count):
        with pytest.raises(ParameterError):
            pi_digits(count)

    def test_large_count_warns(self, caplog, monkeypatch):
        monkeypatch.setattr("algoprob.ingest.SLOW_PI_DIGITS", 10)
        with caplog.at_level(logging.WARNING, logger="algoprob.ingest"):
            assert pi_digits(20) == "31415926535897932384"
        assert "long-running" in caplog.text

    def test_small_count_is_quiet(self, caplog):
        with caplog.at_level(logging.WARNING, logger="algoprob.ingest"):
            pi_digits(100)
        assert caplog.text == ""


class TestCompression:
    def test_repetitive_input_compresses(self):
        assert compression_ratio(bytes(10_000)) < 0.05

    def test_random_input_does_not_compress(self):
        assert compression_ratio(random_bytes(10_000, 42)) > 0.95

    def test_deterministic(self):
        data = pi_digits(500).encode("ascii")
        assert compression_ratio(data) == compression_ratio(data)

    def test_short_input_rejected(self):
        with pytest.raises(ParameterError):
            compression_ratio(b"0" * 63)

    def test_report(self):
        report = compression_report(2400, seed=42)
        assert report.digits == 2400
        assert report.seed == 42
        assert 0.0 < report.pi_ratio < 1.0
        assert 0.0 < report.random_ratio < 1.0
        assert compression_report(2400, seed=42) == report
