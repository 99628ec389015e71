"""Real-world data as binary k-tuple distributions, plus π digits and compressibility."""

import hashlib
import itertools
import logging
import zlib
from pathlib import Path

import numpy as np

from algoprob.distribution import distribution_from_rows
from algoprob.models import (
    Binarization,
    BitStream,
    CompressionReport,
    ParameterError,
    PatternDistribution,
    SourceDescriptor,
    SourceKind,
)
from algoprob.rng import random_digits

logger = logging.getLogger(__name__)

MIN_COMPRESSION_INPUT = 64
MAX_PI_DIGITS = 100_000
SLOW_PI_DIGITS = 5_000


def binarize(data: bytes, method: Binarization = Binarization.RAW_BITS) -> BitStream:
    """Turn bytes into a bit stream.

    RAW_BITS expands every byte to 8 bits, most significant first.
    THRESHOLD_MEDIAN treats bytes as values and emits 1 where a value exceeds
    the median of the sequence.
    """
    if not data:
        raise ParameterError("cannot binarize empty input")
    values = np.frombuffer(data, dtype=np.uint8)
    match method:
        case Binarization.RAW_BITS:
            bits = np.unpackbits(values)
        case Binarization.THRESHOLD_MEDIAN:
            bits = (values > np.median(values)).astype(np.uint8)
    text = (bits + ord("0")).astype(np.uint8).tobytes().decode("ascii")
    return BitStream(bits=text, origin={"binarize": method.value, "bytes": len(data)})


def read_bitstream(path: Path, method: Binarization = Binarization.RAW_BITS) -> BitStream:
    """Read a local file and binarize it, stamping the file identity into the origin."""
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ParameterError(f"Cannot read '{path}': {e}") from e
    stream = binarize(data, method)
    stream.origin.update(file=path.name, sha256=hashlib.sha256(data).hexdigest())
    logger.debug("Read %d bytes from %s -> %d bits", len(data), path, len(stream))
    return stream


def tuple_counts(b: BitStream, k: int, overlap: bool = True) -> PatternDistribution:
    """Distribution of the k-tuples of a bit stream (sliding or disjoint windows)."""
    source = SourceDescriptor(
        kind=SourceKind.EMPIRICAL, params={**b.origin, "k": k, "overlap": overlap}
    )
    return distribution_from_rows([b.bits], k, overlap, source)


def compression_ratio(data: bytes) -> float:
    """DEFLATE size at maximum effort over the original size."""
    if len(data) < MIN_COMPRESSION_INPUT:
        raise ParameterError(
            f"need at least {MIN_COMPRESSION_INPUT} bytes for a meaningful ratio, got {len(data)}"
        )
    return len(zlib.compress(data, 9)) / len(data)


def _spigot_digits():
    # Gibbons' unbounded spigot over linear fractional transformations
    q, r, s, t = 1, 0, 0, 1
    k = 1
    while True:
        y = (3 * q + r) // (3 * s + t)
        while y != (4 * q + r) // (4 * s + t):
            q, r, s, t = q * k, q * (4 * k + 2) + r * (2 * k + 1), s * k, s * (4 * k + 2) + t * (2 * k + 1)
            k += 1
            y = (3 * q + r) // (3 * s + t)
        yield y
        q, r = 10 * q, 10 * (r - y * t)


def pi_digits(count: int) -> str:
    """The first `count` decimal digits of π, starting "314...".

    The spigot's integers grow with every digit and the running time grows
    roughly with the square of `count`. Counts above SLOW_PI_DIGITS log a
    warning; 10000 digits already take several seconds.
    """
    if not 1 <= count <= MAX_PI_DIGITS:
        raise ParameterError(f"count must be in 1..{MAX_PI_DIGITS}, got {count}")
    if count > SLOW_PI_DIGITS:
        logger.warning("%d digits of π by spigot; expect a long-running computation", count)
    return "".join(str(d) for d in itertools.islice(_spigot_digits(), count))


def compression_report(count: int = 2400, seed: int = 42) -> CompressionReport:
    """Compression ratios of π digits and of as many seeded random digits."""
    pi_ratio = compression_ratio(pi_digits(count).encode("ascii"))
    random_ratio = compression_ratio(random_digits(count, seed).encode("ascii"))
    logger.info("Compression over %d digits: pi=%.4f random=%.4f", count, pi_ratio, random_ratio)
    return CompressionReport(digits=count, pi_ratio=pi_ratio, random_ratio=random_ratio, seed=seed)
