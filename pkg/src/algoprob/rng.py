"""Seeded 64-bit pseudorandom streams.

All randomness in algoprob comes from :class:`Xorshift64Star` instances created
explicitly from a seed; there is no global generator state. Child streams for
samples, shards and shuffles are derived with :func:`substream`, so a given
(seed, index) pair always yields the same numbers on every platform and for
every worker count.
"""

MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MULTIPLIER = 0x2545F4914F6CDD1D


def splitmix64(value: int) -> int:
    """One SplitMix64 output for the given 64-bit input."""
    z = (value + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class Xorshift64Star:
    """xorshift64* generator (shifts 12/25/27) seeded through SplitMix64."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self._state = splitmix64(seed) or _GOLDEN

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self._state = x
        return (x * _MULTIPLIER) & MASK64

    def bounded(self, n: int) -> int:
        """Uniform integer in [0, n) by multiply-high reduction."""
        if n <= 0:
            raise ValueError("bound must be positive")
        return (self.next_u64() * n) >> 64


def substream(seed: int, *parts: int) -> Xorshift64Star:
    """Child generator deterministically derived from a base seed and integer parts."""
    h = splitmix64(seed & MASK64)
    for part in parts:
        h = splitmix64(h ^ (part & MASK64))
    return Xorshift64Star(h)


def random_bits(count: int, seed: int, *parts: int) -> str:
    """`count` pseudorandom bits, most significant bit of each word first."""
    if count < 0:
        raise ValueError("count must be non-negative")
    gen = substream(seed, *parts) if parts else Xorshift64Star(seed)
    words = -(-count // 64)
    return "".join(format(gen.next_u64(), "064b") for _ in range(words))[:count]


def random_bytes(count: int, seed: int, *parts: int) -> bytes:
    """`count` pseudorandom bytes, little-endian within each word."""
    if count < 0:
        raise ValueError("count must be non-negative")
    gen = substream(seed, *parts) if parts else Xorshift64Star(seed)
    words = -(-count // 8)
    return b"".join(gen.next_u64().to_bytes(8, "little") for _ in range(words))[:count]


def random_digits(count: int, seed: int) -> str:
    """`count` pseudorandom decimal digits."""
    gen = Xorshift64Star(seed)
    return "".join(str(gen.bounded(10)) for _ in range(count))
