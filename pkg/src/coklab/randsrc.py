"""Deterministic 64-bit PRNG with derivable substreams.

The generator is fully specified so independent implementations agree
bit-for-bit:

* State setup: ``x = (seed + stream * 0x9E3779B97F4A7C15) mod 2^64`` feeds
  SplitMix64; four successive SplitMix64 outputs become the xoshiro256**
  state words ``s0..s3``.
* Output: xoshiro256** (Blackman/Vigna), one 64-bit word per call.

Substreams are indexed by ``stream``; experiment runners assign one stream
per trial so results are independent of execution order.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> tuple[int, int]:
    """Advance a SplitMix64 state, returning (new_state, output)."""
    x = (x + GOLDEN) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    z = z ^ (z >> 31)
    return x, z


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Rng:
    """xoshiro256** stream seeded via SplitMix64 from (seed, stream)."""

    __slots__ = ("seed", "stream", "_s")

    def __init__(self, seed: int, stream: int = 0):
        self.seed = seed & MASK64
        self.stream = stream & MASK64
        x = (self.seed + self.stream * GOLDEN) & MASK64
        s = []
        for _ in range(4):
            x, z = _splitmix64(x)
            s.append(z)
        if not any(s):  # all-zero state is a fixed point of xoshiro
            s[0] = 1
        self._s = s

    def substream(self, index: int) -> "Rng":
        """A fresh generator for substream `index` of the same seed."""
        return Rng(self.seed, index)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result
