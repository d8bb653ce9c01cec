"""Seeded random numbers with a published, platform-independent transition.

The generator is SplitMix64: state advances by a fixed odd increment
(GAMMA) and each output is a bit-mixing finalizer of the state.  Because
the k-th output is a pure function of ``seed + (k+1)*GAMMA``, the stream
doubles as a counter-based generator, which lets vectorised and scalar
consumers (and independent shards) produce bit-identical values.

Every stochastic component of the package draws from this generator, so
results are reproducible across platforms and across the numba/numpy
backends.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer; maps a 64-bit state to a 64-bit output."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """Seed for sub-stream ``index`` (restart, shard, ...) of ``master``.

    Equals the (index+1)-th raw output of the master stream, so distinct
    indices give well-separated sub-streams.
    """
    return mix64((master + (index + 1) * GAMMA) & MASK64)


class SplitMix64:
    """Stateful scalar stream."""

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def next_float(self) -> float:
        # 53 top bits -> uniform in [0, 1)
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Integer in [0, n) by modulo reduction (bias < 2**-50 for n <= 2**12)."""
        return self.next_u64() % n

    def shuffle(self, seq) -> None:
        """In-place Fisher-Yates, descending index, swap with ``below(i+1)``."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs ``start .. start+count-1`` of stream ``seed`` as floats in [0, 1).

    Counter form of the same stream: element k equals
    ``SplitMix64(seed)`` advanced ``start + k + 1`` times.
    """
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed) + idx * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53
