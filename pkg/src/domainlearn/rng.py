"""Seedable, portable pseudo-random number generation.

Every stochastic component (world synthesis, revelation schedules, Monte
Carlo trials) draws from a splitmix64 stream so that runs reproduce
bit-for-bit across platforms and Python versions.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB


def mix64(value: int) -> int:
    """The splitmix64 output mixer: a 64-bit bijection with good avalanche."""
    z = value & _MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK64
    return z ^ (z >> 31)


def derive_seed(*parts: int) -> int:
    """Fold integers into a fresh 64-bit seed, order-sensitively."""
    acc = 0x8BADF00D5EEDBA5E
    for part in parts:
        acc = mix64((acc + _GOLDEN) & _MASK64) ^ (part & _MASK64)
        acc = mix64(acc)
    return acc


class SplitMix64:
    """splitmix64 generator: 64-bit state, one add + mix per draw."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n). Rejection-sampled, so exactly uniform."""
        if n <= 0:
            raise ValueError(f"randrange bound must be positive, got {n}")
        threshold = ((1 << 64) // n) * n
        while True:
            x = self.next_u64()
            if x < threshold:
                return x % n
