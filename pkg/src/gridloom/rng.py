"""Deterministic random number generation.

Everything random in this package flows through the splitmix64 stream below
so that a run is reproducible from a single 64-bit seed, bit for bit, in
both the compiled and the pure-Python solver kernels.  The compiled kernel
re-implements the identical arithmetic in C (unsigned 64-bit wrapping).

Seed derivation for restarts and portfolio samples uses ``mix(seed, i)``:
the splitmix64 finalizer applied to ``seed + (i + 1) * GOLDEN`` mod 2**64.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def _finalize(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


def mix(seed: int, i: int) -> int:
    """Derive the i-th child seed of ``seed`` (restart attempts, portfolio
    samples).  Documented contract: splitmix64 finalizer of
    ``seed + (i+1)*GOLDEN`` mod 2**64."""
    return _finalize((seed + (i + 1) * GOLDEN) & MASK64)


class SplitMix64:
    """splitmix64 generator: state advances by GOLDEN, output is finalized."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return _finalize(self.state)

    def next_float(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next64() >> 11) * _INV_2_53

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound).  Plain modulo; the bias for desk
        scale bounds (< 2**32) is far below anything observable."""
        return self.next64() % bound
