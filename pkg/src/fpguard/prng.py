"""Deterministic 64-bit mixer used for noise deltas and profile draws.

The exact update sequence is part of the wire contract between this
package and the in-page payload: both sides must produce identical
streams for identical seeds. See docs/noise-prng.md for the bit-exact
definition; do not change the constants without versioning the protocol.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(value: int) -> int:
    """One finalization round of the splitmix mixer (stateless)."""
    z = value & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Splitmix-style generator: state += gamma, output = mix64(state)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return mix64(self._state)

    def next_below(self, bound: int) -> int:
        """Uniform-ish draw in [0, bound). Bound must be positive."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def next_unit(self) -> float:
        """Float in [0, 1) from the top 53 bits, exact in IEEE doubles."""
        return (self.next_u64() >> 11) / float(1 << 53)


def derive_noise_seeds(master_seed: int) -> tuple[int, int, int]:
    """Canvas, WebGL and audio noise seeds: the first three stream outputs."""
    stream = SplitMix64(master_seed)
    return stream.next_u64(), stream.next_u64(), stream.next_u64()
