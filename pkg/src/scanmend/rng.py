"""Deterministic pseudo-random number generator used for training and synthesis.

The generator is xorshift64*, chosen so that every consumer of randomness in
this package is reproducible from a single integer seed without depending on
the host library's RNG internals. The full recurrence, on 64-bit unsigned
state ``s``:

    s ^= s >> 12
    s ^= (s << 25) & 0xFFFFFFFFFFFFFFFF
    s ^= s >> 27
    output = (s * 0x2545F4914F6CDD1D) & 0xFFFFFFFFFFFFFFFF

Seeding: the state is ``(seed XOR 0x9E3779B97F4A7C15) & mask``; a zero state
(forbidden by xorshift) is replaced by the golden-ratio constant itself.
"""

import math

_MASK = 0xFFFFFFFFFFFFFFFF
_MIX = 0x9E3779B97F4A7C15
_MULT = 0x2545F4914F6CDD1D


class XorShift64:
    """xorshift64* stream. Not cryptographic; stable across platforms."""

    def __init__(self, seed: int):
        self._state = (int(seed) ^ _MIX) & _MASK
        if self._state == 0:
            self._state = _MIX
        self._gauss_cache: float | None = None

    def next_u64(self) -> int:
        s = self._state
        s ^= s >> 12
        s = (s ^ (s << 25)) & _MASK
        s ^= s >> 27
        self._state = s
        return (s * _MULT) & _MASK

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) / float(1 << 53)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def randint(self, n: int) -> int:
        """Uniform-ish integer in [0, n). Uses modulo reduction; the bias is
        negligible for the small ranges used here (n << 2^64)."""
        if n <= 0:
            raise ValueError(f"randint needs n >= 1, got {n}")
        return self.next_u64() % n

    def normal(self, mu: float = 0.0, sigma: float = 1.0) -> float:
        """Gaussian deviate via Box-Muller (pairs cached)."""
        if self._gauss_cache is not None:
            z = self._gauss_cache
            self._gauss_cache = None
            return mu + sigma * z
        # u1 in (0, 1] so the log is finite
        u1 = 1.0 - self.random()
        u2 = self.random()
        r = math.sqrt(-2.0 * math.log(u1))
        self._gauss_cache = r * math.sin(2.0 * math.pi * u2)
        return mu + sigma * r * math.cos(2.0 * math.pi * u2)

    def getstate(self) -> tuple[int, float | None]:
        return (self._state, self._gauss_cache)

    def setstate(self, state: tuple[int, float | None]) -> None:
        self._state, self._gauss_cache = state
