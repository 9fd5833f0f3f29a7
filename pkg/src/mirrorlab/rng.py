"""Deterministic randomness shared by every randomized component.

All game-visible randomness flows through :class:`SplitMix64` so that the
compiled core and the pure-Python strategies consume identical bit streams
and reproduce each other move for move.  The compiled core re-implements
these exact routines in C; ``tests/test_core_equivalence.py`` pins the two
together.

Stream layout: a game seeded with ``s`` derives three independent streams,
``derive_seed(s, 0)`` for the matching oracle, ``derive_seed(s, 1)`` for
Alice's tape and ``derive_seed(s, 2)`` for Bob's.  Batch experiments derive
per-trial game seeds as ``derive_seed(master_seed, trial_index)``.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1

# Stream tags used when deriving per-game sub-seeds.
ORACLE_STREAM = 0
ALICE_STREAM = 1
BOB_STREAM = 2


def mix64(z: int) -> int:
    """murmur3 finalizer; bijective on 64-bit words."""
    z &= _MASK64
    z = ((z ^ (z >> 33)) * 0xFF51AFD7ED558CCD) & _MASK64
    z = ((z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53) & _MASK64
    return z ^ (z >> 33)


def derive_seed(master: int, index: int) -> int:
    """Independent child seed for stream ``index`` of ``master``."""
    return mix64((master & _MASK64) ^ mix64((index & _MASK64) ^ 0x9E3779B97F4A7C15))


class SplitMix64:
    """Tiny 64-bit generator (splitmix64), unbiased bounded draws included."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, k: int) -> int:
        """Uniform integer in [0, k) via masked rejection; k >= 1."""
        if k <= 1:
            if k < 1:
                raise ValueError("randbelow needs k >= 1")
            return 0
        mask = (1 << (k - 1).bit_length()) - 1
        while True:
            v = self.next64() & mask
            if v < k:
                return v


def sample_distinct(rng: SplitMix64, n: int, r: int) -> list[int]:
    """r distinct values from 1..n by rejection, in draw order."""
    if r > n:
        raise ValueError("cannot draw more distinct values than the range holds")
    out: list[int] = []
    while len(out) < r:
        v = 1 + rng.randbelow(n)
        if v not in out:
            out.append(v)
    return out
