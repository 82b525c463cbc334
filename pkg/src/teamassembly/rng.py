"""Deterministic random streams keyed by (seed, replicate index)."""

from __future__ import annotations

import random
from typing import Sequence, TypeVar

import numpy as np

T = TypeVar("T")


def derive_seed(seed: int, *key: int) -> int:
    """Derive an independent 128-bit seed from a root seed and an index path.

    Uses numpy's SeedSequence spawn keys, so (seed, key) pairs map to
    well-separated states and the mapping is platform independent.
    """
    words = np.random.SeedSequence(seed, spawn_key=tuple(key)).generate_state(4, dtype=np.uint32)
    return int.from_bytes(words.astype("<u4").tobytes(), "little")


class RngStream:
    """Single-owner random stream.

    Backed by ``random.Random`` (Mersenne Twister), whose ``random()`` and
    ``getrandbits``-based integer draws are bitwise stable across platforms.
    """

    __slots__ = ("key", "_rng", "random")

    def __init__(self, seed: int, *key: int):
        self.key = (seed, *key)
        self._rng = random.Random(derive_seed(seed, *key))
        self.random = self._rng.random

    def bernoulli(self, p: float) -> bool:
        return self._rng.random() < p

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer on the closed interval [lo, hi]."""
        return self._rng.randint(lo, hi)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self._rng.random()

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self._rng.randrange(len(seq))]

    def randbelow(self, n: int) -> int:
        return self._rng.randrange(n)
