"""Seedable, splittable random streams.

Every stochastic operation in the library draws from a :class:`RandomStream`
passed in by the caller. There is no module-level generator; the CLI is the
only place a stream is seeded from entropy.

The stream is a subclass of :class:`random.Random` (Mersenne Twister,
19937-bit state), so the whole stdlib sampling API is available on it as
well. Splitting seeds a fresh child from 128 bits of parent output, which
leaves the child's sequence fixed the moment it is created.
"""

from __future__ import annotations

import math
import os
import random
from bisect import bisect_right
from itertools import accumulate
from typing import Iterator, Sequence

_MASK64 = (1 << 64) - 1


class RandomStream(random.Random):
    """A deterministic random stream that supports ``split()``.

    Single-threaded: give each worker its own stream via :meth:`split`.
    """

    def __init__(self, seed: int | None = None) -> None:
        if seed is None:
            seed = int.from_bytes(os.urandom(8), "little")
        super().__init__(_seed_key(seed))

    def split(self) -> RandomStream:
        """Return an independent child stream and advance this one."""
        child = RandomStream.__new__(RandomStream)
        random.Random.__init__(child, self.getrandbits(128))
        return child

    def next_int(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``. ``bound == 1`` consumes no randomness."""
        if bound <= 1:
            if bound == 1:
                return 0
            raise ValueError(f"bound must be positive, got {bound}")
        return self._randbelow(bound)

    def next_double(self) -> float:
        return self.random()

    def next_gaussian(self, sigma: float = 1.0) -> float:
        if sigma <= 0:
            raise ValueError(f"sigma must be positive, got {sigma}")
        return self.gauss(0.0, sigma)

    def next_cauchy(self, scale: float = 1.0) -> float:
        if scale <= 0:
            raise ValueError(f"scale must be positive, got {scale}")
        return scale * math.tan(math.pi * (self.random() - 0.5))

    def sample_distinct(self, n: int, k: int) -> list[int]:
        """``k`` distinct integers from ``[0, n)`` in random order."""
        if not 0 <= k <= n:
            raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
        return self.sample(range(n), k)

    def weighted_index(self, weights: Sequence[float]) -> int:
        """Index ``i`` with probability ``weights[i] / sum(weights)``."""
        cumulative = cumulative_weights(weights)
        return roulette_spin(self, cumulative)

    def bernoulli_indices(self, n: int, p: float) -> Iterator[int]:
        """Increasing indices in ``[0, n)``, each included independently with probability ``p``.

        Uses geometric skips, so the cost is proportional to the number of
        indices produced rather than to ``n``.
        """
        if p >= 1.0:
            yield from range(n)
            return
        if p <= 0.0:
            return
        log_q = math.log1p(-p)
        i = -1
        while True:
            i += 1 + int(math.log(1.0 - self.random()) / log_q)
            if i >= n:
                return
            yield i

    def bit_mask(self, n: int, p: float = 0.5) -> int:
        """An ``n``-bit integer whose bits are set independently with probability ``p``."""
        if p == 0.5:
            return self.getrandbits(n) if n > 0 else 0
        if p >= 1.0:
            return (1 << n) - 1
        mask = 0
        for i in self.bernoulli_indices(n, p):
            mask |= 1 << i
        return mask


def _seed_key(seed: int) -> int:
    if not -(1 << 63) <= seed <= _MASK64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    # random.Random uses abs(seed); masking keeps negative seeds distinct.
    return seed & _MASK64


def from_seed(seed: int) -> RandomStream:
    """A stream determined entirely by a 64-bit ``seed``."""
    return RandomStream(seed)


def split(stream: RandomStream) -> RandomStream:
    return stream.split()


def cumulative_weights(weights: Sequence[float]) -> list[float]:
    """Running totals of ``weights`` after validating them for roulette sampling."""
    if not weights:
        raise ValueError("weights must be non-empty")
    for w in weights:
        if w < 0 or not math.isfinite(w):
            raise ValueError(f"weights must be finite and non-negative, got {w}")
    cumulative = list(accumulate(float(w) for w in weights))
    if cumulative[-1] <= 0:
        raise ValueError("at least one weight must be positive")
    return cumulative


def roulette_spin(rng: random.Random, cumulative: list[float]) -> int:
    i = bisect_right(cumulative, rng.random() * cumulative[-1])
    # Guards float round-off at the right edge and zero-weight tails.
    last = len(cumulative) - 1
    if i > last:
        i = last
    while i > 0 and cumulative[i] == cumulative[i - 1]:
        i -= 1
    return i
