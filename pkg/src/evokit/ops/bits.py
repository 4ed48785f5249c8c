"""Mutation and crossover for bit vectors.

The k-point and uniform crossovers here also accept integer and real
vectors; they only ever exchange positions between the two genomes.
"""

from __future__ import annotations

from typing import Sequence

from ..core import CrossoverOperator, MutationOperator
from ..representations import BitVector


class BitFlipMutation(MutationOperator[BitVector]):
    """Flip each bit independently with probability ``m``."""

    def __init__(self, m: float) -> None:
        if not 0.0 < m <= 1.0:
            raise ValueError(f"mutation rate must lie in (0, 1], got {m}")
        self.m = m

    def mutate(self, rng, c):
        c._bits ^= rng.bit_mask(c._n, self.m)


def _check_lengths(c1, c2) -> int:
    n = len(c1)
    if len(c2) != n:
        raise ValueError(f"length mismatch: {n} vs {len(c2)}")
    return n


def exchange_mask(c1, c2, mask: int) -> None:
    """Swap the positions whose bit is set in ``mask`` between two genomes."""
    if isinstance(c1, BitVector):
        d = (c1._bits ^ c2._bits) & mask
        c1._bits ^= d
        c2._bits ^= d
        return
    a, b = c1._v, c2._v
    i = 0
    while mask:
        if mask & 1:
            a[i], b[i] = b[i], a[i]
        mask >>= 1
        i += 1


def cut_mask(n: int, cuts: Sequence[int]) -> int:
    """Mask of the segments that alternate into the exchange.

    ``cuts`` are positions in ``[1, n-1]``; a cut at ``c`` falls just before
    index ``c``. The segment before the first cut is kept.
    """
    mask = 0
    inside = False
    prev = 0
    for c in sorted(cuts):
        if inside:
            mask |= ((1 << c) - 1) ^ ((1 << prev) - 1)
        inside = not inside
        prev = c
    if inside:
        mask |= ((1 << n) - 1) ^ ((1 << prev) - 1)
    return mask


def k_point_core(c1, c2, cuts: Sequence[int]) -> None:
    n = _check_lengths(c1, c2)
    if len(set(cuts)) != len(cuts) or any(not 1 <= c <= n - 1 for c in cuts):
        raise ValueError(f"cuts must be distinct values in [1, {n - 1}], got {list(cuts)}")
    exchange_mask(c1, c2, cut_mask(n, cuts))


class KPointCrossover(CrossoverOperator):
    """Exchange alternate segments between ``k`` random cut points."""

    def __init__(self, k: int = 1) -> None:
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        self.k = k

    def cross(self, rng, c1, c2):
        n = _check_lengths(c1, c2)
        if self.k >= n:
            raise ValueError(f"{self.k}-point crossover needs length > {self.k}, got {n}")
        cuts = [1 + c for c in rng.sample_distinct(n - 1, self.k)]
        exchange_mask(c1, c2, cut_mask(n, cuts))


def single_point_crossover() -> KPointCrossover:
    return KPointCrossover(1)


def two_point_crossover() -> KPointCrossover:
    return KPointCrossover(2)


class UniformCrossover(CrossoverOperator):
    """Exchange each position independently with probability ``p``."""

    def __init__(self, p: float = 0.5) -> None:
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {p}")
        self.p = p

    def cross(self, rng, c1, c2):
        n = _check_lengths(c1, c2)
        exchange_mask(c1, c2, rng.bit_mask(n, self.p))
