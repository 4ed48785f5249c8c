"""Bit-vector benchmarks: Ackley's suite and royal roads.

Ackley-style problems are stated as a value to maximise whose best value is
``10 n`` at the all-ones vector; their cost is ``10 n - value``.
"""

from __future__ import annotations

from ..core import Problem
from ..representations import BitVector, random_bitvector


def _group_sizes(n: int, parts: int) -> list[int]:
    q, r = divmod(n, parts)
    return [q + 1 if g < r else q for g in range(parts)]


def onemax_value(u: int, n: int) -> int:
    return u


def twomax_value(u: int, n: int) -> int:
    return abs(18 * u - 8 * n)


def trap_value(u: int, n: int) -> float:
    z = (3 * n) // 4
    if u <= z:
        return 8 * n / z * (z - u)
    return 10 * n / (n - z) * (u - z)


def porcupine_value(u: int, n: int) -> int:
    """Ten per one-bit, minus 15 whenever the number of zero bits is odd."""
    return 10 * u - (15 if (n - u) % 2 else 0)


def plateaus_value(bits: int, n: int) -> float:
    """Four groups of (nearly) equal size; each all-ones group scores ``2.5 n``.

    With fewer than four bits every bit is its own group worth ``10``.
    """
    parts = min(4, n)
    reward = 10 * n / parts
    total = 0.0
    shift = 0
    for size in _group_sizes(n, parts):
        group = (1 << size) - 1
        if (bits >> shift) & group == group:
            total += reward
        shift += size
    return total


def mix_value(bits: int, n: int) -> float:
    """Five consecutive groups scored by 10*onemax, twomax, trap, porcupine and plateaus."""
    total = 0.0
    shift = 0
    for size, part in zip(_group_sizes(n, 5), _MIX_PARTS):
        segment = (bits >> shift) & ((1 << size) - 1)
        total += part(segment, size)
        shift += size
    return total


_MIX_PARTS = (
    lambda s, m: 10 * s.bit_count(),
    lambda s, m: twomax_value(s.bit_count(), m),
    lambda s, m: trap_value(s.bit_count(), m),
    lambda s, m: porcupine_value(s.bit_count(), m),
    plateaus_value,
)


class BitVectorProblem(Problem[BitVector]):
    genome = "bits"
    min_n = 1

    def __init__(self, n: int) -> None:
        if n < self.min_n:
            raise ValueError(f"{type(self).__name__} needs n >= {self.min_n}, got {n}")
        self.n = n

    def random_solution(self, rng):
        return random_bitvector(rng, self.n)


class OneMax(BitVectorProblem):
    """Cost is the number of zero bits."""

    min_cost = 0

    def cost(self, candidate):
        return self.n - candidate._bits.bit_count()

    def value(self, candidate):
        return candidate._bits.bit_count()


class _AckleyProblem(BitVectorProblem):
    min_cost = 0

    def cost(self, candidate):
        return 10 * self.n - self.value(candidate)


class TwoMax(_AckleyProblem):
    """Global optimum at all ones (``10 n``), deceptive local optimum at all zeros (``8 n``)."""

    def value(self, candidate):
        return twomax_value(candidate._bits.bit_count(), self.n)


class Trap(_AckleyProblem):
    min_n = 2

    def value(self, candidate):
        return trap_value(candidate._bits.bit_count(), self.n)


class Porcupine(_AckleyProblem):
    def value(self, candidate):
        return porcupine_value(candidate._bits.bit_count(), self.n)


class Plateaus(_AckleyProblem):
    def value(self, candidate):
        return plateaus_value(candidate._bits, self.n)


class Mix(_AckleyProblem):
    min_n = 10

    def value(self, candidate):
        return mix_value(candidate._bits, self.n)


def onemax_cost(v: BitVector) -> int:
    return OneMax(len(v)).cost(v)


class RoyalRoad(BitVectorProblem):
    """Reward each fully set, aligned block with its width.

    With ``stepping_stones`` the block width doubles level by level (while it
    still divides ``n``), and every completed block at every level pays out.
    """

    def __init__(self, n: int, block_size: int = 8, stepping_stones: bool = False) -> None:
        super().__init__(n)
        if block_size < 1 or n % block_size:
            raise ValueError(f"block size {block_size} must divide n={n}")
        self.block_size = block_size
        self.stepping_stones = stepping_stones
        widths = [block_size]
        while stepping_stones and widths[-1] * 2 <= n and n % (widths[-1] * 2) == 0:
            widths.append(widths[-1] * 2)
        self.widths = tuple(widths)
        self.max_value = n * len(widths)

    min_cost = 0

    def value(self, candidate):
        bits = candidate._bits
        total = 0
        for w in self.widths:
            block = (1 << w) - 1
            for shift in range(0, self.n, w):
                if (bits >> shift) & block == block:
                    total += w
        return total

    def cost(self, candidate):
        return self.max_value - self.value(candidate)
