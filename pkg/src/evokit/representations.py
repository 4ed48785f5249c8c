"""Built-in genome types: bit vectors, integer and real vectors, permutations.

Operators in :mod:`evokit.ops` reach into the private storage (``_bits``,
``_v``, ``_a``) directly; outside the package use the public accessors.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .rng import RandomStream


class BitVector:
    """Fixed-length vector of bits packed into a Python int.

    Bit ``i`` of the int holds element ``i``; bits at positions ``>= n`` are
    always zero, so ``count_ones`` is a single popcount.
    """

    __slots__ = ("_n", "_bits")

    def __init__(self, n: int, bits: int = 0) -> None:
        if n < 1:
            raise ValueError(f"length must be positive, got {n}")
        self._n = n
        self._bits = bits & ((1 << n) - 1)

    @classmethod
    def from_string(cls, s: str) -> BitVector:
        """Parse a 0/1 string with index 0 leftmost."""
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        return cls(len(s), int(s[::-1], 2))

    def __len__(self) -> int:
        return self._n

    def __getitem__(self, i: int) -> int:
        return (self._bits >> self._index(i)) & 1

    def __setitem__(self, i: int, b: int) -> None:
        i = self._index(i)
        if b:
            self._bits |= 1 << i
        else:
            self._bits &= ~(1 << i)

    def _index(self, i: int) -> int:
        if i < 0:
            i += self._n
        if not 0 <= i < self._n:
            raise IndexError(i)
        return i

    def flip(self, i: int) -> None:
        self._bits ^= 1 << self._index(i)

    def count_ones(self) -> int:
        return self._bits.bit_count()

    def count_zeros(self) -> int:
        return self._n - self._bits.bit_count()

    def to_int(self) -> int:
        return self._bits

    def copy(self) -> BitVector:
        return BitVector(self._n, self._bits)

    def __eq__(self, other) -> bool:
        return isinstance(other, BitVector) and self._n == other._n and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self._n, self._bits))

    def __str__(self) -> str:
        return format(self._bits, f"0{self._n}b")[::-1]

    def __repr__(self) -> str:
        return f"BitVector('{self}')"


class _NumberVector:
    __slots__ = ("_v", "lo", "hi")

    def __init__(self, values: Iterable, lo=None, hi=None) -> None:
        self._v = list(values)
        if not self._v:
            raise ValueError("vector must be non-empty")
        if (lo is None) != (hi is None):
            raise ValueError("give both bounds or neither")
        self.lo = lo
        self.hi = hi

    def __len__(self) -> int:
        return len(self._v)

    def __getitem__(self, i):
        return self._v[i]

    def __setitem__(self, i: int, x) -> None:
        self._v[i] = x

    def __iter__(self):
        return iter(self._v)

    @property
    def bounded(self) -> bool:
        return self.lo is not None

    def to_list(self) -> list:
        return list(self._v)

    def copy(self):
        clone = object.__new__(type(self))
        clone._v = self._v[:]
        clone.lo = self.lo
        clone.hi = self.hi
        return clone

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and self._v == other._v

    def __hash__(self):
        return hash(tuple(self._v))

    def __str__(self) -> str:
        return " ".join(str(x) for x in self._v)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._v!r}, lo={self.lo!r}, hi={self.hi!r})"


class IntegerVector(_NumberVector):
    """Vector of ints with an optional inclusive domain ``[lo, hi]``."""

    __slots__ = ()

    def __init__(self, values: Iterable[int], lo: int | None = None, hi: int | None = None) -> None:
        super().__init__((int(x) for x in values), lo, hi)
        if lo is not None:
            if lo > hi:
                raise ValueError(f"empty domain [{lo}, {hi}]")
            if any(x < lo or x > hi for x in self._v):
                raise ValueError("value outside domain")


class RealVector(_NumberVector):
    """Vector of finite floats with optional bounds ``[lo, hi]``."""

    __slots__ = ()

    def __init__(self, values: Iterable[float], lo: float | None = None, hi: float | None = None) -> None:
        super().__init__((float(x) for x in values), lo, hi)
        if not all(math.isfinite(x) for x in self._v):
            raise ValueError("components must be finite")
        if lo is not None:
            if not lo < hi:
                raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
            if any(x < lo or x > hi for x in self._v):
                raise ValueError("value outside bounds")


class Permutation:
    """An arrangement of ``0..n-1``, stored as its one-line array."""

    __slots__ = ("_a",)

    def __init__(self, order: int | Sequence[int]) -> None:
        if isinstance(order, int):
            if order < 1:
                raise ValueError(f"length must be positive, got {order}")
            self._a = list(range(order))
        else:
            self._a = list(order)
            if not self._a or not is_valid_permutation(self._a):
                raise ValueError(f"not a permutation of 0..n-1: {self._a}")

    def __len__(self) -> int:
        return len(self._a)

    def __getitem__(self, i):
        return self._a[i]

    def __iter__(self):
        return iter(self._a)

    def to_list(self) -> list[int]:
        return list(self._a)

    def inverse(self) -> list[int]:
        inv = [0] * len(self._a)
        for i, x in enumerate(self._a):
            inv[x] = i
        return inv

    def is_valid(self) -> bool:
        return is_valid_permutation(self._a)

    def copy(self) -> Permutation:
        p = Permutation.__new__(Permutation)
        p._a = self._a[:]
        return p

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._a == other._a

    def __hash__(self) -> int:
        return hash(tuple(self._a))

    def __str__(self) -> str:
        return " ".join(map(str, self._a))

    def __repr__(self) -> str:
        return f"Permutation({self._a})"


def is_valid_permutation(a: Sequence[int]) -> bool:
    """The bijectivity oracle: sorted contents equal ``0..n-1``."""
    return sorted(a) == list(range(len(a)))


def random_bitvector(rng: RandomStream, n: int) -> BitVector:
    if n < 1:
        raise ValueError(f"length must be positive, got {n}")
    return BitVector(n, rng.getrandbits(n))


def random_permutation(rng: RandomStream, n: int) -> Permutation:
    if n < 1:
        raise ValueError(f"length must be positive, got {n}")
    p = Permutation(n)
    rng.shuffle(p._a)
    return p


def random_real_vector(rng: RandomStream, n: int, lo: float, hi: float, bounded: bool = True) -> RealVector:
    if n < 1:
        raise ValueError(f"length must be positive, got {n}")
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    values = [rng.uniform(lo, hi) for _ in range(n)]
    return RealVector(values, lo, hi) if bounded else RealVector(values)


def random_integer_vector(rng: RandomStream, n: int, lo: int, hi: int, bounded: bool = True) -> IntegerVector:
    if n < 1:
        raise ValueError(f"length must be positive, got {n}")
    if lo > hi:
        raise ValueError(f"need lo <= hi, got [{lo}, {hi}]")
    span = hi - lo + 1
    values = [lo + rng.next_int(span) for _ in range(n)]
    return IntegerVector(values, lo, hi) if bounded else IntegerVector(values)
