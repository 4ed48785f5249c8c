"""Mutation operators for permutations.

Each operator comes as a ``*_core`` function that applies the move to a
plain list given explicit indices, plus a :class:`MutationOperator` that
draws those indices from a stream. Segments are inclusive on both ends.
On permutations shorter than two elements every operator is a no-op.
"""

from __future__ import annotations

from typing import Sequence

from ..core import MutationOperator
from ..representations import Permutation


def swap_core(a: list, i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]


def insertion_core(a: list, i: int, j: int) -> None:
    """Remove the element at ``i`` and reinsert it so it lands at index ``j``."""
    a.insert(j, a.pop(i))


def reversal_core(a: list, i: int, j: int) -> None:
    if i > j:
        i, j = j, i
    a[i : j + 1] = a[j : i - 1 if i > 0 else None : -1]


def rearrange_core(a: list, positions: Sequence[int], order: Sequence[int]) -> None:
    """Put the element from ``positions[order[t]]`` at ``positions[t]``."""
    old = [a[p] for p in positions]
    for p, k in zip(positions, order):
        a[p] = old[k]


def cycle_core(a: list, positions: Sequence[int]) -> None:
    """Rotate elements along ``positions``: ``positions[t]`` moves to ``positions[t+1]``, last to first."""
    carry = a[positions[-1]]
    for p in positions:
        a[p], carry = carry, a[p]


def three_opt_core(a: list, i: int, j: int, k: int, swap: bool, reverse_first: bool, reverse_second: bool) -> None:
    """Reconnect the segments ``a[i:j]`` and ``a[j:k]`` (half-open cut points).

    Each segment may be reversed, and the two may trade places.
    """
    first = a[i:j]
    second = a[j:k]
    if reverse_first:
        first.reverse()
    if reverse_second:
        second.reverse()
    a[i:k] = second + first if swap else first + second


def block_move_core(a: list, i: int, j: int, k: int) -> None:
    """Move block ``[i..j]`` so it sits just before original index ``k``.

    ``k`` must lie outside ``[i, j + 1]``; ``k == len(a)`` moves it to the end.
    """
    if i <= k <= j + 1:
        raise ValueError(f"destination {k} overlaps block [{i}..{j}]")
    block = a[i : j + 1]
    if k < i:
        a[k : j + 1] = block + a[k:i]
    else:
        a[i:k] = a[j + 1 : k] + block


def block_swap_core(a: list, i: int, j: int, k: int, l: int) -> None:
    """Exchange blocks ``[i..j]`` and ``[k..l]``, where ``j < k``."""
    if not (i <= j < k <= l):
        raise ValueError(f"blocks [{i}..{j}] and [{k}..{l}] must be ordered and disjoint")
    a[i : l + 1] = a[k : l + 1] + a[j + 1 : k] + a[i : j + 1]


def _distinct_pair(rng, n: int) -> tuple[int, int]:
    i = rng.next_int(n)
    j = rng.next_int(n - 1)
    if j >= i:
        j += 1
    return i, j


def _ordered_pair(rng, n: int) -> tuple[int, int]:
    i, j = _distinct_pair(rng, n)
    return (i, j) if i < j else (j, i)


class SwapMutation(MutationOperator[Permutation]):
    def mutate(self, rng, c):
        if len(c._a) >= 2:
            i, j = _distinct_pair(rng, len(c._a))
            swap_core(c._a, i, j)


class AdjacentSwapMutation(MutationOperator[Permutation]):
    def mutate(self, rng, c):
        if len(c._a) >= 2:
            i = rng.next_int(len(c._a) - 1)
            swap_core(c._a, i, i + 1)


class InsertionMutation(MutationOperator[Permutation]):
    def mutate(self, rng, c):
        if len(c._a) >= 2:
            i, j = _distinct_pair(rng, len(c._a))
            insertion_core(c._a, i, j)


class ReversalMutation(MutationOperator[Permutation]):
    def mutate(self, rng, c):
        if len(c._a) >= 2:
            i, j = _ordered_pair(rng, len(c._a))
            reversal_core(c._a, i, j)


def _shuffle_positions(rng, a: list, positions: Sequence[int]) -> None:
    values = [a[p] for p in positions]
    rng.shuffle(values)
    for p, x in zip(positions, values):
        a[p] = x


class ScrambleMutation(MutationOperator[Permutation]):
    """Uniformly shuffle a random segment (the shuffle may be the identity)."""

    def mutate(self, rng, c):
        if len(c._a) >= 2:
            i, j = _ordered_pair(rng, len(c._a))
            _shuffle_positions(rng, c._a, range(i, j + 1))


class UniformScrambleMutation(MutationOperator[Permutation]):
    """Mark each index with probability ``u`` and shuffle the marked elements.

    The marking is redrawn until at least two indices are marked.
    """

    def __init__(self, u: float = 1 / 3) -> None:
        if not 0.0 < u < 1.0:
            raise ValueError(f"u must lie in (0, 1), got {u}")
        self.u = u

    def mutate(self, rng, c):
        n = len(c._a)
        if n < 2:
            return
        marked = list(rng.bernoulli_indices(n, self.u))
        while len(marked) < 2:
            marked = list(rng.bernoulli_indices(n, self.u))
        _shuffle_positions(rng, c._a, marked)


class CycleMutation(MutationOperator[Permutation]):
    """Rotate the elements of ``k`` random positions, ``k`` uniform in ``[2, min(k_max, n)]``."""

    def __init__(self, k_max: int = 5) -> None:
        if k_max < 2:
            raise ValueError(f"k_max must be at least 2, got {k_max}")
        self.k_max = k_max

    def mutate(self, rng, c):
        n = len(c._a)
        if n < 2:
            return
        k = 2 + rng.next_int(min(self.k_max, n) - 1)
        cycle_core(c._a, rng.sample_distinct(n, k))


# (swap, reverse_first, reverse_second); the identity reconnection is excluded.
THREE_OPT_VARIANTS = tuple(
    (s, r1, r2)
    for s in (False, True)
    for r1 in (False, True)
    for r2 in (False, True)
    if s or r1 or r2
)


def three_opt_variants(first_len: int, second_len: int) -> list[tuple[bool, bool, bool]]:
    """Reconnections that change a permutation with segments of these lengths."""
    out = []
    for v in THREE_OPT_VARIANTS:
        swap, r1, r2 = v
        if not swap:
            if r1 and not r2 and first_len < 2:
                continue
            if r2 and not r1 and second_len < 2:
                continue
            if r1 and r2 and first_len < 2 and second_len < 2:
                continue
        out.append(v)
    return out


class ThreeOptMutation(MutationOperator[Permutation]):
    """One random 3-opt move, including the moves that reduce to 2-opt reversals.

    Three cut points split off two adjacent non-empty segments; a
    reconnection is drawn uniformly among those that change the permutation.
    """

    def mutate(self, rng, c):
        n = len(c._a)
        if n < 2:
            return
        i, j, k = sorted(rng.sample_distinct(n + 1, 3))
        variants = three_opt_variants(j - i, k - j)
        three_opt_core(c._a, i, j, k, *variants[rng.next_int(len(variants))])


class BlockMoveMutation(MutationOperator[Permutation]):
    """Move a random block to a random new place; equivalently swap two adjacent blocks."""

    def mutate(self, rng, c):
        n = len(c._a)
        if n < 2:
            return
        p, q, r = sorted(rng.sample_distinct(n + 1, 3))
        block_move_core(c._a, p, q - 1, r)


class BlockSwapMutation(MutationOperator[Permutation]):
    """Exchange two random non-overlapping blocks, possibly of unequal length."""

    def mutate(self, rng, c):
        n = len(c._a)
        if n < 2:
            return
        # 4-subsets of [0, n+1] biject onto valid (start1, end1+1, start2, end2+1).
        x0, x1, x2, x3 = sorted(rng.sample_distinct(n + 2, 4))
        block_swap_core(c._a, x0, x1 - 1, x2 - 1, x3 - 2)


WINDOW_BASES = ("swap", "insertion", "reversal", "scramble", "blockmove")


class WindowLimitedMutation(MutationOperator[Permutation]):
    """A base mutation whose chosen indices lie at most ``w`` apart.

    Index pairs are uniform over all pairs allowed by the window, so with
    ``w >= n - 1`` the distribution matches the unrestricted operator. For
    block moves the window bounds the span of all moved elements.
    """

    def __init__(self, base: str, w: int) -> None:
        if base not in WINDOW_BASES:
            raise ValueError(f"unsupported window base {base!r}; expected one of {WINDOW_BASES}")
        if w < 1:
            raise ValueError(f"window must be at least 1, got {w}")
        self.base = base
        self.w = w

    def _pair(self, rng, n: int) -> tuple[int, int]:
        w = min(self.w, n - 1)
        while True:
            i = rng.next_int(n)
            j = i + 1 + rng.next_int(w)
            if j < n:
                return i, j

    def mutate(self, rng, c):
        a = c._a
        n = len(a)
        if n < 2:
            return
        if self.base == "blockmove":
            w = min(self.w, n - 1)
            while True:
                p = rng.next_int(n - 1)
                o1, o2 = sorted(rng.sample_distinct(w + 1, 2))
                q, r = p + o1 + 1, p + o2 + 1
                if r <= n:
                    break
            block_move_core(a, p, q - 1, r)
            return
        i, j = self._pair(rng, n)
        if self.base == "swap":
            swap_core(a, i, j)
        elif self.base == "insertion":
            if rng.next_int(2):
                i, j = j, i
            insertion_core(a, i, j)
        elif self.base == "reversal":
            reversal_core(a, i, j)
        else:
            _shuffle_positions(rng, a, range(i, j + 1))
