"""Crossover operators for permutations.

Every operator rewrites both parents in place with two children. The
``*_core`` functions take the random choices (segment, index subset, mask,
donor vector) explicitly and return the two children as new lists; the
operator classes draw those choices and copy the children back.

Asymmetric definitions produce the second child by swapping parent roles.
Segments are inclusive; a random segment is two distinct ordered indices.
"""

from __future__ import annotations

from typing import Sequence

from ..core import CrossoverOperator
from ..representations import Permutation


def _inverse(a: Sequence[int]) -> list[int]:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return inv


def cycle_crossover_core(a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    """Exchange every second cycle, counting cycles by their smallest index."""
    n = len(a)
    pos_a = _inverse(a)
    c1, c2 = list(a), list(b)
    seen = [False] * n
    exchange = False
    for start in range(n):
        if seen[start]:
            continue
        i = start
        while not seen[i]:
            seen[i] = True
            if exchange:
                c1[i], c2[i] = b[i], a[i]
            i = pos_a[b[i]]
        exchange = not exchange
    return c1, c2


def _pmx_swaps(c1: list[int], c2: list[int], a: Sequence[int], b: Sequence[int], indices) -> None:
    inv1 = _inverse(c1)
    inv2 = _inverse(c2)
    for k in indices:
        x = b[k]
        p = inv1[x]
        y = c1[k]
        c1[k], c1[p] = x, y
        inv1[x], inv1[y] = k, p
        x = a[k]
        p = inv2[x]
        y = c2[k]
        c2[k], c2[p] = x, y
        inv2[x], inv2[y] = k, p


def pmx_core(a: Sequence[int], b: Sequence[int], i: int, j: int) -> tuple[list[int], list[int]]:
    """Partially matched crossover over segment ``[i..j]``.

    Implemented as the equivalent sequence of swaps: for each segment index,
    move the other parent's element into place by swapping it there.
    """
    c1, c2 = list(a), list(b)
    _pmx_swaps(c1, c2, a, b, range(i, j + 1))
    return c1, c2


def upmx_core(a: Sequence[int], b: Sequence[int], indices: Sequence[int]) -> tuple[list[int], list[int]]:
    c1, c2 = list(a), list(b)
    _pmx_swaps(c1, c2, a, b, sorted(indices))
    return c1, c2


def _ox_child(keep: Sequence[int], other: Sequence[int], i: int, j: int, wrap: bool) -> list[int]:
    n = len(keep)
    in_segment = [False] * n
    for t in range(i, j + 1):
        in_segment[keep[t]] = True
    child = list(keep)
    if wrap:
        start = (j + 1) % n
        order = [other[(start + t) % n] for t in range(n)]
        slots = [(start + t) % n for t in range(n - (j - i + 1))]
    else:
        order = other
        slots = [*range(i), *range(j + 1, n)]
    fill = [x for x in order if not in_segment[x]]
    for s, x in zip(slots, fill):
        child[s] = x
    return child


def ox_core(a, b, i: int, j: int) -> tuple[list[int], list[int]]:
    """Order crossover: keep ``[i..j]``, fill from the other parent starting after ``j`` with wraparound."""
    return _ox_child(a, b, i, j, True), _ox_child(b, a, i, j, True)


def nwox_core(a, b, i: int, j: int) -> tuple[list[int], list[int]]:
    """Non-wrapping order crossover: keep ``[i..j]``, fill left to right from index 0."""
    return _ox_child(a, b, i, j, False), _ox_child(b, a, i, j, False)


def _ox2_child(target: Sequence[int], donor: Sequence[int], indices: Sequence[int]) -> list[int]:
    n = len(target)
    chosen = [False] * n
    for k in indices:
        chosen[donor[k]] = True
    reorder = iter(donor[k] for k in sorted(indices))
    return [next(reorder) if chosen[x] else x for x in target]


def ox2_core(a, b, indices: Sequence[int]) -> tuple[list[int], list[int]]:
    """Order crossover 2: elements the other parent holds at ``indices`` take on its relative order."""
    return _ox2_child(a, b, indices), _ox2_child(b, a, indices)


def _keep_and_fill(keep: Sequence[int], order: Sequence[int], positions: Sequence[int]) -> list[int]:
    n = len(keep)
    child = [-1] * n
    placed = [False] * n
    for p in positions:
        child[p] = keep[p]
        placed[keep[p]] = True
    fill = iter(x for x in order if not placed[x])
    return [next(fill) if x < 0 else x for x in child]


def uobx_core(a, b, mask: Sequence[bool]) -> tuple[list[int], list[int]]:
    """Uniform order-based crossover: keep own elements where ``mask`` is true, fill in the other's order."""
    kept = [p for p, m in enumerate(mask) if m]
    return _keep_and_fill(a, b, kept), _keep_and_fill(b, a, kept)


def position_based_core(a, b, indices: Sequence[int]) -> tuple[list[int], list[int]]:
    """Inherit the other parent's elements at ``indices``; fill the rest in own order."""
    return _keep_and_fill(b, a, indices), _keep_and_fill(a, b, indices)


def ppx_core(a, b, donors: Sequence[bool]) -> tuple[list[int], list[int]]:
    """Precedence preservative crossover.

    At each position the donor (``True`` for ``a``) contributes its leftmost
    unused element. The second child uses the complementary donors.
    """
    return _ppx_child(a, b, donors, True), _ppx_child(a, b, donors, False)


def _ppx_child(a, b, donors, first_is_a: bool) -> list[int]:
    n = len(a)
    used = [False] * n
    ia = ib = 0
    child = []
    for d in donors:
        if d == first_is_a:
            while used[a[ia]]:
                ia += 1
            x = a[ia]
        else:
            while used[b[ib]]:
                ib += 1
            x = b[ib]
        used[x] = True
        child.append(x)
    return child


def _check(c1: Permutation, c2: Permutation) -> int:
    n = len(c1._a)
    if len(c2._a) != n:
        raise ValueError(f"length mismatch: {n} vs {len(c2._a)}")
    return n


def _segment(rng, n: int) -> tuple[int, int]:
    i = rng.next_int(n)
    j = rng.next_int(n - 1)
    if j >= i:
        j += 1
    return (i, j) if i < j else (j, i)


class CycleCrossover(CrossoverOperator[Permutation]):
    def cross(self, rng, c1, c2):
        _check(c1, c2)
        c1._a, c2._a = cycle_crossover_core(c1._a, c2._a)


class _SegmentCrossover(CrossoverOperator[Permutation]):
    core = None

    def cross(self, rng, c1, c2):
        n = _check(c1, c2)
        if n < 2:
            return
        i, j = _segment(rng, n)
        c1._a, c2._a = type(self).core(c1._a, c2._a, i, j)


class PartiallyMatchedCrossover(_SegmentCrossover):
    core = staticmethod(pmx_core)


class OrderCrossover(_SegmentCrossover):
    core = staticmethod(ox_core)


class NonWrappingOrderCrossover(_SegmentCrossover):
    core = staticmethod(nwox_core)


class _SubsetCrossover(CrossoverOperator[Permutation]):
    def __init__(self, u: float = 0.5) -> None:
        if not 0.0 <= u <= 1.0:
            raise ValueError(f"u must lie in [0, 1], got {u}")
        self.u = u


class UniformPartiallyMatchedCrossover(_SubsetCrossover):
    """PMX repair applied at each index independently with probability ``u``."""

    def __init__(self, u: float = 1 / 3) -> None:
        super().__init__(u)

    def cross(self, rng, c1, c2):
        n = _check(c1, c2)
        c1._a, c2._a = upmx_core(c1._a, c2._a, list(rng.bernoulli_indices(n, self.u)))


class OrderCrossoverTwo(_SubsetCrossover):
    def cross(self, rng, c1, c2):
        n = _check(c1, c2)
        c1._a, c2._a = ox2_core(c1._a, c2._a, list(rng.bernoulli_indices(n, self.u)))


class UniformOrderBasedCrossover(_SubsetCrossover):
    def cross(self, rng, c1, c2):
        n = _check(c1, c2)
        mask = [False] * n
        for k in rng.bernoulli_indices(n, self.u):
            mask[k] = True
        c1._a, c2._a = uobx_core(c1._a, c2._a, mask)


class PositionBasedCrossover(_SubsetCrossover):
    def cross(self, rng, c1, c2):
        n = _check(c1, c2)
        c1._a, c2._a = position_based_core(c1._a, c2._a, list(rng.bernoulli_indices(n, self.u)))


class PrecedencePreservativeCrossover(CrossoverOperator[Permutation]):
    """PPX with a two-cut donor pattern: the first parent donates outside a random segment, the second inside it."""

    def cross(self, rng, c1, c2):
        n = _check(c1, c2)
        if n < 2:
            return
        i, j = _segment(rng, n)
        donors = [not i <= t <= j for t in range(n)]
        c1._a, c2._a = ppx_core(c1._a, c2._a, donors)


class UniformPrecedencePreservativeCrossover(_SubsetCrossover):
    """PPX whose donor at each position is the first parent with probability ``u``."""

    def cross(self, rng, c1, c2):
        n = _check(c1, c2)
        donors = [False] * n
        for k in rng.bernoulli_indices(n, self.u):
            donors[k] = True
        c1._a, c2._a = ppx_core(c1._a, c2._a, donors)


def edge_map(a: Sequence[int], b: Sequence[int], cyclic: bool = True) -> list[dict[int, int]]:
    """Undirected adjacency of both parents; values count how many parents share the edge."""
    n = len(a)
    adj: list[dict[int, int]] = [{} for _ in range(n)]
    for p in (a, b):
        own = set()
        for t in range(n - (0 if cyclic else 1)):
            x, y = p[t], p[(t + 1) % n]
            edge = (x, y) if x < y else (y, x)
            # n == 2 closes the tour over the same edge twice.
            if x == y or edge in own:
                continue
            own.add(edge)
            adj[x][y] = adj[x].get(y, 0) + 1
            adj[y][x] = adj[y].get(x, 0) + 1
    return adj


def edge_recombination_core(adj: list[dict[int, int]], start: int, rng, enhanced: bool = False) -> list[int]:
    """Build one child from an edge map (consumed in place).

    From the current element, move to the neighbour with the fewest remaining
    neighbours, ties broken at random. ``enhanced`` prefers neighbours shared
    by both parents. A dead end restarts at a random unvisited element.
    """
    n = len(adj)
    remaining = list(range(n))
    where = list(range(n))
    child = []
    current = start
    while True:
        child.append(current)
        # O(1) removal from the unvisited pool.
        k = where[current]
        last = remaining.pop()
        if last != current:
            remaining[k] = last
            where[last] = k
        if not remaining:
            return child
        nbrs = adj[current]
        for y in nbrs:
            del adj[y][current]
        if not nbrs:
            current = remaining[rng.next_int(len(remaining))]
            continue
        pool = nbrs
        if enhanced:
            shared = [y for y, m in nbrs.items() if m > 1]
            if shared:
                pool = shared
        best = []
        fewest = n + 1
        for y in pool:
            size = len(adj[y])
            if size < fewest:
                fewest = size
                best = [y]
            elif size == fewest:
                best.append(y)
        current = best[0] if len(best) == 1 else best[rng.next_int(len(best))]


class EdgeRecombination(CrossoverOperator[Permutation]):
    """Edge recombination; ``cyclic`` treats each parent as a closed tour.

    Each child starts from the first element of one parent, chosen at random.
    """

    enhanced = False

    def __init__(self, cyclic: bool = True) -> None:
        self.cyclic = cyclic

    def cross(self, rng, c1, c2):
        n = _check(c1, c2)
        if n < 2:
            return
        a, b = c1._a, c2._a
        adj = edge_map(a, b, self.cyclic)
        firsts = (a[0], b[0])
        child1 = edge_recombination_core([dict(d) for d in adj], firsts[rng.next_int(2)], rng, self.enhanced)
        child2 = edge_recombination_core(adj, firsts[rng.next_int(2)], rng, self.enhanced)
        c1._a, c2._a = child1, child2


class EnhancedEdgeRecombination(EdgeRecombination):
    """Edge recombination that prefers edges present in both parents."""

    enhanced = True
