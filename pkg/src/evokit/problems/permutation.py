"""Permutation benchmarks: permutation in a haystack, TSP, QAP and bin packing."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from ..core import Problem
from ..representations import Permutation, random_permutation
from ..rng import RandomStream


def exact_match_distance(p: Sequence[int], q: Sequence[int]) -> int:
    """Number of positions where the two permutations differ."""
    return sum(1 for x, y in zip(p, q) if x != y)


class PermutationProblem(Problem[Permutation]):
    genome = "perm"

    def __init__(self, n: int) -> None:
        self.n = n

    def random_solution(self, rng):
        return random_permutation(rng, self.n)


class PermutationInAHaystack(PermutationProblem):
    """Cost is a distance to a hidden target permutation (identity by default)."""

    min_cost = 0

    def __init__(
        self,
        target: int | Permutation,
        metric: Callable[[Sequence[int], Sequence[int]], int] = exact_match_distance,
    ) -> None:
        if isinstance(target, int):
            target = Permutation(target)
        super().__init__(len(target))
        self.target = target.to_list()
        self.metric = metric

    def cost(self, candidate):
        return self.metric(candidate._a, self.target)


def haystack_cost(p: Permutation, target: Permutation) -> int:
    return exact_match_distance(p.to_list(), target.to_list())


@dataclass(frozen=True)
class TspInstance:
    coords: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.coords) < 2:
            raise ValueError("a TSP instance needs at least two cities")

    @property
    def n(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class QapInstance:
    flow: tuple[tuple[int, ...], ...]
    distance: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.flow)
        for m in (self.flow, self.distance):
            if len(m) != n or any(len(row) != n for row in m):
                raise ValueError("flow and distance must be square matrices of equal size")
            if any(x < 0 for row in m for x in row):
                raise ValueError("QAP matrices must be non-negative")

    @property
    def n(self) -> int:
        return len(self.flow)


@dataclass(frozen=True)
class BinPackingInstance:
    capacity: int
    sizes: tuple[int, ...]

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("capacity must be positive")
        if any(not 1 <= s <= self.capacity for s in self.sizes):
            raise ValueError("every item must fit in an empty bin")

    @property
    def n(self) -> int:
        return len(self.sizes)


class TravelingSalesperson(PermutationProblem):
    """Closed-tour Euclidean length.

    Edge lengths are summed with :func:`math.fsum`, so the cost is the same
    to the last bit for every rotation or reversal of a tour.
    """

    min_cost = None

    def __init__(self, instance: TspInstance) -> None:
        super().__init__(instance.n)
        self.instance = instance
        pts = instance.coords
        d = [[0.0] * self.n for _ in range(self.n)]
        for i in range(self.n):
            for j in range(i + 1, self.n):
                d[i][j] = d[j][i] = math.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1])
        self._d = d

    def cost(self, candidate):
        a = candidate._a
        d = self._d
        prev = a[-1]
        legs = []
        for x in a:
            legs.append(d[prev][x])
            prev = x
        return math.fsum(legs)


class QuadraticAssignment(PermutationProblem):
    """``sum_{i,j} flow[i][j] * distance[p(i)][p(j)]`` with integer cost."""

    min_cost = None

    def __init__(self, instance: QapInstance) -> None:
        super().__init__(instance.n)
        self.instance = instance

    def cost(self, candidate):
        p = candidate._a
        dist = self.instance.distance
        total = 0
        for i, row in enumerate(self.instance.flow):
            drow = dist[p[i]]
            total += sum(f * drow[p[j]] for j, f in enumerate(row))
        return total


class BinPacking(PermutationProblem):
    """Bins used when items are placed first-fit in permutation order.

    ``min_cost`` is the volume bound; reaching it proves optimality.
    """

    def __init__(self, instance: BinPackingInstance) -> None:
        super().__init__(instance.n)
        self.instance = instance
        self.min_cost = -(-sum(instance.sizes) // instance.capacity)

    def cost(self, candidate):
        sizes = self.instance.sizes
        free: list[int] = []
        for item in candidate._a:
            s = sizes[item]
            for b, room in enumerate(free):
                if s <= room:
                    free[b] = room - s
                    break
            else:
                free.append(self.instance.capacity - s)
        return len(free)


def tsp_cost(p: Permutation, instance: TspInstance) -> float:
    return TravelingSalesperson(instance).cost(p)


def qap_cost(p: Permutation, instance: QapInstance) -> int:
    return QuadraticAssignment(instance).cost(p)


def binpacking_cost(p: Permutation, instance: BinPackingInstance) -> int:
    return BinPacking(instance).cost(p)


def generate_instance(kind: str, n: int, rng: RandomStream, capacity: int = 100, max_entry: int = 50):
    """A seeded random instance.

    TSP cities are uniform in the unit square, QAP entries uniform integers in
    ``[0, max_entry]`` and bin-packing sizes uniform integers in ``[1, capacity]``.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if kind == "tsp":
        return TspInstance(tuple((rng.random(), rng.random()) for _ in range(n)))
    if kind == "qap":
        def matrix():
            return tuple(tuple(rng.next_int(max_entry + 1) for _ in range(n)) for _ in range(n))

        flow = matrix()
        return QapInstance(flow, matrix())
    if kind == "binpacking":
        return BinPackingInstance(capacity, tuple(1 + rng.next_int(capacity) for _ in range(n)))
    raise ValueError(f"unknown instance kind {kind!r}")


def instance_to_dict(instance) -> dict:
    if isinstance(instance, TspInstance):
        return {"kind": "tsp", "n": instance.n, "coords": [list(c) for c in instance.coords]}
    if isinstance(instance, QapInstance):
        return {
            "kind": "qap",
            "n": instance.n,
            "flow": [list(r) for r in instance.flow],
            "distance": [list(r) for r in instance.distance],
        }
    if isinstance(instance, BinPackingInstance):
        return {"kind": "binpacking", "n": instance.n, "capacity": instance.capacity, "sizes": list(instance.sizes)}
    raise TypeError(f"not an instance: {instance!r}")


def instance_from_dict(data: dict):
    kind = data.get("kind")
    if kind == "tsp":
        inst = TspInstance(tuple((float(x), float(y)) for x, y in data["coords"]))
    elif kind == "qap":
        inst = QapInstance(
            tuple(tuple(int(x) for x in r) for r in data["flow"]),
            tuple(tuple(int(x) for x in r) for r in data["distance"]),
        )
    elif kind == "binpacking":
        inst = BinPackingInstance(int(data["capacity"]), tuple(int(s) for s in data["sizes"]))
    else:
        raise ValueError(f"unknown instance kind {kind!r}")
    if "n" in data and data["n"] != inst.n:
        raise ValueError(f"declared n={data['n']} but instance has {inst.n} entries")
    return inst


def dumps_instance(instance) -> str:
    return json.dumps(instance_to_dict(instance))


def loads_instance(text: str):
    return instance_from_dict(json.loads(text))
