"""Problem and fitness abstractions, operator contracts, and run bookkeeping.

Problems are minimised (``cost``); engines maximise ``fitness``. A
:class:`FitnessFunction` wraps a :class:`Problem` and maps one onto the other.
Operators work in place on genomes and receive the random stream on every
call, so a single operator instance carries no randomness of its own.
"""

from __future__ import annotations

import copy
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Generic, Sequence, TypeVar

from .rng import RandomStream, cumulative_weights, roulette_spin

G = TypeVar("G")


class Splittable:
    """Something that can produce an independent functional copy of itself."""

    def split(self):
        return copy.deepcopy(self)


@dataclass(frozen=True)
class SolutionCostPair(Generic[G]):
    solution: G
    cost: float
    contains_known_optimal: bool = False


class Problem(ABC, Generic[G]):
    """A minimisation problem over genomes of type ``G``.

    Subclasses set ``min_cost`` when a lower bound on the cost is known;
    reaching it proves optimality. ``cost`` may return an ``int`` or a
    ``float``. Integer-cost problems simply return ints.
    """

    min_cost: float | None = None

    @abstractmethod
    def cost(self, candidate: G) -> float:
        ...

    def value(self, candidate: G) -> float:
        """The raw objective. Defaults to the cost."""
        return self.cost(candidate)

    def cost_as_double(self, candidate: G) -> float:
        return float(self.cost(candidate))

    def is_min_cost(self, cost: float) -> bool:
        return self.min_cost is not None and cost <= self.min_cost

    def solution_cost_pair(self, candidate: G) -> SolutionCostPair[G]:
        c = self.cost(candidate)
        return SolutionCostPair(candidate, c, self.is_min_cost(c))

    def random_solution(self, rng: RandomStream) -> G:
        """A random genome of the right shape; used to seed populations."""
        raise NotImplementedError(f"{type(self).__name__} has no default initializer")


class FitnessFunction(ABC, Generic[G]):
    """Maximised quality of a genome, tied to the problem it was derived from."""

    def __init__(self, problem: Problem[G]) -> None:
        self.problem = problem

    @abstractmethod
    def fitness(self, candidate: G) -> float:
        ...

    def evaluate(self, candidate: G) -> tuple[float, float]:
        """Return ``(fitness, cost)``; engines call this once per evaluation."""
        return self.fitness(candidate), self.problem.cost(candidate)


class CostBasedFitness(FitnessFunction[G]):
    """Fitness computed from cost alone, so one ``cost`` call serves both."""

    @abstractmethod
    def from_cost(self, cost: float) -> float:
        ...

    def fitness(self, candidate: G) -> float:
        return self.from_cost(self.problem.cost(candidate))

    def evaluate(self, candidate: G) -> tuple[float, float]:
        c = self.problem.cost(candidate)
        return self.from_cost(c), c


class NegativeCostFitness(CostBasedFitness[G]):
    """``fitness = offset - cost``.

    Pick ``offset`` at or above the largest cost you expect if the selection
    scheme needs positive fitness; otherwise combine it with fitness shifting.
    """

    def __init__(self, problem: Problem[G], offset: float = 0) -> None:
        super().__init__(problem)
        self.offset = offset

    def from_cost(self, cost: float) -> float:
        return self.offset - cost


class InverseCostFitness(CostBasedFitness[G]):
    """``fitness = 1 / (1 + cost)``. Intended for non-negative costs."""

    def from_cost(self, cost: float) -> float:
        return 1.0 / (1.0 + cost)


def negative_cost_fitness(problem: Problem[G], offset: float = 0) -> NegativeCostFitness[G]:
    return NegativeCostFitness(problem, offset)


def inverse_cost_fitness(problem: Problem[G]) -> InverseCostFitness[G]:
    return InverseCostFitness(problem)


class MutationOperator(Splittable, ABC, Generic[G]):
    @abstractmethod
    def mutate(self, rng: RandomStream, c: G) -> None:
        """Mutate ``c`` in place."""


class CrossoverOperator(Splittable, ABC, Generic[G]):
    @abstractmethod
    def cross(self, rng: RandomStream, c1: G, c2: G) -> None:
        """Recombine ``c1`` and ``c2`` in place; both become children."""


class SelectionOperator(Splittable, ABC):
    def init(self, generations: int) -> None:
        """Called once per run with the generation budget."""

    @abstractmethod
    def select(self, rng: RandomStream, fitnesses: Sequence[float], selected: list[int]) -> None:
        """Fill ``selected`` with population indices."""


class _Hybrid(Splittable):
    def __init__(self, ops: Sequence[Any], weights: Sequence[float] | None) -> None:
        if not ops:
            raise ValueError("hybrid operator needs at least one component")
        if weights is not None:
            if len(weights) != len(ops):
                raise ValueError("weights and operators differ in length")
            if any(w <= 0 for w in weights):
                raise ValueError("hybrid weights must be positive")
            self._cumulative = cumulative_weights(weights)
        else:
            self._cumulative = None
        self.ops = list(ops)
        self.weights = None if weights is None else list(weights)

    def _pick(self, rng: RandomStream):
        if len(self.ops) == 1:
            return self.ops[0]
        if self._cumulative is None:
            return self.ops[rng.next_int(len(self.ops))]
        return self.ops[roulette_spin(rng, self._cumulative)]

    def split(self):
        return type(self)([op.split() for op in self.ops], self.weights)


class HybridMutation(_Hybrid, MutationOperator[G]):
    """Applies one operator per call, chosen at random (optionally weighted)."""

    def mutate(self, rng: RandomStream, c: G) -> None:
        self._pick(rng).mutate(rng, c)


class HybridCrossover(_Hybrid, CrossoverOperator[G]):
    """Applies one crossover per call, chosen at random (optionally weighted)."""

    def cross(self, rng: RandomStream, c1: G, c2: G) -> None:
        self._pick(rng).cross(rng, c1, c2)


def hybrid_mutation(ops, weights=None) -> HybridMutation:
    return HybridMutation(ops, weights)


def hybrid_crossover(ops, weights=None) -> HybridCrossover:
    return HybridCrossover(ops, weights)


class ProgressTracker(Generic[G]):
    """Best-so-far solution shared by one or more concurrent runs.

    Updates are guarded by a lock and only strict improvements are recorded,
    so the best cost never increases.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._best: SolutionCostPair[G] | None = None
        self._evaluations = 0

    @property
    def best(self) -> SolutionCostPair[G] | None:
        return self._best

    @property
    def total_evaluations(self) -> int:
        return self._evaluations

    @property
    def found_optimal(self) -> bool:
        return self._best is not None and self._best.contains_known_optimal

    def update(self, solution: G, cost: float, known_optimal: bool = False) -> bool:
        with self._lock:
            if self._best is not None and not cost < self._best.cost:
                return False
            self._best = SolutionCostPair(_clone(solution), cost, known_optimal)
            return True

    def add_evaluations(self, count: int) -> None:
        with self._lock:
            self._evaluations += count


def _clone(genome):
    return genome.copy() if hasattr(genome, "copy") else copy.deepcopy(genome)
