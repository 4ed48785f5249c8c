"""Evolutionary models and the parallel multi-population runner.

All engines share the same stopping rules (generation budget, evaluation
budget, target cost) and the same bookkeeping: an individual is evaluated
once when created and again only after an operator has touched its genome,
so ``RunResult.evaluations`` is exactly the number of cost evaluations.

A target cost or evaluation budget stops a run at the evaluation that hits
it, even in the middle of a generation.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Generic, Optional, TypeVar

from .core import (
    CrossoverOperator,
    FitnessFunction,
    MutationOperator,
    NegativeCostFitness,
    Problem,
    ProgressTracker,
    SelectionOperator,
    SolutionCostPair,
)
from .rng import RandomStream, from_seed

G = TypeVar("G")

GenerationCallback = Callable[[int, list], None]


class Individual(Generic[G]):
    """A genome with its cached evaluation and optional self-adaptive rates.

    ``fitness is None`` marks a genome that has changed since it was last
    evaluated.
    """

    __slots__ = ("genome", "fitness", "cost", "mutation_rate", "crossover_rate")

    def __init__(self, genome: G, fitness=None, cost=None, mutation_rate=None, crossover_rate=None) -> None:
        self.genome = genome
        self.fitness = fitness
        self.cost = cost
        self.mutation_rate = mutation_rate
        self.crossover_rate = crossover_rate

    def clone(self) -> Individual[G]:
        return Individual(self.genome.copy(), self.fitness, self.cost, self.mutation_rate, self.crossover_rate)

    def __repr__(self) -> str:
        return f"Individual({self.genome!r}, fitness={self.fitness!r})"


@dataclass
class EngineConfig:
    """Parameters shared by the engines.

    ``mu`` and ``lam`` are used only by the (mu + lambda) family. At least one
    of ``max_generations`` and ``max_evaluations`` must be set.
    """

    population_size: int = 100
    crossover_rate: float = 1.0
    mutation_rate: float = 1.0
    elitism: int = 0
    max_generations: Optional[int] = None
    max_evaluations: Optional[int] = None
    target_cost: Optional[float] = None
    mu: int = 1
    lam: int = 1

    def validate(self) -> None:
        if self.max_generations is None and self.max_evaluations is None:
            raise ValueError("set max_generations or max_evaluations")
        if self.max_generations is not None and self.max_generations < 0:
            raise ValueError("max_generations must be non-negative")
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise ValueError("max_evaluations must be positive")
        if self.population_size < 1:
            raise ValueError("population_size must be positive")
        if not 0 <= self.elitism <= self.population_size:
            raise ValueError(f"elitism must lie in [0, {self.population_size}], got {self.elitism}")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {rate}")
        if self.mu < 1 or self.lam < 1:
            raise ValueError("mu and lam must be positive")


@dataclass
class AdaptiveConfig:
    """Bounds and step size for self-adaptive rates.

    ``mutation_min=None`` means ``1 / (10 n)`` for genomes of length ``n``.
    With ``initial_rates=(m, c)`` every member starts at those rates; otherwise
    they are drawn uniformly within the bounds.
    """

    mutation_min: Optional[float] = None
    mutation_max: float = 0.5
    crossover_min: float = 0.0
    crossover_max: float = 1.0
    sigma: float = 0.05
    initial_rates: Optional[tuple[float, float]] = None

    def bounds(self, genome_length: int) -> tuple[float, float, float, float]:
        m_lo = self.mutation_min if self.mutation_min is not None else 1.0 / (10 * genome_length)
        m_hi, c_lo, c_hi = self.mutation_max, self.crossover_min, self.crossover_max
        if not 0.0 <= m_lo <= m_hi <= 1.0 or not 0.0 <= c_lo <= c_hi <= 1.0:
            raise ValueError(f"invalid rate bounds m=[{m_lo}, {m_hi}] c=[{c_lo}, {c_hi}]")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if self.initial_rates is not None:
            m, c = self.initial_rates
            if not (m_lo <= m <= m_hi and c_lo <= c <= c_hi):
                raise ValueError(f"initial rates {self.initial_rates} outside bounds")
        return m_lo, m_hi, c_lo, c_hi


@dataclass
class RunResult(Generic[G]):
    best: SolutionCostPair[G]
    evaluations: int
    generations: int
    elapsed: float
    seed: Optional[int] = None
    replicas: tuple = field(default=(), repr=False)

    @property
    def best_cost(self):
        return self.best.cost


class _Run:
    """Evaluation accounting, best-so-far and stopping state for one run."""

    def __init__(self, fitness: FitnessFunction, config: EngineConfig, shared: ProgressTracker | None) -> None:
        self.fitness = fitness
        self.problem = fitness.problem
        self.max_evaluations = config.max_evaluations
        self.max_generations = config.max_generations
        self.target = config.target_cost
        self.shared = shared
        self.evaluations = 0
        self.generations = 0
        self.best: SolutionCostPair | None = None
        self.stopped = False
        self.started = time.perf_counter()

    def evaluate(self, ind: Individual) -> None:
        f, c = self.fitness.evaluate(ind.genome)
        ind.fitness = f
        ind.cost = c
        self.evaluations += 1
        if self.best is None or c < self.best.cost:
            optimal = self.problem.is_min_cost(c)
            self.best = SolutionCostPair(ind.genome.copy(), c, optimal)
            if self.shared is not None:
                self.shared.update(ind.genome, c, optimal)
        if (self.target is not None and c <= self.target) or (
            self.max_evaluations is not None and self.evaluations >= self.max_evaluations
        ):
            self.stopped = True

    def evaluate_all(self, population: list[Individual]) -> None:
        for ind in population:
            if ind.fitness is None:
                self.evaluate(ind)
                if self.stopped:
                    return

    def next_generation(self) -> bool:
        """Count a new generation if the run may continue."""
        if self.stopped or (self.max_generations is not None and self.generations >= self.max_generations):
            return False
        self.generations += 1
        return True

    def result(self) -> RunResult:
        if self.shared is not None:
            self.shared.add_evaluations(self.evaluations)
        return RunResult(self.best, self.evaluations, self.generations, time.perf_counter() - self.started)


def _stream(rng: RandomStream | int) -> tuple[RandomStream, Optional[int]]:
    if isinstance(rng, RandomStream):
        return rng, None
    return from_seed(rng), rng


def _chance(rng: RandomStream, p: float) -> bool:
    # Rates of exactly 0 or 1 consume no randomness.
    if p >= 1.0:
        return True
    return p > 0.0 and rng.random() < p


class _Engine:
    def __init__(self, problem: Problem, fitness: FitnessFunction | None, config: EngineConfig, initializer) -> None:
        if fitness is None:
            fitness = NegativeCostFitness(problem)
        elif fitness.problem is not problem:
            raise ValueError("fitness function belongs to a different problem")
        config.validate()
        self.problem = problem
        self.fitness = fitness
        self.config = config
        self.initializer = initializer or problem.random_solution

    def _operators(self) -> dict:
        raise NotImplementedError

    def split(self):
        """A copy with split operators, for use by another worker."""
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        for name, op in self._operators().items():
            setattr(clone, name, None if op is None else op.split())
        return clone

    def run(self, rng: RandomStream | int, tracker: ProgressTracker | None = None,
            on_generation: GenerationCallback | None = None) -> RunResult:
        rng, seed = _stream(rng)
        state = _Run(self.fitness, self.config, tracker)
        self._evolve(rng, state, on_generation)
        result = state.result()
        result.seed = seed
        return result

    def _evolve(self, rng, state: _Run, on_generation) -> None:
        raise NotImplementedError


class GenerationalEA(_Engine):
    """Generational EA with optional elitism.

    Each generation keeps the ``elitism`` fittest members unchanged, selects
    the remaining parents, pairs them consecutively (an odd one out skips
    crossover), crosses each pair with probability ``crossover_rate`` and
    mutates each child with probability ``mutation_rate``. With
    ``crossover=None`` it is the mutation-only EA.
    """

    def __init__(
        self,
        problem: Problem,
        selection: SelectionOperator,
        mutation: MutationOperator | None,
        crossover: CrossoverOperator | None = None,
        config: EngineConfig | None = None,
        fitness: FitnessFunction | None = None,
        initializer: Callable[[RandomStream], object] | None = None,
    ) -> None:
        super().__init__(problem, fitness, config or EngineConfig(max_generations=100), initializer)
        self.selection = selection
        self.mutation = mutation
        self.crossover = crossover

    def _operators(self):
        return {"selection": self.selection, "mutation": self.mutation, "crossover": self.crossover}

    def _initial_population(self, rng, state: _Run) -> list[Individual]:
        pop = [Individual(self.initializer(rng)) for _ in range(self.config.population_size)]
        state.evaluate_all(pop)
        return pop

    def _evolve(self, rng, state, on_generation):
        cfg = self.config
        pop = self._initial_population(rng, state)
        self.selection.init(cfg.max_generations or 0)
        if on_generation is not None and not state.stopped:
            on_generation(0, pop)
        n, e = cfg.population_size, cfg.elitism
        while state.next_generation():
            fits = [ind.fitness for ind in pop]
            elite = sorted(range(n), key=lambda i: (-fits[i], i))[:e] if e else []
            selected = [0] * (n - e)
            if selected:
                self.selection.select(rng, fits, selected)
            children = [pop[i].clone() for i in selected]
            self._vary(rng, children)
            state.evaluate_all(children)
            if state.stopped:
                return
            pop = [pop[i] for i in elite] + children
            if on_generation is not None:
                on_generation(state.generations, pop)

    def _vary(self, rng, children: list[Individual]) -> None:
        c_rate = self.config.crossover_rate
        if self.crossover is not None and c_rate > 0:
            for k in range(0, len(children) - 1, 2):
                if _chance(rng, c_rate):
                    a, b = children[k], children[k + 1]
                    self.crossover.cross(rng, a.genome, b.genome)
                    a.fitness = b.fitness = None
        m_rate = self.config.mutation_rate
        if self.mutation is not None and m_rate > 0:
            for child in children:
                if _chance(rng, m_rate):
                    self.mutation.mutate(rng, child.genome)
                    child.fitness = None


class AdaptiveEA(GenerationalEA):
    """Generational EA whose members carry their own mutation and crossover rates.

    Children inherit their parent's rates, which are then perturbed with
    Gaussian noise and clamped to the configured bounds. A pair is crossed
    with the first member's crossover rate; each child is mutated with its
    own mutation rate. ``config.crossover_rate`` and ``mutation_rate`` are
    ignored.
    """

    def __init__(self, problem, selection, mutation, crossover=None, config=None, fitness=None,
                 initializer=None, adaptive: AdaptiveConfig | None = None) -> None:
        super().__init__(problem, selection, mutation, crossover, config, fitness, initializer)
        self.adaptive = adaptive or AdaptiveConfig()
        if self.adaptive.mutation_min is not None:
            self.adaptive.bounds(1)
        self._bounds = None

    def _initial_population(self, rng, state):
        pop = [Individual(self.initializer(rng)) for _ in range(self.config.population_size)]
        self._bounds = m_lo, m_hi, c_lo, c_hi = self.adaptive.bounds(len(pop[0].genome))
        initial = self.adaptive.initial_rates
        for ind in pop:
            if initial is None:
                ind.mutation_rate = rng.uniform(m_lo, m_hi)
                ind.crossover_rate = rng.uniform(c_lo, c_hi)
            else:
                ind.mutation_rate, ind.crossover_rate = initial
        state.evaluate_all(pop)
        return pop

    def _vary(self, rng, children):
        m_lo, m_hi, c_lo, c_hi = self._bounds
        sigma = self.adaptive.sigma
        if sigma > 0:
            for child in children:
                child.mutation_rate = min(m_hi, max(m_lo, child.mutation_rate + rng.gauss(0.0, sigma)))
                child.crossover_rate = min(c_hi, max(c_lo, child.crossover_rate + rng.gauss(0.0, sigma)))
        if self.crossover is not None:
            for k in range(0, len(children) - 1, 2):
                a, b = children[k], children[k + 1]
                if _chance(rng, a.crossover_rate):
                    self.crossover.cross(rng, a.genome, b.genome)
                    a.fitness = b.fitness = None
        if self.mutation is not None:
            for child in children:
                if _chance(rng, child.mutation_rate):
                    self.mutation.mutate(rng, child.genome)
                    child.fitness = None


class MuPlusLambdaEA(_Engine):
    """(mu + lambda) EA: ``lam`` offspring per iteration, best ``mu`` of parents and offspring survive.

    Parents are chosen by ``selection`` or uniformly when it is ``None``.
    Offspring are paired for crossover (probability ``crossover_rate``) when
    there are at least two, then mutated with probability ``mutation_rate``.
    Survivor ties favour incumbents.
    """

    def __init__(self, problem, mutation, crossover=None, selection=None, config=None, fitness=None,
                 initializer=None) -> None:
        super().__init__(problem, fitness, config or EngineConfig(max_generations=100), initializer)
        self.mutation = mutation
        self.crossover = crossover
        self.selection = selection

    def _operators(self):
        return {"selection": self.selection, "mutation": self.mutation, "crossover": self.crossover}

    def _evolve(self, rng, state, on_generation):
        cfg = self.config
        mu, lam = cfg.mu, cfg.lam
        pop = [Individual(self.initializer(rng)) for _ in range(mu)]
        state.evaluate_all(pop)
        if self.selection is not None:
            self.selection.init(cfg.max_generations or 0)
        if on_generation is not None and not state.stopped:
            on_generation(0, pop)
        while state.next_generation():
            if self.selection is not None:
                chosen = [0] * lam
                self.selection.select(rng, [ind.fitness for ind in pop], chosen)
            else:
                chosen = [rng.next_int(mu) for _ in range(lam)]
            kids = [pop[i].clone() for i in chosen]
            if self.crossover is not None and lam >= 2 and cfg.crossover_rate > 0:
                for k in range(0, lam - 1, 2):
                    if _chance(rng, cfg.crossover_rate):
                        a, b = kids[k], kids[k + 1]
                        self.crossover.cross(rng, a.genome, b.genome)
                        a.fitness = b.fitness = None
            if cfg.mutation_rate > 0:
                for kid in kids:
                    if _chance(rng, cfg.mutation_rate):
                        self.mutation.mutate(rng, kid.genome)
                        kid.fitness = None
            state.evaluate_all(kids)
            if state.stopped:
                return
            merged = pop + kids
            # Stable sort: incumbents precede offspring of equal fitness.
            order = sorted(range(len(merged)), key=lambda i: -merged[i].fitness)
            pop = [merged[i] for i in order[:mu]]
            if on_generation is not None:
                on_generation(state.generations, pop)


class OnePlusOneEA(_Engine):
    """(1 + 1) EA: mutate a copy each step and keep it unless it is worse (ties accepted)."""

    def __init__(self, problem, mutation, config=None, fitness=None, initializer=None) -> None:
        super().__init__(problem, fitness, config or EngineConfig(max_generations=1000), initializer)
        self.mutation = mutation

    def _operators(self):
        return {"mutation": self.mutation}

    def _evolve(self, rng, state, on_generation):
        x = Individual(self.initializer(rng))
        state.evaluate(x)
        if on_generation is not None and not state.stopped:
            on_generation(0, [x])
        while state.next_generation():
            y = x.clone()
            self.mutation.mutate(rng, y.genome)
            state.evaluate(y)
            if y.fitness >= x.fitness:
                x = y
            if state.stopped:
                return
            if on_generation is not None:
                on_generation(state.generations, [x])


def run_generational(cfg, problem, fitness, select, cross, mutate, rng, on_generation=None) -> RunResult:
    return GenerationalEA(problem, select, mutate, cross, cfg, fitness).run(rng, on_generation=on_generation)


def run_mutation_only_generational(cfg, problem, fitness, select, mutate, rng, on_generation=None) -> RunResult:
    return GenerationalEA(problem, select, mutate, None, cfg, fitness).run(rng, on_generation=on_generation)


def run_adaptive(cfg, problem, fitness, select, cross, mutate, rng, adaptive=None, on_generation=None) -> RunResult:
    engine = AdaptiveEA(problem, select, mutate, cross, cfg, fitness, adaptive=adaptive)
    return engine.run(rng, on_generation=on_generation)


def run_mu_plus_lambda(cfg, problem, fitness, mutate, rng, cross=None, select=None, on_generation=None) -> RunResult:
    return MuPlusLambdaEA(problem, mutate, cross, select, cfg, fitness).run(rng, on_generation=on_generation)


def run_mu_plus_one(cfg, problem, fitness, mutate, rng, select=None, on_generation=None) -> RunResult:
    cfg = EngineConfig(**{**cfg.__dict__, "lam": 1})
    return MuPlusLambdaEA(problem, mutate, None, select, cfg, fitness).run(rng, on_generation=on_generation)


def run_one_plus_one(problem, fitness, mutate, stopping: EngineConfig, rng, on_generation=None) -> RunResult:
    return OnePlusOneEA(problem, mutate, stopping, fitness).run(rng, on_generation=on_generation)


def _replicas(engine, replicas: int, rng):
    if replicas < 1:
        raise ValueError(f"need at least one replica, got {replicas}")
    master, seed = _stream(rng)
    streams = [master.split() for _ in range(replicas)]
    engines = [engine.split() for _ in range(replicas)]
    return engines, streams, seed


def _combine(results: list[RunResult], tracker: ProgressTracker, started: float, seed) -> RunResult:
    # Lowest replica index wins ties, so the result never depends on thread timing.
    best = min(results, key=lambda r: r.best.cost).best
    assert tracker.best is not None and tracker.best.cost <= best.cost
    return RunResult(
        best,
        sum(r.evaluations for r in results),
        sum(r.generations for r in results),
        time.perf_counter() - started,
        seed,
        tuple(results),
    )


def run_parallel(engine, replicas: int, rng: RandomStream | int, threads: int | None = None,
                 tracker: ProgressTracker | None = None) -> RunResult:
    """Run independent replicas of ``engine`` on worker threads.

    The master stream is split once per replica before any thread starts and
    every replica gets its own split copy of the engine, so the outcome is
    identical to :func:`run_sequential` with the same arguments. Replicas
    share only ``tracker``; the best is taken from the lowest-index replica
    that reached the best cost.
    """
    started = time.perf_counter()
    engines, streams, seed = _replicas(engine, replicas, rng)
    tracker = tracker or ProgressTracker()
    workers = threads or replicas
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda k: engines[k].run(streams[k], tracker), range(replicas)))
    return _combine(results, tracker, started, seed)


def run_sequential(engine, replicas: int, rng: RandomStream | int,
                   tracker: ProgressTracker | None = None) -> RunResult:
    """The replicas of :func:`run_parallel`, one after another on this thread."""
    started = time.perf_counter()
    engines, streams, seed = _replicas(engine, replicas, rng)
    tracker = tracker or ProgressTracker()
    results = [engines[k].run(streams[k], tracker) for k in range(replicas)]
    return _combine(results, tracker, started, seed)
