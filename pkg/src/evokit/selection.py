"""Selection schemes and fitness scaling.

Every scheme fills a caller-provided list of population indices. Fitness
values may be ints or floats; they are converted to float before any
weighting. Rank ties are broken by population index, as are tournament ties
(lowest index wins), so results depend only on the random stream.
"""

from __future__ import annotations

import math
from abc import abstractmethod
from statistics import fmean, pstdev
from typing import Sequence

from .core import SelectionOperator
from .rng import RandomStream, cumulative_weights, roulette_spin

SIGMA_FLOOR = 0.1


def sus_counts(weights: Sequence[float], m: int, start: float) -> list[int]:
    """Copies of each index chosen by ``m`` equally spaced pointers.

    ``start`` is the spin as a fraction of one pointer gap, in ``[0, 1)``.
    """
    cumulative = cumulative_weights(weights)
    return _sus_walk(cumulative, m, start)


def _sus_walk(cumulative: list[float], m: int, start: float) -> list[int]:
    total = cumulative[-1]
    step = total / m
    counts = [0] * len(cumulative)
    last = len(cumulative) - 1
    i = 0
    for k in range(m):
        pointer = (start + k) * step
        while i < last and pointer >= cumulative[i]:
            i += 1
        counts[i] += 1
    return counts


def _sus_fill(rng: RandomStream, cumulative: list[float], selected: list[int]) -> None:
    counts = _sus_walk(cumulative, len(selected), rng.random())
    k = 0
    for i, c in enumerate(counts):
        for _ in range(c):
            selected[k] = i
            k += 1
    rng.shuffle(selected)


def _roulette_fill(rng: RandomStream, cumulative: list[float], selected: list[int]) -> None:
    for k in range(len(selected)):
        selected[k] = roulette_spin(rng, cumulative)


def _require_positive(fitnesses: Sequence[float]) -> None:
    for f in fitnesses:
        if not f > 0:
            raise ValueError(f"selection requires positive fitness, got {f}; scale or shift first")


class FitnessProportionate(SelectionOperator):
    """Weighted roulette wheel. Every fitness must be positive."""

    def select(self, rng, fitnesses, selected):
        _require_positive(fitnesses)
        _roulette_fill(rng, cumulative_weights(fitnesses), selected)


class StochasticUniversalSampling(SelectionOperator):
    """One spin, ``len(selected)`` equally spaced pointers.

    Each index ``i`` is chosen either ``floor(e_i)`` or ``ceil(e_i)`` times,
    where ``e_i`` is its expected count. The result is shuffled afterwards so
    consecutive pairing is unbiased.
    """

    def select(self, rng, fitnesses, selected):
        _require_positive(fitnesses)
        _sus_fill(rng, cumulative_weights(fitnesses), selected)


class TournamentSelection(SelectionOperator):
    def __init__(self, k: int = 2) -> None:
        if k < 1:
            raise ValueError(f"tournament size must be at least 1, got {k}")
        self.k = k

    def select(self, rng, fitnesses, selected):
        n = len(fitnesses)
        k = self.k
        below = rng.next_int
        for slot in range(len(selected)):
            best = below(n)
            for _ in range(k - 1):
                j = below(n)
                if fitnesses[j] > fitnesses[best] or (fitnesses[j] == fitnesses[best] and j < best):
                    best = j
            selected[slot] = best


class TruncationSelection(SelectionOperator):
    """Uniform choice among the ``k`` fittest members."""

    def __init__(self, k: int) -> None:
        if k < 1:
            raise ValueError(f"k must be at least 1, got {k}")
        self.k = k

    def select(self, rng, fitnesses, selected):
        n = len(fitnesses)
        if self.k > n:
            raise ValueError(f"truncation k={self.k} exceeds population size {n}")
        top = sorted(range(n), key=lambda i: (-fitnesses[i], i))[: self.k]
        for slot in range(len(selected)):
            selected[slot] = top[rng.next_int(self.k)]


class RandomSelection(SelectionOperator):
    def select(self, rng, fitnesses, selected):
        n = len(fitnesses)
        for slot in range(len(selected)):
            selected[slot] = rng.next_int(n)


def _ascending_ranks(fitnesses: Sequence[float]) -> list[int]:
    """Population indices ordered worst to best; ties by index."""
    return sorted(range(len(fitnesses)), key=lambda i: (float(fitnesses[i]), i))


class WeightedSelection(SelectionOperator):
    """Base for schemes that turn fitness into weights.

    ``sus=False`` spins a roulette wheel per slot; ``sus=True`` uses the
    stochastic-universal-sampling pointer walk over the same weights.
    """

    def __init__(self, sus: bool = False) -> None:
        self.sus = sus

    @abstractmethod
    def weights(self, fitnesses: Sequence[float]) -> list[float]:
        ...

    def select(self, rng, fitnesses, selected):
        cumulative = cumulative_weights(self.weights(fitnesses))
        if self.sus:
            _sus_fill(rng, cumulative, selected)
        else:
            _roulette_fill(rng, cumulative, selected)


class LinearRankSelection(WeightedSelection):
    """Rank ``r`` (1 = worst) gets ``2 - eta + 2 (eta - 1) (r - 1) / (N - 1)``."""

    def __init__(self, eta: float = 1.5, sus: bool = False) -> None:
        if not 1.0 <= eta <= 2.0:
            raise ValueError(f"eta must lie in [1, 2], got {eta}")
        super().__init__(sus)
        self.eta = eta

    def weights(self, fitnesses):
        n = len(fitnesses)
        w = [0.0] * n
        if n == 1:
            w[0] = 1.0
            return w
        base = 2.0 - self.eta
        slope = 2.0 * (self.eta - 1.0) / (n - 1)
        for r, i in enumerate(_ascending_ranks(fitnesses)):
            w[i] = base + slope * r
        return w


class ExponentialRankSelection(WeightedSelection):
    """Rank ``r`` (1 = worst) gets ``c ** (N - r)``."""

    def __init__(self, c: float = 0.5, sus: bool = False) -> None:
        if not 0.0 < c < 1.0:
            raise ValueError(f"c must lie in (0, 1), got {c}")
        super().__init__(sus)
        self.c = c

    def weights(self, fitnesses):
        n = len(fitnesses)
        w = [0.0] * n
        for r, i in enumerate(_ascending_ranks(fitnesses)):
            w[i] = self.c ** (n - 1 - r)
        return w


SCHEDULES = ("constant", "linear", "exponential")


class BoltzmannSelection(WeightedSelection):
    """Weights ``exp(f / T)``.

    ``init(generations)`` starts the schedule; each ``select`` call then
    counts as one generation. The temperature moves from ``t_init`` to
    ``t_min`` over that many calls and stays at ``t_min`` afterwards. Without
    ``init`` the temperature stays at ``t_init``.
    """

    def __init__(
        self,
        t_init: float = 1.0,
        t_min: float | None = None,
        schedule: str = "constant",
        sus: bool = False,
    ) -> None:
        if t_min is None:
            t_min = t_init
        if t_init <= 0 or t_min <= 0:
            raise ValueError("temperatures must be positive")
        if schedule not in SCHEDULES:
            raise ValueError(f"unknown schedule {schedule!r}; expected one of {SCHEDULES}")
        super().__init__(sus)
        self.t_init = t_init
        self.t_min = t_min
        self.schedule = schedule
        self._generations = 0
        self._g = 0

    def init(self, generations: int) -> None:
        self._generations = max(0, generations)
        self._g = 0

    def temperature(self) -> float:
        g_max = self._generations
        if self.schedule == "constant" or g_max == 0:
            return self.t_init
        g = min(self._g, g_max)
        if self.schedule == "linear":
            return self.t_init - g * (self.t_init - self.t_min) / g_max
        return self.t_init * (self.t_min / self.t_init) ** (g / g_max)

    def weights(self, fitnesses):
        t = self.temperature()
        top = max(float(f) for f in fitnesses)
        # Shifting by the max keeps exp() in range without changing proportions.
        return [math.exp((float(f) - top) / t) for f in fitnesses]

    def select(self, rng, fitnesses, selected):
        super().select(rng, fitnesses, selected)
        self._g += 1


def sigma_scaling(fitnesses: Sequence[float], c: float = 2.0) -> list[float]:
    """``max(0.1, 1 + (f - mean) / (c * sigma))``; all ones when sigma is zero."""
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    mean = fmean(fitnesses)
    sigma = pstdev(fitnesses, mu=mean)
    if sigma == 0:
        return [1.0] * len(fitnesses)
    scale = c * sigma
    return [max(SIGMA_FLOOR, 1.0 + (f - mean) / scale) for f in fitnesses]


def shifted_fitness(fitnesses: Sequence[float]) -> list[float]:
    """Shift so the minimum becomes 1 when any value is non-positive."""
    low = min(fitnesses)
    if low > 0:
        return list(fitnesses)
    return [f - low + 1 for f in fitnesses]


class SigmaScaled(SelectionOperator):
    """Apply :func:`sigma_scaling` before delegating to ``base``."""

    def __init__(self, base: SelectionOperator, c: float = 2.0) -> None:
        if c <= 0:
            raise ValueError(f"c must be positive, got {c}")
        self.base = base
        self.c = c

    def init(self, generations):
        self.base.init(generations)

    def select(self, rng, fitnesses, selected):
        self.base.select(rng, sigma_scaling(fitnesses, self.c), selected)


class FitnessShifted(SelectionOperator):
    """Apply :func:`shifted_fitness` before delegating to ``base``."""

    def __init__(self, base: SelectionOperator) -> None:
        self.base = base

    def init(self, generations):
        self.base.init(generations)

    def select(self, rng, fitnesses, selected):
        self.base.select(rng, shifted_fitness(fitnesses), selected)
