"""Real-valued function optimisation."""

from __future__ import annotations

from ..core import Problem
from ..representations import RealVector, random_real_vector


class Sphere(Problem[RealVector]):
    """Sum of squares; minimum 0 at the origin."""

    genome = "reals"
    min_cost = 0.0

    def __init__(self, n: int, lo: float = -5.12, hi: float = 5.12) -> None:
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        self.n = n
        self.lo = lo
        self.hi = hi

    def cost(self, candidate):
        return sum(x * x for x in candidate._v)

    def random_solution(self, rng):
        return random_real_vector(rng, self.n, self.lo, self.hi)


def sphere_cost(v: RealVector) -> float:
    return sum(x * x for x in v)
