"""Mutation for real and integer vectors.

Gaussian, Cauchy and uniform mutation perturb every component on each call.
For a per-component rate, wrap them in a hybrid with a no-op or apply them
at the engine level. Bounded vectors are clamped back into their bounds.
"""

from __future__ import annotations

from ..core import MutationOperator
from ..representations import IntegerVector, RealVector


def _clamp(v, lo, hi) -> None:
    for i, x in enumerate(v):
        if x < lo:
            v[i] = lo
        elif x > hi:
            v[i] = hi


class GaussianMutation(MutationOperator[RealVector]):
    def __init__(self, sigma: float) -> None:
        if not sigma > 0:
            raise ValueError(f"sigma must be positive, got {sigma}")
        self.sigma = sigma

    def mutate(self, rng, c):
        v = c._v
        gauss = rng.gauss
        for i in range(len(v)):
            v[i] += gauss(0.0, self.sigma)
        if c.lo is not None:
            _clamp(v, c.lo, c.hi)


class CauchyMutation(MutationOperator[RealVector]):
    def __init__(self, scale: float) -> None:
        if not scale > 0:
            raise ValueError(f"scale must be positive, got {scale}")
        self.scale = scale

    def mutate(self, rng, c):
        v = c._v
        for i in range(len(v)):
            v[i] += rng.next_cauchy(self.scale)
        if c.lo is not None:
            _clamp(v, c.lo, c.hi)


class UniformMutation(MutationOperator):
    """Add ``U[-w, w]`` to each component.

    On an :class:`IntegerVector` the delta is a uniform integer in
    ``[-w, w]`` (``w`` is truncated to an int and must stay at least 1).
    """

    def __init__(self, w: float) -> None:
        if not w > 0:
            raise ValueError(f"w must be positive, got {w}")
        self.w = w

    def mutate(self, rng, c):
        v = c._v
        if isinstance(c, IntegerVector):
            w = int(self.w)
            if w < 1:
                raise ValueError(f"integer uniform mutation needs w >= 1, got {self.w}")
            span = 2 * w + 1
            for i in range(len(v)):
                v[i] += rng.next_int(span) - w
        else:
            w = self.w
            for i in range(len(v)):
                v[i] += rng.uniform(-w, w)
        if c.lo is not None:
            _clamp(v, c.lo, c.hi)


class RandomValueChangeMutation(MutationOperator[IntegerVector]):
    """With probability ``m`` per component, replace it with a different value.

    The replacement is uniform over the vector's domain minus the current
    value, so the vector must carry a domain with at least two values.
    """

    def __init__(self, m: float) -> None:
        if not 0.0 < m <= 1.0:
            raise ValueError(f"m must lie in (0, 1], got {m}")
        self.m = m

    def mutate(self, rng, c):
        if c.lo is None:
            raise ValueError("random value change needs a vector with a domain")
        lo, hi = c.lo, c.hi
        if hi == lo:
            raise ValueError(f"domain [{lo}, {hi}] has no alternative values")
        v = c._v
        others = hi - lo
        for i in rng.bernoulli_indices(len(v), self.m):
            x = lo + rng.next_int(others)
            if x >= v[i]:
                x += 1
            v[i] = x
