"""Variation operators grouped by representation."""

from .bits import BitFlipMutation, KPointCrossover, UniformCrossover, single_point_crossover, two_point_crossover
from .perm_crossover import (
    CycleCrossover,
    EdgeRecombination,
    EnhancedEdgeRecombination,
    NonWrappingOrderCrossover,
    OrderCrossover,
    OrderCrossoverTwo,
    PartiallyMatchedCrossover,
    PositionBasedCrossover,
    PrecedencePreservativeCrossover,
    UniformOrderBasedCrossover,
    UniformPartiallyMatchedCrossover,
    UniformPrecedencePreservativeCrossover,
)
from .perm_mutation import (
    AdjacentSwapMutation,
    BlockMoveMutation,
    BlockSwapMutation,
    CycleMutation,
    InsertionMutation,
    ReversalMutation,
    ScrambleMutation,
    SwapMutation,
    ThreeOptMutation,
    UniformScrambleMutation,
    WindowLimitedMutation,
)
from .vectors import CauchyMutation, GaussianMutation, RandomValueChangeMutation, UniformMutation
