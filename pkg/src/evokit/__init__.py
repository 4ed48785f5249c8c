"""Evolutionary computation toolkit: representations, operators, engines and benchmarks."""

from .core import (
    CrossoverOperator,
    FitnessFunction,
    InverseCostFitness,
    MutationOperator,
    NegativeCostFitness,
    Problem,
    ProgressTracker,
    SelectionOperator,
    SolutionCostPair,
    hybrid_crossover,
    hybrid_mutation,
)
from .engines import (
    AdaptiveConfig,
    AdaptiveEA,
    EngineConfig,
    GenerationalEA,
    MuPlusLambdaEA,
    OnePlusOneEA,
    RunResult,
    run_adaptive,
    run_generational,
    run_mu_plus_lambda,
    run_mu_plus_one,
    run_mutation_only_generational,
    run_one_plus_one,
    run_parallel,
    run_sequential,
)
from .representations import BitVector, IntegerVector, Permutation, RealVector
from .rng import RandomStream, from_seed, split

__version__ = "0.1.0"
