"""Benchmark problems."""

from .bits import (
    Mix,
    OneMax,
    Plateaus,
    Porcupine,
    RoyalRoad,
    Trap,
    TwoMax,
    mix_value,
    onemax_cost,
    plateaus_value,
    porcupine_value,
    trap_value,
    twomax_value,
)
from .permutation import (
    BinPacking,
    BinPackingInstance,
    PermutationInAHaystack,
    QapInstance,
    QuadraticAssignment,
    TravelingSalesperson,
    TspInstance,
    binpacking_cost,
    dumps_instance,
    exact_match_distance,
    generate_instance,
    haystack_cost,
    instance_from_dict,
    instance_to_dict,
    loads_instance,
    qap_cost,
    tsp_cost,
)
from .real import Sphere, sphere_cost
