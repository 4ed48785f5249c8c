"""End-to-end acceptance checks, one test per criterion.

``conftest.py`` prints a PASS/FAIL line per criterion after the run.
"""

import io
import itertools
import json
import math
import time

import pytest

from evokit import cli
from evokit.engines import (
    AdaptiveConfig,
    EngineConfig,
    GenerationalEA,
    MuPlusLambdaEA,
    OnePlusOneEA,
    run_adaptive,
    run_generational,
    run_parallel,
    run_sequential,
)
from evokit.ops import (
    AdjacentSwapMutation,
    BitFlipMutation,
    BlockMoveMutation,
    BlockSwapMutation,
    CycleCrossover,
    CycleMutation,
    EdgeRecombination,
    EnhancedEdgeRecombination,
    InsertionMutation,
    KPointCrossover,
    NonWrappingOrderCrossover,
    OrderCrossover,
    OrderCrossoverTwo,
    PartiallyMatchedCrossover,
    PositionBasedCrossover,
    PrecedencePreservativeCrossover,
    ReversalMutation,
    ScrambleMutation,
    SwapMutation,
    ThreeOptMutation,
    UniformCrossover,
    UniformOrderBasedCrossover,
    UniformPartiallyMatchedCrossover,
    UniformPrecedencePreservativeCrossover,
    UniformScrambleMutation,
    WindowLimitedMutation,
)
from evokit.ops.perm_mutation import WINDOW_BASES
from evokit.problems import OneMax, QuadraticAssignment, TravelingSalesperson, generate_instance
from evokit.representations import (
    Permutation,
    is_valid_permutation,
    random_bitvector,
    random_integer_vector,
    random_permutation,
    random_real_vector,
)
from evokit.rng import from_seed
from evokit.selection import (
    BoltzmannSelection,
    ExponentialRankSelection,
    FitnessProportionate,
    LinearRankSelection,
    StochasticUniversalSampling,
    TournamentSelection,
)

PERM_CROSSOVERS = {
    "cx": CycleCrossover, "pmx": PartiallyMatchedCrossover, "upmx": UniformPartiallyMatchedCrossover,
    "ox": OrderCrossover, "nwox": NonWrappingOrderCrossover, "ox2": OrderCrossoverTwo,
    "uobx": UniformOrderBasedCrossover, "pbx": PositionBasedCrossover, "er": EdgeRecombination,
    "eer": EnhancedEdgeRecombination, "ppx": PrecedencePreservativeCrossover,
    "uppx": UniformPrecedencePreservativeCrossover,
}
PERM_MUTATIONS = {
    "swap": SwapMutation, "adjswap": AdjacentSwapMutation, "insertion": InsertionMutation,
    "reversal": ReversalMutation, "scramble": ScrambleMutation, "uscramble": UniformScrambleMutation,
    "cycle": CycleMutation, "threeopt": ThreeOptMutation, "blockmove": BlockMoveMutation,
    "blockswap": BlockSwapMutation, "windowed": WindowLimitedMutation,
}
SIZES = (1, 2, 3, 5, 8, 16, 64)
APPLICATIONS = 10**4


def test_criterion_01_permutation_closure():
    assert len(PERM_CROSSOVERS) + len(PERM_MUTATIONS) == 23
    rng = from_seed(101)
    failures = 0
    started = time.perf_counter()
    for n in SIZES:
        for name, make in PERM_MUTATIONS.items():
            # the windowed operator cycles through its base operators across sizes
            op = WindowLimitedMutation(WINDOW_BASES[SIZES.index(n) % len(WINDOW_BASES)], 3) \
                if name == "windowed" else make()
            p = random_permutation(rng, n)
            for _ in range(APPLICATIONS):
                op.mutate(rng, p)
                failures += not is_valid_permutation(p._a)
        for make in PERM_CROSSOVERS.values():
            op = make()
            a, b = random_permutation(rng, n), random_permutation(rng, n)
            for _ in range(APPLICATIONS):
                op.cross(rng, a, b)
                failures += (not is_valid_permutation(a._a)) + (not is_valid_permutation(b._a))
    elapsed = time.perf_counter() - started
    print(f"closure: {failures} invalid genomes, {elapsed:.1f} s")
    assert failures == 0
    assert elapsed < 60


def frequencies(op, f, draws=10**5, seed=202):
    out = [0] * draws
    op.select(from_seed(seed), f, out)
    return [out.count(i) / draws for i in range(len(f))]


def tournament_exact(f, k):
    n = len(f)
    wins = [0] * n
    for entrants in itertools.product(range(n), repeat=k):
        wins[max(entrants, key=lambda i: (f[i], -i))] += 1
    return [w / n**k for w in wins]


def normalise(w):
    total = math.fsum(w)
    return [x / total for x in w]


def rank_weights(f, per_rank):
    """Weight each member by a function of its rank (0 = worst)."""
    order = sorted(range(len(f)), key=lambda i: f[i])
    w = [0.0] * len(f)
    for r, i in enumerate(order):
        w[i] = per_rank(r, len(f))
    return w


def linear_rank_weight(eta):
    return lambda r, n: 1.0 if n == 1 else (2 - eta) + 2 * (eta - 1) * r / (n - 1)


def exp_rank_weight(c):
    return lambda r, n: c ** (n - 1 - r)


def floor_ceil_ok(counts, weights, m):
    total = math.fsum(weights)
    return sum(counts) == m and all(
        math.floor(m * w / total + 1e-9) <= c <= math.ceil(m * w / total - 1e-9) for c, w in zip(counts, weights))


def test_criterion_02_selection_distributions():
    f = [1.0, 2.0, 3.0]
    expected = {
        "proportionate": (FitnessProportionate(), normalise(f)),
        "tournament(2)": (TournamentSelection(2), tournament_exact(f, 2)),
        "linear_rank(1.5)": (LinearRankSelection(1.5), normalise(rank_weights(f, linear_rank_weight(1.5)))),
        "exp_rank(0.5)": (ExponentialRankSelection(0.5), normalise(rank_weights(f, exp_rank_weight(0.5)))),
        "boltzmann(T=1)": (BoltzmannSelection(1.0), normalise([math.exp(x) for x in f])),
    }
    worst = {}
    for name, (op, want) in expected.items():
        got = frequencies(op, f)
        worst[name] = max(abs(a - b) for a, b in zip(got, want))
    print("max frequency error:", {k: round(v, 4) for k, v in worst.items()})

    rng = from_seed(203)
    sus_schemes = [
        ("sus", StochasticUniversalSampling(), lambda f: f),
        ("linear-rank-sus", LinearRankSelection(1.5, sus=True), lambda f: rank_weights(f, linear_rank_weight(1.5))),
        ("exp-rank-sus", ExponentialRankSelection(0.5, sus=True), lambda f: rank_weights(f, exp_rank_weight(0.5))),
        ("boltzmann-sus", BoltzmannSelection(1.0, sus=True), lambda f: [math.exp(x) for x in f]),
    ]
    sus_failures = {name: 0 for name, _, _ in sus_schemes}
    for _ in range(1000):
        n = 1 + rng.next_int(12)
        weights = [rng.uniform(0.01, 5.0) for _ in range(n)]
        m = 1 + rng.next_int(40)
        for name, op, oracle in sus_schemes:
            out = [0] * m
            op.select(rng, weights, out)
            sus_failures[name] += not floor_ceil_ok([out.count(i) for i in range(n)], oracle(weights), m)
    print("integer-part guarantee failures:", sus_failures)
    assert all(err <= 0.01 for err in worst.values())
    assert not any(sus_failures.values())


def test_criterion_03_crossover_conservation():
    rng = from_seed(303)
    ops = [KPointCrossover(1), KPointCrossover(2), KPointCrossover(3), UniformCrossover(0.5), UniformCrossover(0.2)]
    makers = [
        lambda n: random_bitvector(rng, n),
        lambda n: random_integer_vector(rng, n, -50, 50),
        lambda n: random_real_vector(rng, n, -10.0, 10.0),
    ]
    failures = 0
    for trial in range(10**4):
        make = makers[trial % 3]
        op = ops[trial % len(ops)]
        n = 4 + rng.next_int(60)
        a, b = make(n), make(n)
        p1, p2 = list(a), list(b)
        op.cross(rng, a, b)
        c1, c2 = list(a), list(b)
        failures += any(sorted((x, y)) != sorted((u, v)) for x, y, u, v in zip(c1, c2, p1, p2))
    assert failures == 0


FIXPOINT = ("cx", "pmx", "upmx", "ox", "nwox", "ox2", "uobx", "pbx", "ppx", "uppx")


def test_criterion_04_identical_parent_fixpoint():
    rng = from_seed(404)
    failures = {}
    for name in FIXPOINT:
        op = PERM_CROSSOVERS[name]()
        bad = 0
        for _ in range(1000):
            p = random_permutation(rng, 1 + rng.next_int(30))
            c1, c2 = p.copy(), p.copy()
            op.cross(rng, c1, c2)
            bad += c1 != p or c2 != p
        failures[name] = bad
    assert not any(failures.values()), failures


def test_criterion_05_one_plus_one_onemax():
    n = 64
    budget = math.floor(20 * n * math.log(n))
    started = time.perf_counter()
    hits = 0
    for seed in range(100):
        cfg = EngineConfig(max_evaluations=budget, target_cost=0)
        r = OnePlusOneEA(OneMax(n), BitFlipMutation(1 / n), cfg).run(seed)
        hits += r.best_cost == 0
    elapsed = time.perf_counter() - started
    print(f"(1+1) EA: {hits}/100 within {budget} evaluations, {elapsed:.1f} s")
    assert hits >= 95
    assert elapsed < 10


def ga_config(elitism):
    return EngineConfig(population_size=100, crossover_rate=1.0, mutation_rate=1.0, elitism=elitism,
                        max_generations=300, target_cost=0)


def run_ga(seed, elitism, on_generation=None):
    n = 50
    return run_generational(ga_config(elitism), OneMax(n), None, TournamentSelection(2), UniformCrossover(0.5),
                            BitFlipMutation(1 / n), from_seed(seed), on_generation)


def test_criterion_06_generational_ga_onemax():
    hits = sum(run_ga(seed, 0).best_cost == 0 for seed in range(100))
    violations = 0
    for seed in range(100):
        best = []
        run_ga(seed, 1, lambda g, pop: best.append(max(ind.fitness for ind in pop)))
        violations += any(a > b for a, b in zip(best, best[1:]))
    print(f"GA: {hits}/100 reached cost 0; {violations} elitist runs lost fitness")
    assert hits >= 90
    assert violations == 0


def brute_tsp(coords, tour):
    return math.fsum(math.dist(coords[tour[k]], coords[tour[(k + 1) % len(tour)]]) for k in range(len(tour)))


def brute_qap(flow, dist, p):
    return sum(flow[i][j] * dist[p[i]][p[j]] for i in range(len(p)) for j in range(len(p)))


def tsp_optimum(coords):
    # fixing city 0 first loses nothing: every tour has a rotation starting there
    rest = range(1, len(coords))
    return min(brute_tsp(coords, (0,) + q) for q in itertools.permutations(rest))


def qap_optimum(inst):
    return min(brute_qap(inst.flow, inst.distance, q) for q in itertools.permutations(range(inst.n)))


def tiny_ea(problem, crossover, mutation, target, seed):
    cfg = EngineConfig(population_size=60, elitism=2, max_evaluations=10**5, target_cost=target)
    engine = GenerationalEA(problem, TournamentSelection(3), mutation, crossover, cfg)
    return engine.run(seed)


def test_criterion_07_tiny_instance_optima():
    mismatches = 0
    tsp_hits = qap_hits = 0
    for seed in range(100):
        rng = from_seed(7000 + seed)
        tsp = generate_instance("tsp", 8, rng)
        qap = generate_instance("qap", 7, rng)
        tsp_p, qap_p = TravelingSalesperson(tsp), QuadraticAssignment(qap)
        for _ in range(100):
            q = random_permutation(rng, 8)
            mismatches += tsp_p.cost(q) != brute_tsp(tsp.coords, q.to_list())
            q = random_permutation(rng, 7)
            mismatches += qap_p.cost(q) != brute_qap(qap.flow, qap.distance, q.to_list())
        best_tour = tsp_optimum(tsp.coords)
        best_qap = qap_optimum(qap)
        r = tiny_ea(tsp_p, OrderCrossover(), ReversalMutation(), best_tour, seed)
        tsp_hits += r.best_cost == best_tour
        r = tiny_ea(qap_p, PartiallyMatchedCrossover(), SwapMutation(), best_qap, seed)
        qap_hits += r.best_cost == best_qap
    print(f"tiny optima: TSP {tsp_hits}/100, QAP {qap_hits}/100, {mismatches} evaluator mismatches")
    assert mismatches == 0
    assert tsp_hits >= 95 and qap_hits >= 95


def parallel_configs():
    for k in range(20):
        rng = from_seed(800 + k)
        cfg = EngineConfig(population_size=20, elitism=k % 3, max_generations=15 + k)
        if k % 4 == 0:
            p = TravelingSalesperson(generate_instance("tsp", 10, rng))
            yield GenerationalEA(p, TournamentSelection(2), ReversalMutation(), OrderCrossover(), cfg)
        elif k % 4 == 1:
            p = QuadraticAssignment(generate_instance("qap", 8, rng))
            yield MuPlusLambdaEA(p, SwapMutation(), PartiallyMatchedCrossover(), None,
                                 EngineConfig(max_generations=40, mu=6, lam=6))
        elif k % 4 == 2:
            yield OnePlusOneEA(OneMax(48), BitFlipMutation(1 / 48), EngineConfig(max_evaluations=300 + 10 * k))
        else:
            yield GenerationalEA(OneMax(40), BoltzmannSelection(2.0, 0.1, "exponential"), BitFlipMutation(0.03),
                                 UniformCrossover(), cfg)


def fingerprint(result):
    return repr([(r.best.cost, str(r.best.solution), r.evaluations, r.generations) for r in result.replicas] +
                [result.best.cost, str(result.best.solution), result.evaluations, result.generations])


def test_criterion_08_parallel_determinism():
    mismatches = 0
    for k, engine in enumerate(parallel_configs()):
        par = run_parallel(engine, 4, 900 + k)
        seq = run_sequential(engine, 4, 900 + k)
        again = run_parallel(engine, 4, 900 + k, threads=2)
        mismatches += (par.best.cost, par.best.solution) != (seq.best.cost, seq.best.solution)
        mismatches += fingerprint(par) != fingerprint(again) or fingerprint(par) != fingerprint(seq)
    assert mismatches == 0


def cli_record(argv):
    out = io.StringIO()
    args = cli.make_parser().parse_args(["run", *argv])
    assert cli.cmd_run(args, out) == 0
    rec = json.loads(out.getvalue())
    rec.pop("elapsed_ms")
    return json.dumps(rec, sort_keys=True).encode()


def test_criterion_09_cli_reproducibility():
    problems = [syntax for syntax, _ in cli.catalog()["problems"]]
    assert problems
    differing = []
    for name in problems:
        for extra in ([], ["--replicas", "3", "--threads", "3"]):
            argv = ["--problem", name, "--pop-size", "20", "--generations", "10", "--seed", "99", *extra]
            if cli_record(argv) != cli_record(argv):
                differing.append((name, extra))
    assert not differing


def test_criterion_10_adaptive_sanity():
    p = OneMax(40)
    cfg = EngineConfig(population_size=30, crossover_rate=0.8, mutation_rate=0.4, elitism=1, max_generations=60)
    logs = ([], [])
    results = []
    runs = (
        lambda cb: run_adaptive(cfg, p, None, TournamentSelection(2), UniformCrossover(), BitFlipMutation(0.02),
                                from_seed(1010), AdaptiveConfig(sigma=0.0, initial_rates=(0.4, 0.8)), cb),
        lambda cb: run_generational(cfg, p, None, TournamentSelection(2), UniformCrossover(),
                                    BitFlipMutation(0.02), from_seed(1010), cb),
    )
    for log, run in zip(logs, runs):
        results.append(run(lambda g, pop, log=log: log.append([str(ind.genome) for ind in pop])))
    assert logs[0] == logs[1]
    assert results[0].evaluations == results[1].evaluations

    out_of_bounds = 0
    bounds = AdaptiveConfig().bounds(40)

    def check(g, pop):
        nonlocal out_of_bounds
        m_lo, m_hi, c_lo, c_hi = bounds
        out_of_bounds += sum(not (m_lo <= ind.mutation_rate <= m_hi and c_lo <= ind.crossover_rate <= c_hi)
                             for ind in pop)

    long_cfg = EngineConfig(population_size=20, max_generations=1000)
    r = run_adaptive(long_cfg, p, None, TournamentSelection(2), UniformCrossover(), BitFlipMutation(0.02),
                     from_seed(1011), AdaptiveConfig(sigma=0.05), check)
    assert r.generations == 1000
    assert out_of_bounds == 0
