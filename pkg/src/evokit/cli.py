"""Command-line harness: single runs, benchmark sweeps and the operator catalog.

Operators are written as ``name`` or ``name:v1,v2``; several mutations or
crossovers joined with ``+`` are applied as a uniform hybrid.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from dataclasses import dataclass
from typing import Callable

from . import ops, problems, selection
from .core import InverseCostFitness, NegativeCostFitness, hybrid_crossover, hybrid_mutation
from .engines import (
    AdaptiveConfig,
    AdaptiveEA,
    EngineConfig,
    GenerationalEA,
    MuPlusLambdaEA,
    OnePlusOneEA,
    run_parallel,
)
from .representations import Permutation
from .rng import from_seed

ALL_VECTORS = frozenset({"bits", "ints", "reals"})
PERM = frozenset({"perm"})
ANY = frozenset({"bits", "ints", "reals", "perm"})


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Entry:
    """A named factory. ``params`` are (name, converter, default) triples;
    a default of ``None`` lets the factory pick one from the genome length."""

    name: str
    genomes: frozenset
    params: tuple
    build: Callable
    help: str = ""

    @property
    def syntax(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(p[0] for p in self.params)


def _entry(name, genomes, params, build, help=""):
    return name, Entry(name, genomes, tuple(params), build, help)


def _inv_n(value, n):
    return value if value is not None else 1.0 / n


SELECTIONS = dict([
    _entry("proportionate", ANY, [], lambda n: selection.FitnessProportionate(), "roulette wheel"),
    _entry("sus", ANY, [], lambda n: selection.StochasticUniversalSampling(), "stochastic universal sampling"),
    _entry("tournament", ANY, [("k", int, 2)], lambda n, k: selection.TournamentSelection(k)),
    _entry("truncation", ANY, [("k", int, 2)], lambda n, k: selection.TruncationSelection(k),
           "uniform among the k best"),
    _entry("linear-rank", ANY, [("eta", float, 1.5)], lambda n, eta: selection.LinearRankSelection(eta)),
    _entry("linear-rank-sus", ANY, [("eta", float, 1.5)],
           lambda n, eta: selection.LinearRankSelection(eta, sus=True)),
    _entry("exp-rank", ANY, [("c", float, 0.5)], lambda n, c: selection.ExponentialRankSelection(c)),
    _entry("exp-rank-sus", ANY, [("c", float, 0.5)], lambda n, c: selection.ExponentialRankSelection(c, sus=True)),
    _entry("boltzmann", ANY, [("t0", float, 1.0), ("tmin", float, None), ("schedule", str, "constant")],
           lambda n, t0, tmin, schedule: selection.BoltzmannSelection(t0, tmin, schedule)),
    _entry("boltzmann-sus", ANY, [("t0", float, 1.0), ("tmin", float, None), ("schedule", str, "constant")],
           lambda n, t0, tmin, schedule: selection.BoltzmannSelection(t0, tmin, schedule, sus=True)),
    _entry("random", ANY, [], lambda n: selection.RandomSelection()),
])

MUTATIONS = dict([
    _entry("bitflip", frozenset({"bits"}), [("m", float, None)], lambda n, m: ops.BitFlipMutation(_inv_n(m, n)),
           "flip each bit with probability m (default 1/n)"),
    _entry("gaussian", frozenset({"reals"}), [("sigma", float, 0.1)], lambda n, sigma: ops.GaussianMutation(sigma)),
    _entry("cauchy", frozenset({"reals"}), [("scale", float, 0.1)], lambda n, scale: ops.CauchyMutation(scale)),
    _entry("uniform", frozenset({"ints", "reals"}), [("w", float, 1.0)], lambda n, w: ops.UniformMutation(w)),
    _entry("randomchange", frozenset({"ints"}), [("m", float, None)],
           lambda n, m: ops.RandomValueChangeMutation(_inv_n(m, n))),
    _entry("swap", PERM, [], lambda n: ops.SwapMutation()),
    _entry("adjswap", PERM, [], lambda n: ops.AdjacentSwapMutation()),
    _entry("insertion", PERM, [], lambda n: ops.InsertionMutation()),
    _entry("reversal", PERM, [], lambda n: ops.ReversalMutation()),
    _entry("scramble", PERM, [], lambda n: ops.ScrambleMutation()),
    _entry("uscramble", PERM, [("u", float, 1 / 3)], lambda n, u: ops.UniformScrambleMutation(u)),
    _entry("cycle", PERM, [("kmax", int, 5)], lambda n, kmax: ops.CycleMutation(kmax)),
    _entry("threeopt", PERM, [], lambda n: ops.ThreeOptMutation()),
    _entry("blockmove", PERM, [], lambda n: ops.BlockMoveMutation()),
    _entry("blockswap", PERM, [], lambda n: ops.BlockSwapMutation()),
    _entry("windowed", PERM, [("base", str, "swap"), ("w", int, 2)],
           lambda n, base, w: ops.WindowLimitedMutation(base, w)),
])

CROSSOVERS = dict([
    _entry("onepoint", ALL_VECTORS, [], lambda n: ops.single_point_crossover()),
    _entry("twopoint", ALL_VECTORS, [], lambda n: ops.two_point_crossover()),
    _entry("kpoint", ALL_VECTORS, [("k", int, 3)], lambda n, k: ops.KPointCrossover(k)),
    _entry("uniformx", ALL_VECTORS, [("p", float, 0.5)], lambda n, p: ops.UniformCrossover(p)),
    _entry("cx", PERM, [], lambda n: ops.CycleCrossover()),
    _entry("pmx", PERM, [], lambda n: ops.PartiallyMatchedCrossover()),
    _entry("upmx", PERM, [("u", float, 1 / 3)], lambda n, u: ops.UniformPartiallyMatchedCrossover(u)),
    _entry("ox", PERM, [], lambda n: ops.OrderCrossover()),
    _entry("nwox", PERM, [], lambda n: ops.NonWrappingOrderCrossover()),
    _entry("ox2", PERM, [], lambda n: ops.OrderCrossoverTwo()),
    _entry("uobx", PERM, [], lambda n: ops.UniformOrderBasedCrossover()),
    _entry("pbx", PERM, [], lambda n: ops.PositionBasedCrossover()),
    _entry("er", PERM, [], lambda n: ops.EdgeRecombination()),
    _entry("eer", PERM, [], lambda n: ops.EnhancedEdgeRecombination()),
    _entry("ppx", PERM, [], lambda n: ops.PrecedencePreservativeCrossover()),
    _entry("uppx", PERM, [("u", float, 0.5)], lambda n, u: ops.UniformPrecedencePreservativeCrossover(u)),
])


def _instance(kind):
    def build(args, n):
        if args.instance:
            with open(args.instance, encoding="utf-8") as fh:
                inst = problems.instance_from_dict(json.load(fh))
            if not isinstance(inst, _INSTANCE_TYPES[kind]):
                raise ConfigError(f"instance file holds a {type(inst).__name__}, problem {kind!r} needs {kind}")
            return inst
        return problems.generate_instance(kind, n, from_seed(args.instance_seed), capacity=args.capacity)

    return build


_INSTANCE_TYPES = {"tsp": problems.TspInstance, "qap": problems.QapInstance, "binpacking": problems.BinPackingInstance}
_tsp, _qap, _bins = _instance("tsp"), _instance("qap"), _instance("binpacking")


def _haystack(args, n):
    return problems.PermutationInAHaystack(
        Permutation(from_seed(args.instance_seed).sample(range(n), n))
    )


# name -> (genome, default n, factory(args, n))
PROBLEMS = {
    "onemax": ("bits", 32, lambda a, n: problems.OneMax(n)),
    "twomax": ("bits", 32, lambda a, n: problems.TwoMax(n)),
    "trap": ("bits", 32, lambda a, n: problems.Trap(n)),
    "porcupine": ("bits", 32, lambda a, n: problems.Porcupine(n)),
    "plateaus": ("bits", 32, lambda a, n: problems.Plateaus(n)),
    "mix": ("bits", 40, lambda a, n: problems.Mix(n)),
    "royalroad": ("bits", 32, lambda a, n: problems.RoyalRoad(n, a.block_size, a.stepping_stones)),
    "sphere": ("reals", 10, lambda a, n: problems.Sphere(n)),
    "haystack": ("perm", 10, _haystack),
    "tsp": ("perm", 10, lambda a, n: problems.TravelingSalesperson(_tsp(a, n))),
    "qap": ("perm", 8, lambda a, n: problems.QuadraticAssignment(_qap(a, n))),
    "binpacking": ("perm", 20, lambda a, n: problems.BinPacking(_bins(a, n))),
}

ENGINES = {
    "generational": "generational EA with elitism (--pop-size, --crossover-rate, --mutation-rate, --elitism)",
    "mutation-only": "generational EA without crossover",
    "adaptive": "generational EA with self-adaptive rates (--sigma-rate)",
    "mu-plus-lambda": "(mu + lambda) EA (--mu, --lam)",
    "mu-plus-one": "(mu + 1) EA (--mu)",
    "oneplusone": "(1 + 1) EA",
}

DEFAULT_OPERATORS = {
    "bits": ("tournament:2", "uniformx:0.5", "bitflip"),
    "ints": ("tournament:2", "twopoint", "uniform:1"),
    "reals": ("tournament:2", "twopoint", "gaussian:0.1"),
    "perm": ("tournament:2", "ox", "swap"),
}


def parse_operator(text: str, table: dict, kind: str, genome: str, problem: str, n: int):
    """Build the operator named by ``text`` or raise :class:`ConfigError`."""
    name, _, raw = text.partition(":")
    entry = table.get(name)
    if entry is None:
        raise ConfigError(f"unknown {kind} {name!r}; choose from {', '.join(table)}")
    if genome not in entry.genomes:
        raise ConfigError(
            f"{kind} {name!r} works on {'/'.join(sorted(entry.genomes))} genomes "
            f"but problem {problem!r} uses {genome} genomes"
        )
    values = raw.split(",") if raw else []
    if len(values) > len(entry.params):
        raise ConfigError(f"{kind} {name!r} takes at most {len(entry.params)} parameter(s): {entry.syntax}")
    args = []
    for k, (pname, conv, default) in enumerate(entry.params):
        if k < len(values):
            try:
                args.append(conv(values[k]))
            except ValueError:
                raise ConfigError(f"bad value {values[k]!r} for {pname} of {kind} {name!r}") from None
        else:
            args.append(default)
    try:
        return entry.build(n, *args)
    except ValueError as exc:
        raise ConfigError(f"{kind} {text!r}: {exc}") from None


def _variation(text, table, kind, genome, problem, n, combine):
    parts = text.split("+")
    built = [parse_operator(p, table, kind, genome, problem, n) for p in parts]
    return built[0] if len(built) == 1 else combine(built)


def _fitness(spec: str, problem):
    name, _, raw = spec.partition(":")
    if name == "inverse" and not raw:
        return InverseCostFitness(problem)
    if name == "negative":
        try:
            return NegativeCostFitness(problem, float(raw) if raw else 0.0)
        except ValueError:
            raise ConfigError(f"bad offset in --fitness {spec!r}") from None
    raise ConfigError(f"unknown fitness transform {spec!r}; use inverse or negative[:offset]")


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("SALSA_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"SALSA_SEED must be an integer, got {env!r}") from None
    return random.SystemRandom().getrandbits(63)


def build(args):
    """Problem and engine for parsed ``run`` arguments; raises :class:`ConfigError`."""
    if args.problem not in PROBLEMS:
        raise ConfigError(f"unknown problem {args.problem!r}; choose from {', '.join(PROBLEMS)}")
    if args.algo not in ENGINES:
        raise ConfigError(f"unknown algorithm {args.algo!r}; choose from {', '.join(ENGINES)}")
    genome, default_n, factory = PROBLEMS[args.problem]
    n = args.n if args.n is not None else default_n
    if n < 1:
        raise ConfigError(f"--n must be positive, got {n}")
    try:
        problem = factory(args, n)
    except (ValueError, OSError) as exc:
        raise ConfigError(f"problem {args.problem!r}: {exc}") from None
    n = problem.n

    d_sel, d_cross, d_mut = DEFAULT_OPERATORS[genome]
    no_crossover = args.algo in ("mutation-only", "oneplusone", "mu-plus-one")
    if no_crossover and args.crossover:
        raise ConfigError(f"algorithm {args.algo!r} does not use crossover but --crossover {args.crossover!r} was given")
    mutation = _variation(args.mutation or d_mut, MUTATIONS, "mutation", genome, args.problem, n, hybrid_mutation)
    crossover = None
    if not no_crossover and not (args.algo == "mu-plus-lambda" and not args.crossover):
        crossover = _variation(args.crossover or d_cross, CROSSOVERS, "crossover", genome, args.problem, n,
                               hybrid_crossover)
    sel = None
    if args.algo not in ("oneplusone",) and (args.selection or args.algo not in ("mu-plus-lambda", "mu-plus-one")):
        sel = parse_operator(args.selection or d_sel, SELECTIONS, "selection", genome, args.problem, n)
        if args.sigma_scale is not None:
            sel = selection.SigmaScaled(sel, args.sigma_scale)
        if args.shift_fitness:
            sel = selection.FitnessShifted(sel)

    generations = args.generations
    if generations is None and args.max_evals is None:
        generations = 100
    config = EngineConfig(
        population_size=args.pop_size,
        crossover_rate=args.crossover_rate,
        mutation_rate=args.mutation_rate,
        elitism=args.elitism,
        max_generations=generations,
        max_evaluations=args.max_evals,
        target_cost=args.target_cost,
        mu=args.mu,
        lam=1 if args.algo == "mu-plus-one" else args.lam,
    )
    fitness = _fitness(args.fitness, problem)
    try:
        if args.algo in ("generational", "mutation-only"):
            engine = GenerationalEA(problem, sel, mutation, crossover, config, fitness)
        elif args.algo == "adaptive":
            engine = AdaptiveEA(problem, sel, mutation, crossover, config, fitness,
                                adaptive=AdaptiveConfig(sigma=args.sigma_rate))
            engine.adaptive.bounds(n)
        elif args.algo == "oneplusone":
            engine = OnePlusOneEA(problem, mutation, config, fitness)
        else:
            engine = MuPlusLambdaEA(problem, mutation, crossover, sel, config, fitness)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.replicas < 1:
        raise ConfigError(f"--replicas must be at least 1, got {args.replicas}")
    return problem, engine


def _operators_label(args) -> str:
    return ";".join(x or "-" for x in (args.selection, args.crossover, args.mutation))


def execute(args) -> dict:
    """Run one spec and return its result record."""
    _, engine = build(args)
    seed = resolve_seed(args.seed)
    if args.replicas == 1:
        result = engine.run(from_seed(seed))
    else:
        result = run_parallel(engine, args.replicas, from_seed(seed), args.threads)
    return {
        "problem": args.problem,
        "engine": args.algo,
        "seed": seed,
        "best_cost": result.best.cost,
        "evaluations": result.evaluations,
        "generations": result.generations,
        "elapsed_ms": round(result.elapsed * 1000, 3),
        "solution": str(result.best.solution),
        "contains_known_optimal": result.best.contains_known_optimal,
    }


RECORD_FIELDS = ("problem", "engine", "seed", "best_cost", "evaluations", "generations", "elapsed_ms",
                 "solution", "contains_known_optimal")
BENCH_FIELDS = ("problem", "algo", "operators", "seed", "best_cost", "evaluations", "generations", "elapsed_ms",
                "status")


def add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", required=True, help="problem id (see `list`)")
    p.add_argument("--n", type=int, help="problem size")
    p.add_argument("--algo", default="generational", help="engine id (see `list`)")
    p.add_argument("--pop-size", type=int, default=100)
    p.add_argument("--crossover-rate", type=float, default=1.0)
    p.add_argument("--mutation-rate", type=float, default=1.0)
    p.add_argument("--elitism", type=int, default=0)
    p.add_argument("--mu", type=int, default=10)
    p.add_argument("--lam", type=int, default=10)
    p.add_argument("--generations", type=int)
    p.add_argument("--max-evals", type=int)
    p.add_argument("--target-cost", type=float)
    p.add_argument("--selection", help="selection operator, e.g. tournament:3")
    p.add_argument("--crossover", help="crossover operator(s), e.g. pmx or ox+pmx")
    p.add_argument("--mutation", help="mutation operator(s), e.g. bitflip:0.05 or swap+insertion")
    p.add_argument("--sigma-scale", type=float, metavar="C", help="apply sigma scaling before selection")
    p.add_argument("--shift-fitness", action="store_true", help="shift fitnesses so the minimum is 1")
    p.add_argument("--sigma-rate", type=float, default=0.05, help="rate step size for the adaptive engine")
    p.add_argument("--fitness", default="inverse", help="inverse or negative[:offset]")
    p.add_argument("--seed", type=int, help="run seed (default: $SALSA_SEED, else random)")
    p.add_argument("--replicas", type=int, default=1, help="independent parallel populations")
    p.add_argument("--threads", type=int, help="worker threads for replicas")
    p.add_argument("--instance", help="JSON instance file for tsp, qap and binpacking")
    p.add_argument("--instance-seed", type=int, default=0, help="seed for generated instances and targets")
    p.add_argument("--capacity", type=int, default=100, help="bin capacity for generated bin packing")
    p.add_argument("--block-size", type=int, default=8, help="royal road block size")
    p.add_argument("--stepping-stones", action="store_true", help="royal road with doubling blocks")


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting, for parsing suite entries."""

    def error(self, message):
        raise _ArgError(message)


def _spec_argv(spec: dict) -> list[str]:
    argv = []
    for key, value in spec.items():
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif value is False or value is None:
            continue
        else:
            argv += [flag, str(value)]
    return argv


def cmd_run(args, out=None) -> int:
    out = out or sys.stdout
    try:
        record = execute(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        out.write(json.dumps(record) + "\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(RECORD_FIELDS)
        w.writerow([record[k] for k in RECORD_FIELDS])
    return 0


def load_suite(path: str) -> list[tuple[argparse.Namespace, list[int]]]:
    """Parse a suite file into (run arguments, seeds) pairs; raises :class:`ConfigError`."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read suite {path}: {exc}") from None
    if not isinstance(data, list):
        raise ConfigError("suite must be a JSON list of run specs")
    parser = _Parser(prog="suite", add_help=False)
    add_run_options(parser)
    cells = []
    for k, spec in enumerate(data):
        if not isinstance(spec, dict):
            raise ConfigError(f"suite entry {k} is not an object")
        spec = dict(spec)
        seeds = spec.pop("seeds", None)
        if "seed" in spec:
            seeds = [spec.pop("seed")] if seeds is None else seeds
        if not isinstance(seeds, list) or not all(isinstance(s, int) for s in seeds):
            raise ConfigError(f"suite entry {k} needs a list of integer seeds")
        try:
            ns = parser.parse_args(_spec_argv(spec))
        except _ArgError as exc:
            raise ConfigError(f"suite entry {k}: {exc}") from None
        cells.append((ns, seeds))
    return cells


def cmd_benchmark(args, out=None) -> int:
    out = out or sys.stdout
    try:
        cells = load_suite(args.suite)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    fh = open(args.output, "w", newline="", encoding="utf-8") if args.output else out
    failed = False
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BENCH_FIELDS)
        fh.flush()
        for ns, seeds in cells:
            for seed in seeds:
                ns.seed = seed
                row = {"problem": ns.problem, "algo": ns.algo, "operators": _operators_label(ns), "seed": seed}
                try:
                    rec = execute(ns)
                    row.update({k: rec[k] for k in ("best_cost", "evaluations", "generations", "elapsed_ms")})
                    row["status"] = "ok"
                except Exception as exc:  # one bad cell must not sink the sweep
                    failed = True
                    row["status"] = f"error: {exc}"
                w.writerow([row.get(k, "") for k in BENCH_FIELDS])
                fh.flush()
    finally:
        if fh is not out:
            fh.close()
    return 1 if failed else 0


def catalog() -> dict[str, list[tuple[str, str]]]:
    """Every CLI name, grouped by kind, as (syntax, description) pairs."""

    def rows(table):
        return [(e.syntax, f"[{'/'.join(sorted(e.genomes))}] {e.help}".rstrip()) for e in table.values()]

    return {
        "problems": [(name, f"[{g}] default n={dn}") for name, (g, dn, _) in PROBLEMS.items()],
        "engines": list(ENGINES.items()),
        "selection": rows(SELECTIONS),
        "crossover": rows(CROSSOVERS),
        "mutation": rows(MUTATIONS),
    }


def cmd_list(args=None, out=None) -> int:
    out = out or sys.stdout
    for section, items in catalog().items():
        out.write(f"{section}:\n")
        for syntax, desc in items:
            out.write(f"  {syntax:<32} {desc}\n")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evokit", description="Seeded evolutionary algorithm runs and sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one configuration and print its result record")
    add_run_options(run)
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.set_defaults(func=cmd_run)

    bench = sub.add_parser("benchmark", help="run every (spec, seed) cell of a JSON suite, writing CSV")
    bench.add_argument("suite", help="JSON list of run specs, each with a \"seeds\" list")
    bench.add_argument("-o", "--output", help="CSV file (default stdout)")
    bench.set_defaults(func=cmd_benchmark)

    lst = sub.add_parser("list", help="show problems, engines and operators")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
