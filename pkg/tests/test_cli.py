import csv
import io
import json
import subprocess
import sys

import pytest

from evokit import cli
from evokit.problems import PermutationInAHaystack, dumps_instance, generate_instance
from evokit.rng import from_seed


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def record(capsys, *argv):
    code, out, err = run_cli(capsys, "run", *argv)
    assert code == 0, err
    return json.loads(out)


def strip_elapsed(rec):
    return {k: v for k, v in rec.items() if k != "elapsed_ms"}


ONEMAX = ("--problem", "onemax", "--n", "32", "--algo", "oneplusone", "--mutation", "bitflip:0.03125",
          "--max-evals", "50000", "--seed", "7")


def test_run_is_deterministic(capsys):
    a = record(capsys, *ONEMAX)
    b = record(capsys, *ONEMAX)
    assert strip_elapsed(a) == strip_elapsed(b)
    assert set(a) == set(cli.RECORD_FIELDS)
    assert a["seed"] == 7 and a["best_cost"] == 0 and a["evaluations"] == 50000


def test_run_csv_format(capsys):
    code, out, _ = run_cli(capsys, "run", *ONEMAX, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == list(cli.RECORD_FIELDS) and len(rows) == 2
    assert rows[1][0] == "onemax"


def test_perm_crossover_on_bits_is_config_error(capsys):
    code, out, err = run_cli(capsys, "run", "--problem", "onemax", "--crossover", "pmx", "--seed", "1")
    assert code == 2 and out == ""
    assert "pmx" in err and "perm" in err and "bits" in err


@pytest.mark.parametrize("argv", [
    ("--problem", "nosuch"),
    ("--problem", "onemax", "--algo", "annealing"),
    ("--problem", "onemax", "--mutation", "bitflip:x"),
    ("--problem", "onemax", "--selection", "tournament:0"),
    ("--problem", "onemax", "--elitism", "500"),
    ("--problem", "onemax", "--algo", "oneplusone", "--crossover", "uniformx"),
    ("--problem", "tsp", "--mutation", "gaussian:0.1"),
    ("--problem", "onemax", "--replicas", "0"),
    ("--problem", "onemax", "--fitness", "cubic"),
])
def test_config_errors_exit_2(capsys, argv):
    code, out, err = run_cli(capsys, "run", *argv, "--seed", "1", "--generations", "1")
    assert code == 2 and out == "" and err.startswith("error:")


def test_haystack_reaches_target(capsys):
    rec = record(capsys, "--problem", "haystack", "--n", "10", "--algo", "generational", "--pop-size", "50",
                 "--elitism", "2", "--mutation", "swap", "--crossover", "ox", "--max-evals", "200000",
                 "--target-cost", "0", "--seed", "3")
    assert rec["best_cost"] == 0 and rec["contains_known_optimal"] is True
    assert rec["evaluations"] < 200000
    # the reported solution is the hidden target drawn from the instance seed
    target = cli._haystack(cli.make_parser().parse_args(["run", "--problem", "haystack"]), 10)
    assert isinstance(target, PermutationInAHaystack)
    assert rec["solution"] == " ".join(map(str, target.target))


def test_every_problem_runs_with_defaults(capsys):
    for name in cli.PROBLEMS:
        rec = record(capsys, "--problem", name, "--generations", "3", "--pop-size", "8", "--seed", "5")
        assert rec["problem"] == name and rec["generations"] == 3


@pytest.mark.parametrize("algo", list(cli.ENGINES))
def test_every_engine_runs(capsys, algo):
    rec = record(capsys, "--problem", "onemax", "--algo", algo, "--generations", "5", "--pop-size", "10",
                 "--mu", "4", "--lam", "4", "--seed", "6")
    assert rec["engine"] == algo


def test_replicas_threads_do_not_change_result(capsys):
    base = ("--problem", "tsp", "--n", "9", "--generations", "20", "--pop-size", "20", "--replicas", "3",
            "--seed", "8")
    a = record(capsys, *base, "--threads", "1")
    b = record(capsys, *base, "--threads", "3")
    assert strip_elapsed(a) == strip_elapsed(b)
    assert a["generations"] == 60


def test_instance_file(capsys, tmp_path):
    inst = generate_instance("qap", 6, from_seed(4))
    path = tmp_path / "qap.json"
    path.write_text(dumps_instance(inst))
    rec = record(capsys, "--problem", "qap", "--instance", str(path), "--generations", "5", "--seed", "2")
    assert len(rec["solution"].split()) == 6
    code, _, err = run_cli(capsys, "run", "--problem", "tsp", "--instance", str(path), "--seed", "1")
    assert code == 2


def test_hybrid_and_scaled_selection(capsys):
    rec = record(capsys, "--problem", "tsp", "--n", "10", "--mutation", "swap+reversal", "--crossover", "ox+pmx",
                 "--selection", "proportionate", "--sigma-scale", "2", "--fitness", "negative",
                 "--generations", "5", "--seed", "9")
    assert rec["generations"] == 5


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("SALSA_SEED", "1234")
    rec = record(capsys, "--problem", "onemax", "--generations", "2", "--pop-size", "4")
    assert rec["seed"] == 1234
    monkeypatch.delenv("SALSA_SEED")
    assert 0 <= cli.resolve_seed(None) < 2**63


def write_suite(tmp_path, specs):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps(specs))
    return str(path)


SUITE = [
    {"problem": "onemax", "n": 20, "algo": "generational", "pop_size": 10, "generations": 10,
     "mutation": "bitflip:0.05", "seeds": [1, 2, 3]},
    {"problem": "tsp", "n": 8, "algo": "mu-plus-lambda", "generations": 10, "seeds": [4, 5, 6]},
]


def bench(capsys, tmp_path, specs, name="out.csv"):
    out = tmp_path / name
    code, _, err = run_cli(capsys, "benchmark", write_suite(tmp_path, specs), "-o", str(out))
    return code, list(csv.reader(out.open())) if out.exists() else None, err


def test_benchmark_rows_and_determinism(capsys, tmp_path):
    code, rows, _ = bench(capsys, tmp_path, SUITE)
    assert code == 0 and rows[0] == list(cli.BENCH_FIELDS) and len(rows) == 7
    assert [r[3] for r in rows[1:]] == ["1", "2", "3", "4", "5", "6"]
    assert rows[1][2] == "-;-;bitflip:0.05"
    assert all(r[-1] == "ok" for r in rows[1:])
    _, again, _ = bench(capsys, tmp_path, SUITE, "again.csv")
    cols = [4, 5, 6]
    assert [[r[c] for c in cols] for r in rows] == [[r[c] for c in cols] for r in again]


def test_benchmark_to_stdout(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "benchmark", write_suite(tmp_path, SUITE[:1]))
    assert code == 0 and len(out.strip().splitlines()) == 4


def test_benchmark_empty_suite(capsys, tmp_path):
    code, rows, _ = bench(capsys, tmp_path, [])
    assert code == 0 and rows == [list(cli.BENCH_FIELDS)]


@pytest.mark.parametrize("content", ["{not json", json.dumps({"problem": "onemax"}),
                                     json.dumps([{"problem": "onemax"}]),
                                     json.dumps([{"problem": "onemax", "seeds": [1], "bogus_flag": 3}])])
def test_benchmark_unparseable_suite(capsys, tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, _, err = run_cli(capsys, "benchmark", str(path))
    assert code == 2 and "error" in err


def test_benchmark_failing_cell(capsys, tmp_path):
    specs = [SUITE[0], {"problem": "onemax", "crossover": "pmx", "generations": 2, "seeds": [1]}]
    code, rows, _ = bench(capsys, tmp_path, specs)
    assert code == 1 and len(rows) == 5
    assert rows[-1][-1].startswith("error:") and rows[1][-1] == "ok"


def test_list_covers_registry(capsys):
    code, out, _ = run_cli(capsys, "list")
    assert code == 0
    cat = cli.catalog()
    for section, table in (("problems", cli.PROBLEMS), ("engines", cli.ENGINES), ("selection", cli.SELECTIONS),
                           ("crossover", cli.CROSSOVERS), ("mutation", cli.MUTATIONS)):
        names = [syntax.split(":")[0] for syntax, _ in cat[section]]
        assert len(names) == len(set(names)) == len(table)
        for name in table:
            assert f"  {name}" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "evokit", "list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "onemax" in proc.stdout
