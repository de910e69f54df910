from __future__ import annotations

import json
import subprocess
import sys

import pytest

from vecpart import io
from vecpart.cli import main
from vecpart.generate import gen_random_instance
from vecpart.model import TypeInstance, VectorInstance, partition_cost
from vecpart.objectives import CompletelySeparable, General, MaxColumnL1, Quadratic
from vecpart.shapes import Interval
from vecpart.solvers import auto_candidates, ineligibility


def _write(tmp_path, inst, name="inst.txt"):
    path = tmp_path / name
    io.write_instance(path, inst)
    return str(path)


def _solution(path):
    return io.parse_solution(open(path).read())[0]


def test_auto_picks_flow_for_convex_type_instances(tmp_path):
    inst = TypeInstance((3, 2), 2, Interval((1, 1), (4, 4)), CompletelySeparable(((Quadratic(1), Quadratic(0)),) * 2))
    out = tmp_path / "sol.txt"
    assert main(["solve", _write(tmp_path, inst), "--out", str(out)]) == 0
    sol = _solution(out)
    assert sol.solver == "flow" and partition_cost(inst, sol.assignment) == sol.value


def test_flow_on_vector_general_is_an_error(tmp_path, capsys):
    inst = VectorInstance(((1, 2),), 2, Interval((0, 0), (2, 2)), General(MaxColumnL1()))
    assert main(["solve", _write(tmp_path, inst), "--solver", "flow"]) == 1
    assert "flow requires completely separable convex type instance" in capsys.readouterr().err


def test_infeasible_exit_code(tmp_path):
    inst = TypeInstance((1, 1), 2, Interval((2, 2), (2, 2)), CompletelySeparable(((Quadratic(0),) * 2,) * 2))
    out = tmp_path / "sol.txt"
    assert main(["solve", _write(tmp_path, inst), "--out", str(out)]) == 2
    assert _solution(out).status == "infeasible"


def test_budget_error_writes_error_document(tmp_path):
    inst = gen_random_instance(n=12, d=2, p=3, a=3, objective="max_column_l1", seed=2)
    out = tmp_path / "sol.txt"
    code = main(["solve", _write(tmp_path, inst), "--solver", "brute", "--budget-assignments", "10", "--out", str(out)])
    assert code == 1 and _solution(out).status == "error"


def test_gen_subset_sum_then_solve(tmp_path):
    inst_path = tmp_path / "ss.txt"
    assert main(["gen", "subset-sum", "1,2,3", "--out", str(inst_path)]) == 0
    assert "ground truth" in inst_path.read_text()
    out = tmp_path / "sol.txt"
    assert main(["solve", str(inst_path), "--solver", "dp-general", "--out", str(out)]) == 0
    sol = _solution(out)
    assert sol.status == "optimal" and sol.value == 0


def test_gen_random_is_byte_identical(tmp_path):
    args = ["gen", "random", "--n", "6", "--d", "2", "--p", "3", "--a", "2", "--shape", "sets", "--seed", "7"]
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(args + ["--out", str(a)]) == 0 and main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("# generated by vecpart gen random")


def test_gen_permutation_shape(tmp_path):
    path = tmp_path / "perm.txt"
    assert main(["gen", "permutation", "--n", "3", "--out", str(path)]) == 0
    assert io.read_instance(path).shape.sizes == (1, 1, 1)


def test_gen_missing_parameter(capsys):
    assert main(["gen", "unit-vector"]) == 1
    assert "--n is required" in capsys.readouterr().err


def test_verify_reports(tmp_path, capsys):
    vec = gen_random_instance(n=3, d=1, p=2, shape="interval", objective="quadratic", seed=1)
    assert main(["verify", _write(tmp_path, vec)]) == 0
    out = capsys.readouterr().out
    assert "tree height: ok  5" in out and "tree valid: ok" in out
    typ = gen_random_instance(n=4, t=2, p=2, shape="interval", objective="quadratic", kind="type", seed=1)
    assert main(["verify", _write(tmp_path, typ, "t.txt"), "--subdet", "4"]) == 0
    out = capsys.readouterr().out
    assert "TU certificate: ok" in out and "subdeterminants order <= 4: ok" in out


def test_verify_rejects_sets_shape(tmp_path, capsys):
    inst = gen_random_instance(n=3, d=1, p=2, shape="sets", objective="quadratic", seed=1)
    assert main(["verify", _write(tmp_path, inst)]) == 1
    assert "interval" in capsys.readouterr().err


def test_bench_command(tmp_path):
    suite = {"generator": "random", "params": {"d": 1, "p": 2, "objective": "composite"}, "grid": {"n": [3, 4]}, "solvers": ["dp-separable", "brute"]}
    path = tmp_path / "suite.json"
    path.write_text(json.dumps(suite))
    out = tmp_path / "bench.csv"
    assert main(["bench", str(path), "--out", str(out), "--no-timings"]) == 0
    assert len(out.read_text().splitlines()) == 1 + 4


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "vecpart", "gen", "permutation", "--n", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and '"kind": "vector"' in proc.stdout


@pytest.mark.parametrize("seed", range(15))
def test_auto_never_picks_an_ineligible_solver(seed):
    kind = "type" if seed % 2 else "vector"
    objective = ["mixed", "mixed_convex", "composite", "max_column_l1", "quadratic"][seed % 5]
    inst = gen_random_instance(n=5, d=2, t=2, p=2, a=1, shape=["free", "interval", "sets"][seed % 3], objective=objective, kind=kind, seed=seed)
    for name in auto_candidates(inst):
        assert ineligibility(inst, name) is None
