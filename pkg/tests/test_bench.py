from __future__ import annotations

import pytest

from vecpart import bench
from vecpart.bench import Suite, SolverDisagreement, rows_to_csv, run_suite, suite_from_dict
from vecpart.errors import FormatError


def test_grid_cells_equal_values():
    suite = suite_from_dict(
        {"generator": "random", "params": {"d": 2, "p": 2, "a": 1, "objective": "max_column_l1"}, "grid": {"n": [4, 6, 8]}, "solvers": ["dp-general", "brute"]}
    )
    rows = run_suite(suite, timings=False)
    assert len(rows) == 6
    for a, b in zip(rows[::2], rows[1::2]):
        assert a["value"] == b["value"] and a["cell"] == b["cell"]


def test_empty_solver_list_is_an_error():
    with pytest.raises(FormatError, match="nonempty"):
        suite_from_dict({"generator": "random", "grid": {"n": [2]}, "solvers": []})


def test_unknown_fields_rejected():
    with pytest.raises(FormatError, match="unknown field"):
        suite_from_dict({"generator": "random", "grid": {"n": [2]}, "solvers": ["brute"], "plot": True})


def test_disagreement_fails_loudly(monkeypatch):
    real = bench._run_task

    def lying(task):
        status, value, wall, stats = real(task)
        return status, (value + 1 if task[3] == "brute" else value), wall, stats

    monkeypatch.setattr(bench, "_run_task", lying)
    suite = Suite("random", {"n": [3]}, ["dp-general", "brute"], {"objective": "quadratic"})
    with pytest.raises(SolverDisagreement):
        run_suite(suite)


def test_parallel_matches_sequential():
    suite = Suite("permutation", {"n": [2, 3, 4]}, ["dp-general", "dp-separable", "brute"])
    seq = rows_to_csv(run_suite(suite, jobs=1, timings=False))
    par = rows_to_csv(run_suite(suite, jobs=2, timings=False))
    assert seq == par


def test_type_flow_grid_time_column():
    suite = Suite(
        "random",
        {"n": [1000, 10000, 100000]},
        ["flow"],
        {"kind": "type", "t": 4, "p": 8, "shape": "free", "objective": "quadratic"},
    )
    rows = run_suite(suite)
    times = [float(r["wall_time"]) for r in rows]
    assert all(r["status"] == "optimal" for r in rows)
    assert times == sorted(times)
