"""Benchmark harness: a generator grid run against a list of solvers.

A suite is a JSON object::

    {"generator": "random", "params": {"d": 2, "p": 2, "objective": "mixed"},
     "grid": {"n": [4, 6, 8]}, "solvers": ["dp-general", "brute"],
     "repetitions": 2, "seed": 0}

Cells are the cartesian product of ``grid`` (keys in sorted order).  For
the ``random`` generator repetition ``r`` uses seed ``seed + r``.  Solves
run in worker processes; every solver must report the same status and
value on an instance, otherwise :class:`SolverDisagreement` is raised.
"""

from __future__ import annotations

import csv
import io as _io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence

from .errors import FormatError, VecPartError
from .generate import gen_random_instance
from .hardness import gen_partition_hardness, gen_permutation_instance, gen_unit_vector_instance
from .solvers import SOLVER_NAMES, Budgets, run_solver

GENERATORS = ("random", "unit-vector", "permutation", "subset-sum")
CSV_COLUMNS = ("cell", "repetition", "seed", "solver", "status", "value", "wall_time", "states", "edges", "augmentations", "assignments")


class SolverDisagreement(VecPartError, AssertionError):
    """Two solvers returned different optima for one instance."""


@dataclass(frozen=True)
class Suite:
    generator: str
    grid: Dict[str, List]
    solvers: List[str]
    params: Dict[str, object] = field(default_factory=dict)
    repetitions: int = 1
    seed: int = 0

    def cells(self) -> List[Dict[str, object]]:
        keys = sorted(self.grid)
        return [dict(zip(keys, vals)) for vals in product(*(self.grid[k] for k in keys))]


def suite_from_dict(obj) -> Suite:
    if not isinstance(obj, dict):
        raise FormatError("suite: expected an object")
    allowed = {"generator", "grid", "solvers", "params", "repetitions", "seed"}
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise FormatError(f"suite: unknown field(s) {', '.join(unknown)}")
    for key in ("generator", "grid", "solvers"):
        if key not in obj:
            raise FormatError(f"suite: missing field {key}")
    if obj["generator"] not in GENERATORS:
        raise FormatError(f"suite: generator must be one of {', '.join(GENERATORS)}")
    grid = obj["grid"]
    if not isinstance(grid, dict) or not all(isinstance(v, list) and v for v in grid.values()):
        raise FormatError("suite: grid must map parameter names to nonempty lists")
    solvers = obj["solvers"]
    if not isinstance(solvers, list) or not solvers:
        raise FormatError("suite: solver list must be nonempty")
    bad = [s for s in solvers if s not in SOLVER_NAMES]
    if bad:
        raise FormatError(f"suite: unknown solver(s) {', '.join(bad)}")
    reps = obj.get("repetitions", 1)
    if isinstance(reps, bool) or not isinstance(reps, int) or reps < 1:
        raise FormatError("suite: repetitions must be a positive integer")
    seed = obj.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise FormatError("suite: seed must be an integer")
    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise FormatError("suite: params must be an object")
    return Suite(obj["generator"], grid, list(solvers), params, reps, seed)


def load_suite(path) -> Suite:
    with open(path, encoding="utf-8") as fh:
        try:
            return suite_from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise FormatError(f"suite: malformed JSON: {exc}") from None


def make_instance(generator: str, params: Dict[str, object], seed: int):
    if generator == "random":
        return gen_random_instance(seed=seed, **params)
    if generator == "unit-vector":
        return gen_unit_vector_instance(int(params["n"]), seed=seed).instance
    if generator == "permutation":
        return gen_permutation_instance(int(params["n"])).instance
    if generator == "subset-sum":
        return gen_partition_hardness(params["weights"]).instance
    raise FormatError(f"unknown generator {generator!r}")


def _run_task(task):
    generator, params, seed, solver, budgets = task
    instance = make_instance(generator, params, seed)
    start = time.perf_counter()
    result = run_solver(instance, solver, budgets)
    wall = time.perf_counter() - start
    return result.status, result.value, wall, dict(result.stats)


def _cell_label(cell: Dict[str, object]) -> str:
    return ";".join(f"{k}={json.dumps(v, separators=(',', ':'))}" for k, v in cell.items())


def run_suite(suite: Suite, jobs: int = 1, budgets: Budgets = Budgets(), timings: bool = True) -> List[Dict]:
    """Run every (cell, repetition, solver) and return the rows in grid order."""
    tasks, labels = [], []
    for cell in suite.cells():
        params = {**suite.params, **cell}
        for r in range(suite.repetitions):
            seed = suite.seed + r
            for solver in suite.solvers:
                tasks.append((suite.generator, params, seed, solver, budgets))
                labels.append((_cell_label(cell), r, seed, solver))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]

    rows = []
    for (cell, r, seed, solver), (status, value, wall, stats) in zip(labels, results):
        rows.append(
            {
                "cell": cell,
                "repetition": r,
                "seed": seed,
                "solver": solver,
                "status": status,
                "value": "" if value is None else value,
                "wall_time": f"{wall:.6f}" if timings else "",
                **{k: stats.get(k, "") for k in ("states", "edges", "augmentations", "assignments")},
            }
        )
    _check_agreement(rows)
    return rows


def _check_agreement(rows: Sequence[Dict]) -> None:
    seen: Dict[tuple, tuple] = {}
    for row in rows:
        key = (row["cell"], row["repetition"])
        outcome = (row["status"], row["value"])
        first = seen.setdefault(key, (row["solver"], outcome))
        if first[1] != outcome:
            raise SolverDisagreement(
                f"cell {row['cell']} repetition {row['repetition']}: "
                f"{first[0]} gave {first[1]}, {row['solver']} gave {outcome}"
            )


def rows_to_csv(rows: Sequence[Dict]) -> str:
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def run_bench(suite: Suite, out: Optional[str] = None, jobs: int = 1, budgets: Budgets = Budgets(), timings: bool = True) -> str:
    text = rows_to_csv(run_suite(suite, jobs, budgets, timings))
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
