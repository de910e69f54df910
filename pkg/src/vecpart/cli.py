"""Command-line interface: ``vecpart solve | gen | verify | bench``.

Exit codes: 0 optimal (or all certificates passed), 2 infeasible, 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional

from . import io
from .bench import load_suite, run_bench
from .errors import VecPartError
from .generate import OBJECTIVES, SHAPES, gen_random_instance, weights_from_text
from .hardness import gen_partition_hardness, gen_permutation_instance, gen_unit_vector_instance
from .ip import (
    NotApplicable,
    build_type_ip,
    build_vector_ip,
    model_row_graph,
    subdeterminant_check,
    tree_depth_certificate,
    verify_tu_condition,
    verify_valid_tree,
)
from .model import TypeInstance, compute_types
from .objectives import CompletelySeparable, Linear
from .solvers import SOLVER_NAMES, Budgets, solve

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _budgets(args) -> Budgets:
    return Budgets(states=args.budget_states, assignments=args.budget_assignments, edges=args.budget_edges)


# --------------------------------------------------------------------------
# solve


def cmd_solve(args) -> int:
    try:
        instance = io.read_instance(args.instance)
    except (OSError, VecPartError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    start = time.perf_counter()
    try:
        result = solve(instance, args.solver, _budgets(args))
    except VecPartError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.out:
            _emit(io.serialize_solution(io.SolveError(str(exc), solver=args.solver)), args.out)
        return EXIT_ERROR
    wall = None if args.no_timings else time.perf_counter() - start
    _emit(io.serialize_solution(result, wall), args.out)
    return EXIT_OK if result.status == "optimal" else EXIT_INFEASIBLE


# --------------------------------------------------------------------------
# gen


def _generate(args):
    """Returns ``(instance, comment lines)``."""
    c = args.construction
    if c == "unit-vector":
        h = gen_unit_vector_instance(_need(args.n, "--n"), seed=args.seed)
    elif c == "permutation":
        h = gen_permutation_instance(_need(args.n, "--n"))
    elif c == "subset-sum":
        text = args.weights or " ".join(args.values)
        if not text:
            raise VecPartError("subset-sum needs weights, e.g. 'vecpart gen subset-sum 1,2,3'")
        h = gen_partition_hardness(weights_from_text(text))
    else:
        params = dict(
            n=_need(args.n, "--n"),
            d=args.d,
            p=args.p,
            a=args.a,
            shape=args.shape,
            objective=args.objective,
            kind=args.kind,
            t=args.t,
        )
        inst = gen_random_instance(seed=args.seed, **params)
        params["seed"] = args.seed
        return inst, ["generated by vecpart gen random", "params: " + json.dumps(params, sort_keys=True)]
    lines = [f"generated by vecpart gen {h.construction}", "params: " + json.dumps(h.params, sort_keys=True)]
    if h.ground_truth is not None:
        lines.append("ground truth: " + json.dumps(h.ground_truth, sort_keys=True))
    return h.instance, lines


def _need(value, flag):
    if value is None:
        raise VecPartError(f"{flag} is required for this construction")
    return value


def cmd_gen(args) -> int:
    try:
        instance, comments = _generate(args)
        text = io.serialize_instance(instance, comments)
    except VecPartError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _emit(text, args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# verify


def verify_report(instance, subdet: Optional[int] = None) -> List[tuple]:
    """Certificate checks as ``(label, passed, detail)`` rows."""
    rows = []
    vec = build_vector_ip(instance)
    tree = tree_depth_certificate(vec)
    bound = (instance.d + 1) * instance.p + 1
    rows.append(("vector model", True, f"{vec.num_vars} variables, {vec.num_rows} rows"))
    rows.append(("tree height", tree.height == bound, f"{tree.height} (bound (d+1)p+1 = {bound})"))
    rows.append(("tree valid", verify_valid_tree(model_row_graph(vec), tree), ""))

    if instance.kind == "type":
        tinst = instance
    else:
        s = compute_types(instance.A)
        counts = s.counts or (0,)
        zero = CompletelySeparable(tuple((Linear(0),) * len(counts) for _ in range(instance.p)))
        tinst = TypeInstance(counts, instance.p, instance.shape, zero)
    typ = build_type_ip(tinst)
    rows.append(("type model", True, f"{typ.num_vars} variables, {typ.num_rows} rows"))
    tu = verify_tu_condition(typ.matrix)
    if isinstance(tu, NotApplicable):
        rows.append(("TU certificate", False, tu.reason))
    else:
        rows.append(("TU certificate", True, "row coloring " + "".join(map(str, tu.colors))))
    if subdet:
        ok = subdeterminant_check(typ.matrix, subdet)
        rows.append((f"subdeterminants order <= {subdet}", ok, "all in {-1,0,1}" if ok else "found |det| > 1"))
    return rows


def cmd_verify(args) -> int:
    try:
        instance = io.read_instance(args.instance)
        rows = verify_report(instance, args.subdet)
    except (OSError, VecPartError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for label, ok, detail in rows:
        status = "ok" if ok else "FAILED"
        print(f"{label}: {status}" + (f"  {detail}" if detail else ""))
    return EXIT_OK if all(ok for _, ok, _ in rows) else EXIT_ERROR


# --------------------------------------------------------------------------
# bench


def cmd_bench(args) -> int:
    try:
        suite = load_suite(args.suite)
        text = run_bench(suite, args.out, jobs=args.jobs, budgets=_budgets(args), timings=not args.no_timings)
    except (OSError, VecPartError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------


def _add_budgets(p: argparse.ArgumentParser) -> None:
    b = Budgets()
    p.add_argument("--budget-states", type=int, default=b.states, help="dp-general state budget")
    p.add_argument("--budget-assignments", type=int, default=b.assignments, help="brute-force assignment budget")
    p.add_argument("--budget-edges", type=int, default=b.edges, help="dp-separable edge budget")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vecpart", description="Exact solvers for vector and type partition problems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance")
    p.add_argument("--solver", default="auto", choices=("auto",) + SOLVER_NAMES)
    p.add_argument("--out", help="solution file (default: stdout)")
    p.add_argument("--no-timings", action="store_true", help="omit wall time for byte-stable output")
    _add_budgets(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="write an instance file")
    p.add_argument("construction", choices=("unit-vector", "permutation", "subset-sum", "random"))
    p.add_argument("values", nargs="*", help="subset-sum weights")
    p.add_argument("--weights", help="subset-sum weights, comma separated")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--t", type=int)
    p.add_argument("--kind", choices=("vector", "type"), default="vector")
    p.add_argument("--shape", choices=SHAPES, default="free")
    p.add_argument("--objective", choices=OBJECTIVES, default="mixed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check the IP certificates of an instance")
    p.add_argument("instance")
    p.add_argument("--subdet", type=int, default=0, metavar="K", help="also check all minors of order <= K")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a benchmark suite and write CSV")
    p.add_argument("suite")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timings", action="store_true")
    _add_budgets(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
