"""Solver registry, eligibility checks and ``auto`` dispatch."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import List, Optional

from .bruteforce import DEFAULT_MAX_ASSIGNMENTS, brute_force_solve
from .dp_general import DEFAULT_MAX_STATES, solve_dp_general
from .dp_separable import DEFAULT_MAX_EDGES, solve_dp_separable
from .errors import BudgetExceeded, SolverNotApplicable
from .flow import build_flow_network, solve_flow_type
from .model import Instance, compute_types
from .objectives import CompletelySeparable, Separable

SOLVER_NAMES = ("dp-general", "dp-separable", "flow", "brute")
AUTO_ORDER = ("flow", "dp-separable", "dp-general", "brute")


@dataclass(frozen=True)
class Budgets:
    states: int = DEFAULT_MAX_STATES
    assignments: int = DEFAULT_MAX_ASSIGNMENTS
    edges: int = DEFAULT_MAX_EDGES


def ineligibility(instance: Instance, solver: str) -> Optional[str]:
    """Why ``solver`` cannot handle ``instance``, or None if it can."""
    if solver in ("dp-general", "brute"):
        return None
    if solver == "dp-separable":
        if isinstance(instance.objective, (Separable, CompletelySeparable)):
            return None
        return "dp-separable requires a separable or completely separable objective"
    if solver == "flow":
        try:
            build_flow_network(instance)
        except SolverNotApplicable as exc:
            return str(exc)
        return None
    raise SolverNotApplicable(f"unknown solver {solver!r} (choose from auto, {', '.join(SOLVER_NAMES)})")


def _separable_box(instance: Instance) -> int:
    counts = instance.counts if instance.kind == "type" else compute_types(instance.A).counts
    return prod(c + 1 for c in counts)


def run_solver(instance: Instance, solver: str, budgets: Budgets = Budgets()):
    """Run one named solver; raises :class:`SolverNotApplicable` when ineligible."""
    reason = ineligibility(instance, solver)
    if reason:
        raise SolverNotApplicable(reason)
    if solver == "flow":
        return solve_flow_type(instance)
    if solver == "dp-separable":
        return solve_dp_separable(instance, max_edges=budgets.edges)
    if solver == "dp-general":
        return solve_dp_general(instance, max_states=budgets.states)
    return brute_force_solve(instance, max_assignments=budgets.assignments)


def auto_candidates(instance: Instance, budgets: Budgets = Budgets()) -> List[str]:
    """Eligible solvers in ``AUTO_ORDER`` whose cheap size estimate fits the budget.

    dp-general has no cheap estimate; :func:`solve` tries it and moves on
    when it raises :class:`BudgetExceeded`.
    """
    out = []
    for name in AUTO_ORDER:
        if ineligibility(instance, name):
            continue
        if name == "dp-separable" and _separable_box(instance) > budgets.edges:
            continue
        if name == "brute" and instance.p**instance.n > budgets.assignments:
            continue
        out.append(name)
    return out


def solve(instance: Instance, solver: str = "auto", budgets: Budgets = Budgets()):
    """Run ``solver``, or for ``auto`` the first candidate that finishes within budget."""
    if solver != "auto":
        return run_solver(instance, solver, budgets)
    last = None
    for name in auto_candidates(instance, budgets):
        try:
            return run_solver(instance, name, budgets)
        except BudgetExceeded as exc:
            last = exc
    raise BudgetExceeded(f"no eligible solver fits its budget ({last})" if last else "no eligible solver fits its budget")
