from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vecpart.bruteforce import brute_force_solve
from vecpart.dp_general import solve_dp_general
from vecpart.dp_separable import (
    reduce_vector_to_type,
    solve_dp_separable_type,
    solve_dp_separable_vector,
)
from vecpart.errors import BudgetExceeded, SolverNotApplicable
from vecpart.generate import gen_random_instance
from vecpart.model import (
    TypeInstance,
    VectorInstance,
    compute_types,
    counts_from_assignment,
    is_admissible,
    partition_cost,
)
from vecpart.objectives import (
    Composite,
    CompletelySeparable,
    General,
    Quadratic,
    Separable,
)
from vecpart.shapes import Free, Single

SQUARE = Composite((1,), Quadratic(0))


def test_single_type_split():
    inst = TypeInstance((3,), 2, Free(), Separable((SQUARE, SQUARE)))
    sol = solve_dp_separable_type(inst)
    assert sol.value == 5
    # lex-smallest counts matrix among (1,2) and (2,1)
    assert sol.counts == ((1, 2),)


def test_two_types_single_shape():
    g = lambda v: (v[0] - 1) ** 2 + (v[1] - 1) ** 2
    inst = TypeInstance((2, 2), 2, Single((2, 2)), Separable((g, g)))
    sol = solve_dp_separable_type(inst)
    assert sol.value == 0 and sol.counts == ((1, 1), (1, 1))


def test_single_part_forced():
    g = lambda v: 3 * v[0] - v[1]
    inst = TypeInstance((4, 2), 1, Free(), Separable((g,)))
    assert solve_dp_separable_type(inst).value == 10


def test_reduction_substitutes_representatives():
    inst = VectorInstance(((1, 1, 2),), 2, Free(), Separable((SQUARE, SQUARE)))
    reduced, red = reduce_vector_to_type(inst)
    assert reduced.counts == (2, 1) and red.structure.t == 2
    assert red.g(0, (1, 1)) == 9


def test_reduction_all_distinct_columns():
    inst = VectorInstance(((1, 2, 3, 4),), 2, Free(), Separable((SQUARE, SQUARE)))
    reduced, _ = reduce_vector_to_type(inst)
    assert reduced.t == 4 and reduced.counts == (1, 1, 1, 1)


def test_reduction_preserves_cost_on_random_partitions():
    rng = random.Random(5)
    inst = gen_random_instance(n=6, d=2, p=3, a=2, objective="composite", seed=11)
    reduced, red = reduce_vector_to_type(inst)
    type_of = red.structure.type_of()
    for _ in range(50):
        assignment = tuple(rng.randrange(inst.p) for _ in range(inst.n))
        x = counts_from_assignment(type_of, red.structure.t, assignment, inst.p)
        g_cost = sum(red.g(k, tuple(row[k] for row in x)) for k in range(inst.p))
        assert g_cost == partition_cost(inst, assignment)


def test_vector_examples():
    inst = VectorInstance(((1, 1, 2),), 2, Free(), Separable((SQUARE, SQUARE)))
    sol = solve_dp_separable_vector(inst)
    assert sol.value == 8 == brute_force_solve(inst).value
    hard = VectorInstance(((1, 2, 3),), 2, Free(), Separable((Composite((1,), Quadratic(3)),) * 2))
    assert solve_dp_separable_vector(hard).value == 0
    empty = VectorInstance(((), ()), 2, Free(), Separable((Composite((1, 1), Quadratic(2)), Composite((1, 0), Quadratic(-1)))))
    assert solve_dp_separable_vector(empty).value == 5


def test_rejects_general_objective():
    with pytest.raises(SolverNotApplicable):
        solve_dp_separable_type(TypeInstance((1,), 1, Free(), General(lambda m: 0)))


def test_edge_budget():
    inst = TypeInstance((10, 10, 10), 2, Free(), CompletelySeparable(((Quadratic(0),) * 3,) * 2))
    with pytest.raises(BudgetExceeded):
        solve_dp_separable_type(inst, max_edges=100)


@given(st.integers(0, 10**6), st.sampled_from(["free", "interval", "single", "sets"]))
@settings(max_examples=40, deadline=None)
def test_type_solutions_decode(seed, shape):
    inst = gen_random_instance(n=7, d=1, t=3, p=3, shape=shape, objective="mixed", kind="type", seed=seed)
    sol = solve_dp_separable_type(inst)
    ref = brute_force_solve(inst)
    assert sol.value == ref.value
    if sol.feasible:
        x = sol.counts
        assert all(v >= 0 for row in x for v in row)
        assert tuple(sum(row) for row in x) == inst.counts
        assert is_admissible(inst, sol.assignment)
        assert partition_cost(inst, sol.assignment) == sol.value
        assert counts_from_assignment(inst.agent_types(), inst.t, sol.assignment, inst.p) == x


@given(st.integers(0, 10**6), st.sampled_from(["free", "interval", "sets"]))
@settings(max_examples=40, deadline=None)
def test_vector_agrees_with_general_dp(seed, shape):
    inst = gen_random_instance(n=7, d=2, p=2, a=1, shape=shape, objective="composite", seed=seed)
    sol = solve_dp_separable_vector(inst)
    assert sol.value == solve_dp_general(inst).value
    if sol.feasible:
        assert partition_cost(inst, sol.assignment) == sol.value
        assert is_admissible(inst, sol.assignment)
        t = compute_types(inst.A)
        assert sum(t.counts) == inst.n
