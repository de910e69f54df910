from __future__ import annotations

import itertools

import pytest

from vecpart.bruteforce import brute_force_solve, count_admissible
from vecpart.errors import BudgetExceeded, InstanceError
from vecpart.hardness import (
    check_equal_sum_partition,
    gen_partition_hardness,
    gen_permutation_instance,
    gen_unit_vector_instance,
)
from vecpart.model import compute_types, partition_sums


def test_unit_vector_construction():
    h = gen_unit_vector_instance(3)
    inst = h.instance
    assert inst.A == ((1, 0, 0), (0, 1, 0), (0, 0, 1)) and inst.a == 1 and inst.p == 2
    assert compute_types(inst.A).t == 3
    assert brute_force_solve(inst).feasible


def test_unit_vector_first_columns_are_distinct():
    inst = gen_unit_vector_instance(4).instance
    firsts = set()
    for assignment in itertools.product(range(2), repeat=4):
        sums = partition_sums(inst.A, assignment, 2)
        firsts.add(tuple(row[0] for row in sums))
    assert len(firsts) == 16


def test_unit_vector_default_table_is_seeded():
    a = gen_unit_vector_instance(4, seed=1).instance.objective
    b = gen_unit_vector_instance(4, seed=1).instance.objective
    c = gen_unit_vector_instance(4, seed=2).instance.objective
    assert a == b and a != c


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 2), (3, 6), (4, 24), (5, 120), (6, 720)])
def test_permutation_count(n, expected):
    assert count_admissible(gen_permutation_instance(n).instance) == expected


def test_permutation_default_objective_minimizer():
    sol = brute_force_solve(gen_permutation_instance(3).instance)
    # sum_k (k+1) * value_k is smallest with the largest value in part 1
    assert sol.assignment == (2, 1, 0) and sol.value == 1 * 3 + 2 * 2 + 3 * 1


@pytest.mark.parametrize("weights, value", [([1, 2, 3], 0), ([1, 1, 3], 2), ([2], 8)])
def test_partition_hardness_values(weights, value):
    h = gen_partition_hardness(weights)
    assert brute_force_solve(h.instance).value == value
    assert h.ground_truth["equal_sum_partition"] == (value == 0)


def test_partition_hardness_rejects_bad_weights():
    with pytest.raises(InstanceError):
        gen_partition_hardness([])
    with pytest.raises(InstanceError):
        gen_partition_hardness([1, 0])


def test_equal_sum_oracle():
    assert check_equal_sum_partition([1, 2, 3])
    assert not check_equal_sum_partition([1, 1, 3])
    assert check_equal_sum_partition([])
    assert not check_equal_sum_partition([2, 4, 8])
    with pytest.raises(BudgetExceeded):
        check_equal_sum_partition([10**6], max_sum=100)
