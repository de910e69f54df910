from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vecpart.bruteforce import count_admissible
from vecpart.dp_general import solve_dp_general
from vecpart.dp_separable import solve_dp_separable_type
from vecpart.errors import InstanceError, SolverNotApplicable
from vecpart.generate import gen_random_instance
from vecpart.ip import (
    IPModel,
    NotApplicable,
    RootedTreeCertificate,
    TuCertificate,
    build_type_ip,
    build_vector_ip,
    constraint_graph,
    count_ip_points,
    ip_solution_to_partition,
    model_row_graph,
    partition_to_ip_point,
    solve_ip_exhaustive,
    subdeterminant_check,
    tree_depth_certificate,
    verify_tu_condition,
    verify_valid_tree,
)
from vecpart.model import TypeInstance, VectorInstance, is_admissible, partition_cost
from vecpart.objectives import CompletelySeparable, Linear, Quadratic
from vecpart.shapes import Interval, Sets


def _vec(A, p, l, u, obj=None):
    d = len(A)
    obj = obj or CompletelySeparable(tuple((Quadratic(0),) * d for _ in range(p)))
    return VectorInstance(A, p, Interval(l, u), obj)


def _typ(counts, p, l, u):
    obj = CompletelySeparable(tuple((Quadratic(0),) * len(counts) for _ in range(p)))
    return TypeInstance(counts, p, Interval(l, u), obj)


def test_vector_model_dimensions_and_bounds():
    m = build_vector_ip(_vec(((1, 2),), 2, (0, 0), (2, 2)))
    assert (m.num_vars, m.num_rows) == (8, 6)
    wide = build_vector_ip(_vec(((3, -1, 0, 2),), 1, (0,), (4,)))
    y = wide.var_names.index("y[1,1]")
    assert (wide.lower[y], wide.upper[y]) == (-12, 12)
    # the model matrix has the same sup-norm as A
    assert max(abs(v) for row in wide.matrix for v in row) == 3


def test_vector_model_point_count_matches_partitions():
    inst = _vec(((1, 2),), 2, (0, 0), (2, 2))
    assert count_ip_points(build_vector_ip(inst)) == 4 == count_admissible(inst)


def test_type_model_dimensions_and_bounds():
    m = build_type_ip(_typ((1, 1), 2, (0, 0), (2, 2)))
    assert (m.num_vars, m.num_rows) == (6, 4)
    assert count_ip_points(m) == 4 == count_admissible(_typ((1, 1), 2, (0, 0), (2, 2)))
    tight = build_type_ip(_typ((5, 0), 2, (0, 0), (1, 5)))
    assert tight.upper[tight.var_names.index("x[1,1]")] == 1


def test_non_interval_shape_rejected():
    inst = VectorInstance(((1,),), 1, Sets(((1,),)), CompletelySeparable(((Linear(0),),)))
    with pytest.raises(SolverNotApplicable):
        build_vector_ip(inst)


@pytest.mark.parametrize("d, p, n, height", [(2, 3, 2, 10), (1, 2, 3, 5)])
def test_tree_certificate_height(d, p, n, height):
    A = tuple(tuple(1 for _ in range(n)) for _ in range(d))
    model = build_vector_ip(_vec(A, p, (0,) * p, (n,) * p))
    tree = tree_depth_certificate(model)
    assert tree.num_vertices == (d + 1) * p + n
    assert tree.height == height
    assert verify_valid_tree(model_row_graph(model), tree)


def test_tree_certificate_rejects_type_models():
    with pytest.raises(ValueError):
        tree_depth_certificate(build_type_ip(_typ((1,), 1, (0,), (1,))))


def test_matching_tree_of_height_three():
    m = 3
    # vertices 0..2m-1, edges {i, m+i}; root 0, other i < m below root, m+i below i
    edges = frozenset((i, m + i) for i in range(m))
    graph = type(constraint_graph(()))(2 * m, edges)
    parent = [None] + [0] * (m - 1) + list(range(m))
    tree = RootedTreeCertificate(tuple(parent))
    assert verify_valid_tree(graph, tree) and tree.height == 3


def test_small_tree_validity_examples():
    path = constraint_graph(((1, 1, 0), (0, 1, 1)))
    assert verify_valid_tree(path, RootedTreeCertificate((1, None, 1)))
    triangle = constraint_graph(((1, 1, 1),))
    assert verify_valid_tree(triangle, RootedTreeCertificate((None, 0, 1)))
    assert not verify_valid_tree(triangle, RootedTreeCertificate((None, 0, 0)))
    with pytest.raises(ValueError, match="vertex-set mismatch"):
        verify_valid_tree(triangle, RootedTreeCertificate((None, 0)))


def test_constraint_graph_examples():
    assert constraint_graph(((1, 0, 0), (0, 1, 0), (0, 0, 1))).edges == frozenset()
    assert constraint_graph(((1, 1, 1, 1),)).edges == frozenset(itertools.combinations(range(4), 2))


def test_row_graph_of_one_agent_model():
    # n=d=p=1: equations r[1,0], r[1,1], s[1]; x[1,1] appears in all three
    model = build_vector_ip(_vec(((1,),), 1, (0,), (1,)))
    g = model_row_graph(model)
    assert g.num_vertices == 3 and g.edges == frozenset({(0, 1), (0, 2), (1, 2)})
    zero = build_vector_ip(_vec(((0,),), 1, (0,), (1,)))
    assert model_row_graph(zero).edges == frozenset({(0, 2)})


def test_tu_certificate_on_type_model():
    model = build_type_ip(_typ((1, 1), 2, (0, 0), (2, 2)))
    cert = verify_tu_condition(model.matrix)
    assert isinstance(cert, TuCertificate)
    # (IP3) rows share one color, (IP4) rows the other
    assert cert.colors == (0, 0, 1, 1)
    assert subdeterminant_check(model.matrix, 4)


def test_tu_not_applicable_examples():
    assert isinstance(verify_tu_condition(((1, 1), (1, -1))), NotApplicable)
    assert isinstance(verify_tu_condition(((2,),)), NotApplicable)
    assert isinstance(verify_tu_condition(((1,), (1,), (1,))), NotApplicable)


def test_subdeterminant_examples():
    assert not subdeterminant_check(((1, 1), (1, -1)), 2)
    assert subdeterminant_check(((1, 0, 0), (0, -1, 0), (0, 0, 0)), 3)


def test_exhaustive_ip_matches_dp_solvers():
    vec = _vec(((1, 2),), 2, (0, 0), (2, 2))
    assert solve_ip_exhaustive(build_vector_ip(vec)).value == solve_dp_general(vec).value == 5
    typ = _typ((2, 1), 2, (0, 0), (3, 3))
    assert solve_ip_exhaustive(build_type_ip(typ)).value == solve_dp_separable_type(typ).value


def test_exhaustive_ip_infeasible_bounds():
    m = build_type_ip(_typ((1,), 1, (0,), (1,)))
    broken = IPModel(**{**m.__dict__, "lower": (2,) + m.lower[1:]})
    assert solve_ip_exhaustive(broken).status == "infeasible"


def test_read_off_example():
    model = build_vector_ip(_vec(((1, 2),), 2, (0, 0), (2, 2)))
    point = partition_to_ip_point(model, (0, 0))
    assert ip_solution_to_partition(model, point) == (0, 0)
    with pytest.raises(InstanceError):
        ip_solution_to_partition(model, (0,) * model.num_vars)


def test_text_listing_names_every_equation():
    model = build_type_ip(_typ((1, 1), 2, (0, 0), (2, 2)))
    text = model.to_text()
    assert text.count("\neq ") == model.num_rows and text.count("\nobj ") == 4


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_read_off_round_trip(seed):
    rng = random.Random(seed)
    inst = gen_random_instance(n=rng.randint(1, 6), d=2, p=rng.randint(1, 3), a=2, shape="interval", objective="quadratic", seed=seed)
    model = build_vector_ip(inst)
    for _ in range(4):
        assignment = tuple(rng.randrange(inst.p) for _ in range(inst.n))
        if not is_admissible(inst, assignment):
            with pytest.raises(InstanceError):
                partition_to_ip_point(model, assignment)
            continue
        point = partition_to_ip_point(model, assignment)
        assert ip_solution_to_partition(model, point) == assignment
        assert model.objective_value(point) == partition_cost(inst, assignment)
        # y block holds the per-part sums
        n, d = inst.n, inst.d
        for k in range(inst.p):
            for i in range(d):
                assert point[inst.p * n + k * (d + 1) + 1 + i] == sum(
                    inst.A[i][j] for j in range(n) if assignment[j] == k
                )
