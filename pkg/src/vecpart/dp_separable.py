"""Separable objectives: shortest path over cumulative type-count vectors.

Vertex ``[k, v]`` means parts ``0..k-1`` have received ``v_i`` agents of
type ``i``.  An edge ``[k-1, v] -> [k, w]`` exists iff ``w >= v`` and
``sum(w - v)`` is an admissible size for part ``k``; its length is
``g_k(w - v)``.  Count vectors are coded in mixed radix ``(n_i + 1)`` with
the first type most significant, so code order is lexicographic order and
``code(v + x) = code(v) + code(x)`` whenever ``v + x`` stays in the box.

Separable vector instances are solved through :func:`reduce_vector_to_type`,
which groups agents by attribute vector and evaluates
``g_k(v) = f_k(sum_i v_i A^i)`` on the representatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .errors import BudgetExceeded, SolverNotApplicable
from .model import (
    Infeasible,
    Instance,
    Solution,
    TypeInstance,
    TypeStructure,
    VectorInstance,
    compute_types,
    expand_counts,
    partition_sums,
)
from .objectives import CompletelySeparable, Separable, Vector, as_matrix

DEFAULT_MAX_EDGES = 200_000_000
_BLOCK = 1 << 20


@dataclass(frozen=True)
class ReducedPart:
    """``g(v) = f(sum_i v_i * representatives[i])``."""

    f: Callable[[Vector], int]
    representatives: Tuple[Vector, ...]
    d: int

    def __call__(self, v: Sequence[int]) -> int:
        d = self.d
        x = [0] * d
        for vi, rep in zip(v, self.representatives):
            if vi:
                for i in range(d):
                    x[i] += vi * rep[i]
        return self.f(tuple(x))


@dataclass(frozen=True)
class TypeReduction:
    structure: TypeStructure
    parts: Tuple[ReducedPart, ...]

    def g(self, k: int, v: Sequence[int]) -> int:
        return self.parts[k](v)


def _part_function(objective, k: int):
    if isinstance(objective, (Separable, CompletelySeparable)):
        return objective.part(k)
    raise SolverNotApplicable("dp-separable requires a separable or completely separable objective")


def _increment_costs(objective, k: int, X: np.ndarray) -> np.ndarray:
    if isinstance(objective, CompletelySeparable):
        total = np.zeros(len(X), dtype=np.int64)
        if not len(X):
            return total
        for i, f in enumerate(objective.terms[k]):
            hi = int(X[:, i].max())
            table = np.asarray([f(x) for x in range(hi + 1)], dtype=np.int64)
            total += table[X[:, i]]
        return total
    f = _part_function(objective, k)
    return np.asarray([f(tuple(x)) for x in X.tolist()], dtype=np.int64)


def _solve_counts(counts: Sequence[int], p: int, shape, objective, max_edges: int):
    """Run the layered DP; returns ``(value, x, stats)`` or ``(None, None, stats)``.

    ``x`` is the ``t x p`` counts matrix, lexicographically smallest in
    part-major order among the optima.
    """
    c = np.asarray(counts, dtype=np.int64)
    t, n = len(c), int(c.sum())
    N = prod(int(v) + 1 for v in counts)
    if N > max_edges:
        raise BudgetExceeded(f"count box of {N} states exceeds the budget of {max_edges}")
    box = np.indices(tuple(int(v) + 1 for v in counts)).reshape(t, -1).T.astype(np.int64)
    sizes = box.sum(axis=1)
    terminal = N - 1

    incs: List[np.ndarray] = []
    costs: List[np.ndarray] = []
    for k in range(p):
        idx = np.flatnonzero(shape.contains_array(k, sizes, n))
        incs.append(idx)
        costs.append(_increment_costs(objective, k, box[idx]))

    edges = 0

    def blocks(states: np.ndarray, k: int):
        # w[r, q] = code(state r + increment q), valid only where fits[r, q]
        X = box[incs[k]]
        step = max(1, _BLOCK // max(1, len(X)))
        for s in range(0, len(states), step):
            rows = states[s : s + step]
            fits = np.all(box[rows][:, None, :] + X[None, :, :] <= c, axis=2)
            w = np.where(fits, rows[:, None] + incs[k][None, :], 0)
            yield s, rows, w, fits

    reach = [np.zeros(1, dtype=np.int64)]
    for k in range(p):
        if edges + len(reach[k]) * len(incs[k]) > max_edges:
            raise BudgetExceeded(f"part {k + 1} would exceed the edge budget of {max_edges}")
        edges += len(reach[k]) * len(incs[k])
        mark = np.zeros(N, dtype=bool)
        for _, _, w, fits in blocks(reach[k], k):
            mark[w[fits]] = True
        reach.append(np.flatnonzero(mark))

    stats = {"states": int(sum(len(r) for r in reach)), "edges": int(edges), "box": int(N)}
    if not len(reach[p]) or reach[p][-1] != terminal:
        return None, None, stats

    big = np.iinfo(np.int64).max
    togo = np.zeros(N, dtype=np.int64)
    finite = np.zeros(N, dtype=bool)
    finite[terminal] = True
    togos = [None] * (p + 1)
    togos[p] = (togo, finite)
    for k in range(p - 1, -1, -1):
        nxt, nfin = togos[k + 1]
        togo = np.zeros(N, dtype=np.int64)
        finite = np.zeros(N, dtype=bool)
        for _, rows, w, fits in blocks(reach[k], k):
            valid = fits & nfin[w]
            vals = np.where(valid, costs[k][None, :] + nxt[w], big)
            best = vals.min(axis=1) if vals.shape[1] else np.full(len(rows), big)
            ok = valid.any(axis=1)
            togo[rows[ok]] = best[ok]
            finite[rows[ok]] = True
        togos[k] = (togo, finite)

    if not togos[0][1][0]:
        return None, None, stats
    value = int(togos[0][0][0])

    x = np.zeros((t, p), dtype=np.int64)
    v = 0
    for k in range(p):
        nxt, nfin = togos[k + 1]
        X = box[incs[k]]
        fits = np.all(box[v] + X <= c, axis=1)
        w = np.where(fits, v + incs[k], 0)
        valid = fits & nfin[w]
        vals = np.where(valid, costs[k] + nxt[w], big)
        pick = int(np.argmin(vals))
        x[:, k] = X[pick]
        v = int(w[pick])
    return value, as_matrix(x.tolist()), stats


def solve_dp_separable_type(instance: TypeInstance, max_edges: int = DEFAULT_MAX_EDGES):
    """Separable type partition by the layered count DP.

    Returns :class:`Solution` (``counts`` is the ``t x p`` matrix whose
    column ``k`` is ``|pi_k cap tau|``) or :class:`Infeasible`.
    """
    if instance.kind != "type":
        raise SolverNotApplicable("solve_dp_separable_type requires a type instance")
    _part_function(instance.objective, 0)
    value, x, stats = _solve_counts(
        instance.counts, instance.p, instance.shape, instance.objective, max_edges
    )
    if value is None:
        return Infeasible("terminal count vector unreachable", solver="dp-separable", stats=stats)
    return Solution(
        value=value,
        assignment=expand_counts(x, instance.members(), instance.p),
        sums=x,
        counts=x,
        solver="dp-separable",
        stats=stats,
    )


def reduce_vector_to_type(instance: VectorInstance) -> Tuple[TypeInstance, TypeReduction]:
    """Encode a separable vector instance as a separable type instance."""
    if instance.kind != "vector":
        raise SolverNotApplicable("reduce_vector_to_type requires a vector instance")
    structure = compute_types(instance.A)
    if structure.t == 0:
        # no agents: one empty type keeps t >= 1
        structure = TypeStructure(((0,) * instance.d,), ((),))
    parts = tuple(
        ReducedPart(_part_function(instance.objective, k), structure.representatives, instance.d)
        for k in range(instance.p)
    )
    reduced = TypeInstance(structure.counts, instance.p, instance.shape, Separable(parts))
    return reduced, TypeReduction(structure, parts)


def solve_dp_separable_vector(instance: VectorInstance, max_edges: int = DEFAULT_MAX_EDGES):
    """Separable vector partition: reduce to types, solve, expand to agents."""
    reduced, reduction = reduce_vector_to_type(instance)
    value, x, stats = _solve_counts(
        reduced.counts, reduced.p, reduced.shape, reduced.objective, max_edges
    )
    stats["t"] = reduction.structure.t
    if value is None:
        return Infeasible("terminal count vector unreachable", solver="dp-separable", stats=stats)
    assignment = expand_counts(x, reduction.structure.members, instance.p)
    return Solution(
        value=value,
        assignment=assignment,
        sums=partition_sums(instance.A, assignment, instance.p),
        solver="dp-separable",
        stats=stats,
    )


def solve_dp_separable(instance: Instance, max_edges: int = DEFAULT_MAX_EDGES):
    if instance.kind == "type":
        return solve_dp_separable_type(instance, max_edges)
    return solve_dp_separable_vector(instance, max_edges)
