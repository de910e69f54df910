"""Shortest path over running-sum states for the general (non-separable) problem.

A state after placing agents ``0..j-1`` is the ``(d+1) x p`` matrix whose
column ``k`` holds ``(|pi_k|, attribute sums of pi_k)``; placing agent ``j``
in part ``k`` adds the augmented column ``(1, A^j)`` to column ``k``.  All
edges have length zero except the final ones, so only reachability and one
predecessor per state are propagated, and the objective is evaluated once
per admissible terminal state.

States are stored as rows of a numpy array in column-major order
(``row[k*(d+1) + i] = v[i][k]``).  Layers are deduplicated through a
mixed-radix int64 code whenever the state box fits in 63 bits, which also
makes code order equal to lexicographic order of that flattening.
"""

from __future__ import annotations

from typing import List, Optional, Set, Tuple

import numpy as np

from .errors import BudgetExceeded, SolverNotApplicable
from .model import Infeasible, Instance, Solution
from .objectives import Matrix, as_matrix

DEFAULT_MAX_STATES = 100_000_000

DpState = Matrix


class _Layers:
    def __init__(self, A: Matrix, p: int, max_states: int):
        d = len(A)
        n = len(A[0]) if d else 0
        self.n, self.d, self.p = n, d, p
        self.max_states = max_states
        aug = np.vstack([np.ones((1, n), dtype=np.int64), np.asarray(A, dtype=np.int64).reshape(d, n)])
        width = (d + 1) * p
        self.width = width
        # delta[j, k] = state increment for agent j entering part k
        self.delta = np.zeros((n, p, width), dtype=np.int64)
        for k in range(p):
            self.delta[:, k, k * (d + 1) : (k + 1) * (d + 1)] = aug.T
        na = n * int(np.abs(aug[1:]).max(initial=0))
        offset = np.tile(np.asarray([0] + [na] * d, dtype=np.int64), p)
        radix = np.tile(np.asarray([n + 1] + [2 * na + 1] * d, dtype=object), p)
        space = 1
        for r in radix:
            space *= int(r)
        self.offset = offset
        self.space = space
        if space < 2**63:
            weights, w = [], 1
            for r in reversed(radix):
                weights.append(w)
                w *= int(r)
            self.code_weights = np.asarray(weights[::-1], dtype=np.int64)
        else:
            self.code_weights = None
        self.rows = np.zeros((1, width), dtype=np.int64)
        self.preds: List[np.ndarray] = []
        self.parts: List[np.ndarray] = []
        self.total = 1
        self.max_layer = 1
        self.j = 0

    def step(self) -> None:
        j, m, p = self.j, len(self.rows), self.p
        if p * m + self.total > self.max_states:
            raise BudgetExceeded(
                f"layer {j + 1} would exceed the state budget of {self.max_states} entries"
            )
        cand = np.concatenate([self.rows + self.delta[j, k] for k in range(p)])
        if self.code_weights is not None:
            codes = (cand + self.offset) @ self.code_weights
            _, first = np.unique(codes, return_index=True)
        else:
            _, first = np.unique(cand, axis=0, return_index=True)
        # candidates are k-major, so the first occurrence has the smallest k,
        # then the smallest predecessor index
        self.rows = cand[first]
        self.preds.append(first % m)
        self.parts.append((first // m).astype(np.int16))
        self.total += len(first)
        self.max_layer = max(self.max_layer, len(first))
        self.j += 1

    def to_matrix(self, row) -> DpState:
        d1 = self.d + 1
        return tuple(tuple(int(row[k * d1 + i]) for k in range(self.p)) for i in range(d1))


def reachable_states(instance: Instance, j: int, max_states: int = DEFAULT_MAX_STATES) -> Set[DpState]:
    """States reachable after placing the first ``j`` agents."""
    if not 0 <= j <= instance.n:
        raise ValueError(f"layer {j} outside [0, {instance.n}]")
    layers = _Layers(instance.attribute_matrix(), instance.p, max_states)
    for _ in range(j):
        layers.step()
    return {layers.to_matrix(r) for r in layers.rows}


def solve_dp_general(instance: Instance, max_states: int = DEFAULT_MAX_STATES):
    """Optimal partition for any objective, treated as a black-box oracle.

    Works on vector instances directly and on type instances through their
    unit-vector attribute matrix.  Returns :class:`Solution` or
    :class:`Infeasible`; raises :class:`BudgetExceeded` past ``max_states``
    stored states.
    """
    n, p, d = instance.n, instance.p, instance.d
    layers = _Layers(instance.attribute_matrix(), p, max_states)
    for _ in range(n):
        layers.step()
    rows = layers.rows
    d1 = d + 1
    ok = np.ones(len(rows), dtype=bool)
    for k in range(p):
        ok &= instance.shape.contains_array(k, rows[:, k * d1], n)
    stats = {"states": int(layers.total), "max_layer": int(layers.max_layer)}
    candidates = np.flatnonzero(ok)
    stats["terminal_admissible"] = int(len(candidates))
    if not len(candidates):
        return Infeasible("no terminal state satisfies the shape", solver="dp-general", stats=stats)

    evaluate = instance.objective.evaluate
    best: Optional[Tuple[int, tuple, int]] = None
    for idx, row in zip(candidates.tolist(), rows[candidates].tolist()):
        sums = tuple(tuple(row[k * d1 + 1 + i] for k in range(p)) for i in range(d))
        value = evaluate(sums)
        if best is None or value < best[0] or (value == best[0] and tuple(row) < best[1]):
            best = (value, tuple(row), idx)
    value, row, idx = best

    assignment = [0] * n
    for j in range(n - 1, -1, -1):
        assignment[j] = int(layers.parts[j][idx])
        idx = int(layers.preds[j][idx])
    sums = as_matrix([[row[k * d1 + 1 + i] for k in range(p)] for i in range(d)])
    return Solution(
        value=int(value),
        assignment=tuple(assignment),
        sums=sums,
        counts=sums if instance.kind == "type" else None,
        solver="dp-general",
        stats=stats,
    )


def solve_dp_general_type(instance: Instance, max_states: int = DEFAULT_MAX_STATES):
    """Type-instance entry point: the unit-vector encoding with ``d = t``, ``a = 1``."""
    if instance.kind != "type":
        raise SolverNotApplicable("solve_dp_general_type requires a type instance")
    return solve_dp_general(instance, max_states=max_states)
