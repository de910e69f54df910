"""Exhaustive reference solver over all ``p**n`` assignments.

Assignments are visited in base-``p`` counting order with agent 0 as the
least significant digit; the first optimum met in that order is returned.
No pruning and no symmetry reduction: this module is the ground truth the
other solvers are tested against.
"""

from __future__ import annotations

import time
from typing import Iterator, Optional, Tuple

import numpy as np

from .errors import BudgetExceeded, TimeLimitExceeded
from .model import Infeasible, Instance, Solution
from .objectives import as_matrix

DEFAULT_MAX_ASSIGNMENTS = 20_000_000
_CHUNK = 1 << 15


def _chunks(
    instance: Instance, max_assignments: int, time_limit: Optional[float]
) -> Iterator[Tuple[int, np.ndarray, np.ndarray]]:
    """Yield ``(first_index, digits, admissible_mask)`` per enumeration chunk."""
    n, p = instance.n, instance.p
    total = p**n
    if total > max_assignments:
        raise BudgetExceeded(f"p^n = {total} assignments exceeds the budget of {max_assignments}")
    if total >= 2**62:
        raise BudgetExceeded("enumeration index does not fit in 64 bits")
    deadline = None if time_limit is None else time.perf_counter() + time_limit
    place = np.asarray([p**j for j in range(n)], dtype=np.int64)
    for start in range(0, total, _CHUNK):
        if deadline is not None and time.perf_counter() > deadline:
            raise TimeLimitExceeded(f"enumeration stopped after {start} of {total} assignments")
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (idx[:, None] // place[None, :]) % p
        ok = np.ones(len(idx), dtype=bool)
        for k in range(p):
            ok &= instance.shape.contains_array(k, (digits == k).sum(axis=1), n)
        yield start, digits, ok


def count_admissible(
    instance: Instance,
    max_assignments: int = DEFAULT_MAX_ASSIGNMENTS,
    time_limit: Optional[float] = None,
) -> int:
    return sum(int(ok.sum()) for _, _, ok in _chunks(instance, max_assignments, time_limit))


def brute_force_solve(
    instance: Instance,
    max_assignments: int = DEFAULT_MAX_ASSIGNMENTS,
    time_limit: Optional[float] = None,
):
    """Minimum-cost admissible partition by full enumeration.

    Returns :class:`Solution` or :class:`Infeasible`.  Raises
    :class:`BudgetExceeded` when ``p**n`` exceeds ``max_assignments`` and
    :class:`TimeLimitExceeded` past ``time_limit`` seconds.
    """
    p = instance.p
    A = np.asarray(instance.attribute_matrix(), dtype=np.int64).reshape(instance.d, instance.n)
    evaluate = instance.objective.evaluate
    best_value = None
    best_digits = None
    best_sums = None
    admissible = 0
    for _, digits, ok in _chunks(instance, max_assignments, time_limit):
        rows = digits[ok]
        admissible += len(rows)
        if not len(rows):
            continue
        # sums[r, i, k] = attribute i summed over agents placed in part k
        sums = np.stack([(rows == k).astype(np.int64) @ A.T for k in range(p)], axis=2)
        for r, mat in enumerate(sums.tolist()):
            sums_m = as_matrix(mat)
            value = evaluate(sums_m)
            if best_value is None or value < best_value:
                best_value, best_digits, best_sums = value, rows[r], sums_m
    stats = {"assignments": p**instance.n, "admissible": admissible}
    if best_value is None:
        return Infeasible("no admissible partition", solver="brute", stats=stats)
    assignment = tuple(int(k) for k in best_digits)
    return Solution(
        value=int(best_value),
        assignment=assignment,
        sums=best_sums,
        counts=best_sums if instance.kind == "type" else None,
        solver="brute",
        stats=stats,
    )
