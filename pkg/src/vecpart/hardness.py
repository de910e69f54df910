"""Lower-bound and NP-hardness instance families, plus a subset-sum oracle.

* :func:`gen_unit_vector_instance`: ``A`` is the ``n x n`` identity, two
  free parts.  Every 2-partition has its own sums matrix, so an adversarial
  oracle forces any algorithm to look at ``2^n`` of them.
* :func:`gen_permutation_instance`: ``A = [1..n]``, ``p = n`` parts of size
  exactly one.  Admissible partitions are the ``n!`` permutations.
* :func:`gen_partition_hardness`: two free parts with cost
  ``(2x - S)^2`` per part; the optimum is zero iff the weights split into
  two halves of equal sum.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Optional, Sequence

from .errors import BudgetExceeded, InstanceError
from .model import Instance, VectorInstance
from .objectives import CompletelySeparable, General, Linear, MatrixTable, ScaledQuadratic
from .shapes import Free, Single

DEFAULT_MAX_SUBSET_SUM = 10_000_000


@dataclass(frozen=True)
class HardnessInstance:
    instance: Instance
    construction: str
    params: Dict[str, object] = field(default_factory=dict)
    # known optimal value / decision answer when the construction gives one
    ground_truth: Optional[Dict[str, object]] = None


def unit_vector_table(n: int, seed: int = 0, low: int = 0, high: int = 1000) -> MatrixTable:
    """Seeded random value for each of the ``2^n`` sums matrices of the identity instance."""
    rng = random.Random(seed)
    entries = []
    for bits in product((0, 1), repeat=n):
        # part 1 holds the agents with bit 1; part 2 the rest
        m = tuple((b, 1 - b) for b in bits)
        entries.append((m, rng.randint(low, high)))
    return MatrixTable(tuple(entries))


def gen_unit_vector_instance(n: int, objective=None, seed: int = 0) -> HardnessInstance:
    """``d = n``, ``p = 2``, ``A`` the identity, free shape.

    ``objective`` defaults to a :class:`General` lookup table over the
    indicator vector of part 1, filled from ``seed``.
    """
    if n < 1:
        raise InstanceError("unit-vector construction needs n >= 1")
    A = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    if objective is None:
        objective = General(unit_vector_table(n, seed))
    inst = VectorInstance(A, 2, Free(), objective)
    return HardnessInstance(inst, "unit-vector", {"n": n, "seed": seed})


def gen_permutation_instance(n: int, objective=None) -> HardnessInstance:
    """``d = 1``, ``p = n``, ``A = [1..n]``, every part of size exactly one.

    ``objective`` defaults to ``sum_k (k+1) * x_k``, which tells all
    permutations with distinct values apart.
    """
    if n < 1:
        raise InstanceError("permutation construction needs n >= 1")
    A = (tuple(range(1, n + 1)),)
    if objective is None:
        objective = CompletelySeparable(tuple((Linear(k + 1),) for k in range(n)))
    inst = VectorInstance(A, n, Single((1,) * n), objective)
    return HardnessInstance(inst, "permutation", {"n": n})


def gen_partition_hardness(weights: Sequence[int]) -> HardnessInstance:
    """Two free parts, ``f_k(x) = (2x - S)^2`` with ``S = sum(weights)``."""
    weights = tuple(int(w) for w in weights)
    if not weights:
        raise InstanceError("weights must be nonempty")
    if any(w <= 0 for w in weights):
        raise InstanceError("weights must be positive")
    S = sum(weights)
    f = ScaledQuadratic(2, S)
    inst = VectorInstance((weights,), 2, Free(), CompletelySeparable(((f,), (f,))))
    equal = check_equal_sum_partition(weights)
    return HardnessInstance(
        inst,
        "subset-sum",
        {"weights": list(weights)},
        {"equal_sum_partition": equal, "zero_optimum": equal},
    )


def check_equal_sum_partition(weights: Sequence[int], max_sum: int = DEFAULT_MAX_SUBSET_SUM) -> bool:
    """Bitset subset-sum DP: can ``weights`` be split into two equal-sum halves?"""
    S = sum(weights)
    if S > max_sum:
        raise BudgetExceeded(f"weight sum {S} exceeds the subset-sum budget of {max_sum}")
    if S % 2:
        return False
    reach = 1
    for w in weights:
        reach |= reach << w
    return bool((reach >> (S // 2)) & 1)
