"""Problem instances, partitions, solutions and the basic derived quantities.

Agents and parts are indexed from 0 in code and in files.  An assignment is
a length-``n`` tuple whose ``j``-th entry is the part of agent ``j``.

A :class:`TypeInstance` has no agent identities; its agents are the
canonical expansion of the type counts (``counts[0]`` agents of type 0,
then ``counts[1]`` of type 1, ...), and its attribute matrix is the 0/1
unit-vector encoding of those types.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .errors import InstanceError
from .objectives import Matrix, Objective, as_matrix
from .shapes import Shape

INT64_MAX = 2**63 - 1


def attribute_bound(A: Sequence[Sequence[int]]) -> int:
    """Largest absolute entry of ``A``; 0 when there are no agents."""
    return max((abs(v) for row in A for v in row), default=0)


@dataclass(frozen=True)
class TypeStructure:
    """Distinct columns of an attribute matrix, in order of first occurrence."""

    representatives: Tuple[Tuple[int, ...], ...]
    members: Tuple[Tuple[int, ...], ...]

    @property
    def t(self) -> int:
        return len(self.representatives)

    @property
    def counts(self) -> Tuple[int, ...]:
        return tuple(len(m) for m in self.members)

    def type_of(self) -> Tuple[int, ...]:
        n = sum(self.counts)
        out = [0] * n
        for i, mem in enumerate(self.members):
            for j in mem:
                out[j] = i
        return tuple(out)


def compute_types(A: Sequence[Sequence[int]]) -> TypeStructure:
    n = len(A[0]) if A else 0
    index: Dict[Tuple[int, ...], int] = {}
    reps: List[Tuple[int, ...]] = []
    members: List[List[int]] = []
    for j in range(n):
        col = tuple(row[j] for row in A)
        i = index.get(col)
        if i is None:
            i = index[col] = len(reps)
            reps.append(col)
            members.append([])
        members[i].append(j)
    return TypeStructure(tuple(reps), tuple(tuple(m) for m in members))


def _check_objective(objective: Objective, d: int, p: int, lo: int, hi: int) -> None:
    objective.check_dims(d, p)
    objective.check_coverage(lo, hi)
    bound = objective.magnitude_bound(lo, hi, d, p)
    if bound is not None and bound > INT64_MAX:
        raise InstanceError("objective values may exceed the signed 64-bit range")


@dataclass(frozen=True)
class VectorInstance:
    """Vector partition instance; ``A`` is ``d`` rows of ``n`` integers."""

    A: Matrix
    p: int
    shape: Shape
    objective: Objective
    kind = "vector"

    def __post_init__(self):
        try:
            A = as_matrix(self.A)
        except (TypeError, ValueError) as exc:
            raise InstanceError(f"attribute matrix must contain integers: {exc}") from None
        object.__setattr__(self, "A", A)
        if len(A) < 1:
            raise InstanceError("attribute dimension d must be at least 1")
        if len({len(row) for row in A}) != 1:
            raise InstanceError("dimension mismatch: rows of A have different lengths")
        if self.p < 1:
            raise InstanceError("part count p must be at least 1")
        n, a = self.n, self.a
        if n * a > INT64_MAX:
            raise InstanceError("attribute sums may exceed the signed 64-bit range")
        self.shape.check(self.p, n)
        _check_objective(self.objective, self.d, self.p, -n * a, n * a)

    @property
    def d(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0])

    @property
    def a(self) -> int:
        return attribute_bound(self.A)

    def attribute_matrix(self) -> Matrix:
        return self.A

    def sum_range(self) -> Tuple[int, int]:
        return -self.n * self.a, self.n * self.a


@dataclass(frozen=True)
class TypeInstance:
    """Type partition instance given by the type counts ``(n_1, ..., n_t)``."""

    counts: Tuple[int, ...]
    p: int
    shape: Shape
    objective: Objective
    kind = "type"

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if len(counts) < 1:
            raise InstanceError("type count t must be at least 1")
        if any(c < 0 for c in counts):
            raise InstanceError("negative counts are not allowed")
        if self.p < 1:
            raise InstanceError("part count p must be at least 1")
        if self.n > INT64_MAX:
            raise InstanceError("agent count exceeds the signed 64-bit range")
        self.shape.check(self.p, self.n)
        _check_objective(self.objective, self.t, self.p, 0, self.n)

    @property
    def t(self) -> int:
        return len(self.counts)

    d = t

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def a(self) -> int:
        return 1 if self.n else 0

    def agent_types(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.counts) for _ in range(c))

    def members(self) -> Tuple[Tuple[int, ...], ...]:
        out, start = [], 0
        for c in self.counts:
            out.append(tuple(range(start, start + c)))
            start += c
        return tuple(out)

    def attribute_matrix(self) -> Matrix:
        types = self.agent_types()
        return tuple(tuple(int(ty == i) for ty in types) for i in range(self.t))

    def sum_range(self) -> Tuple[int, int]:
        return 0, self.n


Instance = Union[VectorInstance, TypeInstance]


@dataclass(frozen=True)
class Solution:
    """An optimal admissible partition.

    ``sums`` is the ``d x p`` (or ``t x p``) matrix of per-part column sums;
    for type instances it coincides with ``counts``.
    """

    value: int
    assignment: Tuple[int, ...]
    sums: Matrix
    counts: Optional[Matrix] = None
    solver: str = ""
    stats: Dict[str, Any] = field(default_factory=dict, compare=False)
    status = "optimal"
    feasible = True


@dataclass(frozen=True)
class Infeasible:
    """No admissible partition exists."""

    reason: str = ""
    solver: str = ""
    stats: Dict[str, Any] = field(default_factory=dict, compare=False)
    status = "infeasible"
    feasible = False
    value = None


def partition_sums(A: Matrix, assignment: Sequence[int], p: int) -> Matrix:
    d = len(A)
    out = [[0] * p for _ in range(d)]
    for j, k in enumerate(assignment):
        for i in range(d):
            out[i][k] += A[i][j]
    return as_matrix(out)


def part_sizes(assignment: Sequence[int], p: int) -> Tuple[int, ...]:
    sizes = [0] * p
    for k in assignment:
        sizes[k] += 1
    return tuple(sizes)


def _check_assignment(instance: Instance, assignment: Sequence[int]) -> None:
    if len(assignment) != instance.n:
        raise InstanceError(f"assignment has length {len(assignment)}, expected n={instance.n}")
    if any(not 0 <= k < instance.p for k in assignment):
        raise InstanceError(f"assignment entries must lie in [0, {instance.p - 1}]")


def partition_cost(instance: Instance, assignment: Sequence[int]) -> int:
    """Objective value of ``assignment``; admissibility is not checked."""
    _check_assignment(instance, assignment)
    return instance.objective.evaluate(
        partition_sums(instance.attribute_matrix(), assignment, instance.p)
    )


def counts_cost(instance: TypeInstance, counts: Sequence[Sequence[int]]) -> int:
    """Objective of a type instance evaluated on a ``t x p`` counts matrix."""
    return instance.objective.evaluate(as_matrix(counts))


def is_admissible(instance: Instance, assignment: Sequence[int]) -> bool:
    _check_assignment(instance, assignment)
    n = instance.n
    return all(
        instance.shape.contains(k, s, n) for k, s in enumerate(part_sizes(assignment, instance.p))
    )


def counts_admissible(instance: TypeInstance, counts: Sequence[Sequence[int]]) -> bool:
    """True when ``counts`` has row sums ``n_i`` and admissible column sums."""
    if len(counts) != instance.t or any(len(r) != instance.p for r in counts):
        return False
    if any(v < 0 for r in counts for v in r):
        return False
    if any(sum(r) != c for r, c in zip(counts, instance.counts)):
        return False
    n = instance.n
    return all(
        instance.shape.contains(k, sum(r[k] for r in counts), n) for k in range(instance.p)
    )


def expand_counts(
    counts: Sequence[Sequence[int]], members: Sequence[Sequence[int]], p: int
) -> Tuple[int, ...]:
    """Turn a ``t x p`` counts matrix into an agent assignment.

    Part 0 receives the first ``counts[i][0]`` agents of each type ``i`` (in
    ascending agent order), part 1 the next ``counts[i][1]``, and so on.
    """
    n = sum(len(m) for m in members)
    out = [0] * n
    for i, mem in enumerate(members):
        pos = 0
        for k in range(p):
            for j in mem[pos : pos + counts[i][k]]:
                out[j] = k
            pos += counts[i][k]
        if pos != len(mem):
            raise InstanceError(f"counts of type {i} sum to {pos}, expected {len(mem)}")
    return tuple(out)


def counts_from_assignment(
    type_of: Sequence[int], t: int, assignment: Sequence[int], p: int
) -> Matrix:
    out = [[0] * p for _ in range(t)]
    for ty, k in zip(type_of, assignment):
        out[ty][k] += 1
    return as_matrix(out)


def validate_instance(raw) -> Instance:
    """Return a validated instance from an instance object or a raw mapping.

    Raw mappings use the instance file schema (see :mod:`vecpart.io`).
    Violations raise :class:`~vecpart.errors.InstanceError`.
    """
    if isinstance(raw, VectorInstance):
        return VectorInstance(raw.A, raw.p, raw.shape, raw.objective)
    if isinstance(raw, TypeInstance):
        return TypeInstance(raw.counts, raw.p, raw.shape, raw.objective)
    from .io import instance_from_dict

    return instance_from_dict(raw)
