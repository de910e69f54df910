"""Integer-programming models of the two partition problems and their certificates.

Vector model (binary assignment variables plus per-part sums)::

    sum_j A_aug[i][j] x[k,j] - y[k,i] = 0     k in parts, i = 0..d   (rows r[k,i])
    sum_k x[k,j] = 1                          j in agents            (rows s[j])
    0 <= x <= 1,  l_k <= y[k,0] <= u_k,  -na <= y[k,i] <= na

where row 0 of ``A_aug`` is all ones.  Type model (count variables)::

    sum_i x[k,i] - y[k] = 0                   k in parts
    sum_k x[k,i] = n_i                        i in types
    0 <= x[k,i] <= min(u_k, n_i),  l_k <= y[k] <= u_k

Variables are ordered x-block first (part-major), then the y-block; rows are
ordered as listed.  The certificates index vertices by these positions.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceeded, InstanceError, SolverNotApplicable
from .model import Infeasible, Instance, attribute_bound
from .objectives import CompletelySeparable, Matrix, as_matrix

DEFAULT_MAX_NODES = 10_000_000
DEFAULT_MAX_MINORS = 2_000_000


@dataclass(frozen=True)
class IPModel:
    kind: str
    matrix: Matrix
    rhs: Tuple[int, ...]
    lower: Tuple[int, ...]
    upper: Tuple[int, ...]
    terms: Tuple[Optional[object], ...]
    var_names: Tuple[str, ...]
    row_names: Tuple[str, ...]
    p: int
    d: int  # attribute dimension (vector) or number of types (type)
    n: int
    data: Matrix  # A for vector models, ((n_1, ..., n_t),) for type models

    @property
    def num_vars(self) -> int:
        return len(self.lower)

    @property
    def num_rows(self) -> int:
        return len(self.rhs)

    @property
    def has_objective(self) -> bool:
        return any(f is not None for f in self.terms)

    @property
    def bound_bits(self) -> float:
        """``log(max_j (u_j - l_j) + 1)``."""
        span = max((u - l for l, u in zip(self.lower, self.upper)), default=0)
        return math.log(max(span, 0) + 1)

    def array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=np.int64).reshape(self.num_rows, self.num_vars)

    def objective_value(self, point: Sequence[int]) -> int:
        return sum(f(z) for f, z in zip(self.terms, point) if f is not None)

    def is_feasible(self, point: Sequence[int]) -> bool:
        if len(point) != self.num_vars:
            return False
        if any(not l <= z <= u for z, l, u in zip(point, self.lower, self.upper)):
            return False
        return all(
            sum(c * z for c, z in zip(row, point)) == b for row, b in zip(self.matrix, self.rhs)
        )

    def to_text(self) -> str:
        """Line-oriented listing of variables, equations and objective terms."""
        lines = [f"# {self.kind} model: {self.num_vars} variables, {self.num_rows} equations"]
        for name, l, u in zip(self.var_names, self.lower, self.upper):
            lines.append(f"var {name} in [{l}, {u}]")
        for rname, row, b in zip(self.row_names, self.matrix, self.rhs):
            lhs = " ".join(
                f"{'+' if c > 0 else '-'}{abs(c)} {self.var_names[j]}" for j, c in enumerate(row) if c
            )
            lines.append(f"eq {rname}: {lhs or '0'} = {b}")
        for name, f in zip(self.var_names, self.terms):
            if f is not None:
                lines.append(f"obj {name}: {f!r}")
        return "\n".join(lines) + "\n"


def _interval(instance: Instance):
    bounds = instance.shape.interval_bounds(instance.p, instance.n)
    if bounds is None:
        raise SolverNotApplicable("IP models require an interval (bounded) shape")
    return bounds


def build_vector_ip(instance: Instance) -> IPModel:
    """Binary-assignment model for a vector instance with an interval shape.

    Objective terms are attached when the objective is completely separable;
    otherwise only the constraint system is built.
    """
    l, u = _interval(instance)
    A = instance.attribute_matrix()
    d, n, p = instance.d, instance.n, instance.p
    na = n * attribute_bound(A)
    aug = ((1,) * n,) + tuple(A)
    nx = p * n
    nvars = p * (n + d + 1)
    rows: List[List[int]] = []
    rhs: List[int] = []
    row_names: List[str] = []
    for k in range(p):
        for i in range(d + 1):
            row = [0] * nvars
            for j in range(n):
                row[k * n + j] = aug[i][j]
            row[nx + k * (d + 1) + i] = -1
            rows.append(row)
            rhs.append(0)
            row_names.append(f"r[{k + 1},{i}]")
    for j in range(n):
        row = [0] * nvars
        for k in range(p):
            row[k * n + j] = 1
        rows.append(row)
        rhs.append(1)
        row_names.append(f"s[{j + 1}]")

    lower = [0] * nx
    upper = [1] * nx
    names = [f"x[{k + 1},{j + 1}]" for k in range(p) for j in range(n)]
    terms: List[Optional[object]] = [None] * nx
    objective = instance.objective if isinstance(instance.objective, CompletelySeparable) else None
    for k in range(p):
        for i in range(d + 1):
            names.append(f"y[{k + 1},{i}]")
            if i == 0:
                lower.append(l[k])
                upper.append(u[k])
                terms.append(None)
            else:
                lower.append(-na)
                upper.append(na)
                terms.append(objective.terms[k][i - 1] if objective else None)
    return IPModel(
        kind="vector",
        matrix=as_matrix(rows),
        rhs=tuple(rhs),
        lower=tuple(lower),
        upper=tuple(upper),
        terms=tuple(terms),
        var_names=tuple(names),
        row_names=tuple(row_names),
        p=p,
        d=d,
        n=n,
        data=as_matrix(A),
    )


def build_type_ip(instance: Instance) -> IPModel:
    """Count model for a type instance with an interval shape."""
    if instance.kind != "type":
        raise SolverNotApplicable("build_type_ip requires a type instance")
    l, u = _interval(instance)
    t, p, counts = instance.t, instance.p, instance.counts
    nx = p * t
    nvars = nx + p
    rows, rhs, row_names = [], [], []
    for k in range(p):
        row = [0] * nvars
        for i in range(t):
            row[k * t + i] = 1
        row[nx + k] = -1
        rows.append(row)
        rhs.append(0)
        row_names.append(f"r[{k + 1}]")
    for i in range(t):
        row = [0] * nvars
        for k in range(p):
            row[k * t + i] = 1
        rows.append(row)
        rhs.append(counts[i])
        row_names.append(f"s[{i + 1}]")
    objective = instance.objective if isinstance(instance.objective, CompletelySeparable) else None
    lower = [0] * nx + list(l)
    upper = [min(u[k], counts[i]) for k in range(p) for i in range(t)] + list(u)
    names = [f"x[{k + 1},{i + 1}]" for k in range(p) for i in range(t)]
    names += [f"y[{k + 1}]" for k in range(p)]
    terms = [objective.terms[k][i] if objective else None for k in range(p) for i in range(t)]
    terms += [None] * p
    return IPModel(
        kind="type",
        matrix=as_matrix(rows),
        rhs=tuple(rhs),
        lower=tuple(lower),
        upper=tuple(upper),
        terms=tuple(terms),
        var_names=tuple(names),
        row_names=tuple(row_names),
        p=p,
        d=t,
        n=instance.n,
        data=(tuple(counts),),
    )


# --------------------------------------------------------------------------
# graph of a matrix and tree-depth certificates


@dataclass(frozen=True)
class ConstraintGraph:
    """Graph on the columns of a matrix; ``edges`` holds pairs ``(i, j)`` with ``i < j``."""

    num_vertices: int
    edges: frozenset

    def neighbors(self, v: int) -> List[int]:
        return sorted(j if i == v else i for i, j in self.edges if v in (i, j))


def transpose(M: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*M)) if M else ()


def constraint_graph(M: Sequence[Sequence[int]], num_columns: Optional[int] = None) -> ConstraintGraph:
    """Columns ``j, k`` are adjacent iff some row is nonzero in both."""
    ncols = num_columns if num_columns is not None else (len(M[0]) if M else 0)
    edges = set()
    for row in M:
        nz = [j for j, v in enumerate(row) if v]
        edges.update(combinations(nz, 2))
    return ConstraintGraph(ncols, frozenset(edges))


def model_row_graph(model: IPModel) -> ConstraintGraph:
    """``G(B^T)``: vertices are the model's equations."""
    return constraint_graph(transpose(model.matrix), num_columns=model.num_rows)


@dataclass(frozen=True)
class RootedTreeCertificate:
    """Rooted tree given by parent pointers (``None`` marks the root)."""

    parent: Tuple[Optional[int], ...]

    @property
    def num_vertices(self) -> int:
        return len(self.parent)

    def depths(self) -> Optional[List[int]]:
        """Number of vertices on each root path, or ``None`` if not a rooted tree."""
        n = len(self.parent)
        if sum(1 for q in self.parent if q is None) != 1:
            return None
        depth: List[Optional[int]] = [None] * n
        for v in range(n):
            path, u = [], v
            while u is not None and depth[u] is None:
                if u in path or not (self.parent[u] is None or 0 <= self.parent[u] < n):
                    return None
                path.append(u)
                u = self.parent[u]
            base = 0 if u is None else depth[u]
            for w in reversed(path):
                base += 1
                depth[w] = base
        return depth

    @property
    def height(self) -> int:
        depth = self.depths()
        if depth is None:
            raise ValueError("parent pointers do not form a rooted tree")
        return max(depth, default=0)

    def root_path(self, v: int) -> List[int]:
        out = []
        while v is not None:
            out.append(v)
            v = self.parent[v]
        return out


def verify_valid_tree(graph: ConstraintGraph, tree: RootedTreeCertificate) -> bool:
    """True iff every edge joins a vertex to one of its ancestors."""
    if tree.num_vertices != graph.num_vertices:
        raise ValueError(
            f"vertex-set mismatch: tree has {tree.num_vertices}, graph has {graph.num_vertices}"
        )
    if tree.depths() is None:
        return False
    ancestors = [set(tree.root_path(v)) for v in range(tree.num_vertices)]
    return all(i in ancestors[j] or j in ancestors[i] for i, j in graph.edges)


def tree_depth_certificate(model: IPModel) -> RootedTreeCertificate:
    """Path through the ``r[k,i]`` rows with every ``s[j]`` hung below the last one."""
    if model.kind != "vector":
        raise ValueError("model shape mismatch: tree certificate needs a vector model")
    nr = model.p * (model.d + 1)
    if model.num_rows != nr + model.n:
        raise ValueError("model shape mismatch: unexpected number of equations")
    parent: List[Optional[int]] = [None] + list(range(nr - 1))
    parent += [nr - 1] * model.n
    return RootedTreeCertificate(tuple(parent))


# --------------------------------------------------------------------------
# total unimodularity


@dataclass(frozen=True)
class TuCertificate:
    """Row 2-coloring witnessing the two-nonzeros-per-column TU condition."""

    colors: Tuple[int, ...]


@dataclass(frozen=True)
class NotApplicable:
    reason: str


def verify_tu_condition(M: Sequence[Sequence[int]]):
    """Find a row coloring for the sufficient TU condition.

    Entries must be in {-1, 0, 1} with at most two nonzeros per column; a
    column with two same-sign entries forces its rows apart, opposite signs
    force them together.  Returns :class:`TuCertificate` or
    :class:`NotApplicable`.
    """
    m = len(M)
    ncols = len(M[0]) if m else 0
    links: List[List[Tuple[int, int]]] = [[] for _ in range(m)]
    for j in range(ncols):
        nz = [(r, M[r][j]) for r in range(m) if M[r][j]]
        if any(v not in (-1, 1) for _, v in nz):
            return NotApplicable(f"column {j} has an entry outside {{-1, 0, 1}}")
        if len(nz) > 2:
            return NotApplicable(f"column {j} has more than two nonzero entries")
        if len(nz) == 2:
            (r1, v1), (r2, v2) = nz
            if r1 == r2:
                continue
            parity = 1 if v1 == v2 else 0
            links[r1].append((r2, parity))
            links[r2].append((r1, parity))
    colors: List[Optional[int]] = [None] * m
    for start in range(m):
        if colors[start] is not None:
            continue
        colors[start] = 0
        queue = deque([start])
        while queue:
            r = queue.popleft()
            for s, parity in links[r]:
                want = colors[r] ^ parity
                if colors[s] is None:
                    colors[s] = want
                    queue.append(s)
                elif colors[s] != want:
                    return NotApplicable(f"rows {r} and {s} admit no consistent coloring")
    return TuCertificate(tuple(colors))


def _bareiss_det(mat: List[List[int]]) -> int:
    a = [row[:] for row in mat]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def subdeterminant_check(
    M: Sequence[Sequence[int]], max_order: int, max_minors: int = DEFAULT_MAX_MINORS
) -> bool:
    """True iff every square submatrix of order <= ``max_order`` has det in {-1, 0, 1}."""
    m = len(M)
    ncols = len(M[0]) if m else 0
    top = min(max_order, m, ncols)
    total = sum(math.comb(m, k) * math.comb(ncols, k) for k in range(1, top + 1))
    if total > max_minors:
        raise BudgetExceeded(f"{total} minors exceed the budget of {max_minors}")
    rows = [list(r) for r in M]
    for k in range(1, top + 1):
        for rs in combinations(range(m), k):
            sub_rows = [rows[r] for r in rs]
            for cs in combinations(range(ncols), k):
                if _bareiss_det([[row[c] for c in cs] for row in sub_rows]) not in (-1, 0, 1):
                    return False
    return True


# --------------------------------------------------------------------------
# exhaustive lattice-point search


def enumerate_ip_points(model: IPModel, max_nodes: int = DEFAULT_MAX_NODES) -> Iterator[Tuple[int, ...]]:
    """All feasible integer points, in lexicographic order.

    Depth-first over the variables in model order; each variable's range is
    narrowed to values that keep every equation it touches satisfiable by the
    still-free variables' bounds.  Raises :class:`BudgetExceeded` after
    ``max_nodes`` search nodes.
    """
    nv, M, b = model.num_vars, model.matrix, model.rhs
    lo, hi = model.lower, model.upper
    if any(l > u for l, u in zip(lo, hi)):
        return
    var_rows: List[List[Tuple[int, int]]] = [[] for _ in range(nv)]
    rem_min = [0] * len(M)
    rem_max = [0] * len(M)
    for r, row in enumerate(M):
        for j, c in enumerate(row):
            if c:
                var_rows[j].append((r, c))
                rem_min[r] += min(c * lo[j], c * hi[j])
                rem_max[r] += max(c * lo[j], c * hi[j])
    partial = [0] * len(M)
    if any(not rem_min[r] <= b[r] <= rem_max[r] for r in range(len(M))):
        return
    point = [0] * nv
    nodes = [0]

    def search(j: int):
        if j == nv:
            yield tuple(point)
            return
        vmin, vmax = lo[j], hi[j]
        for r, c in var_rows[j]:
            own_min, own_max = min(c * lo[j], c * hi[j]), max(c * lo[j], c * hi[j])
            slack_lo = b[r] - partial[r] - (rem_max[r] - own_max)
            slack_hi = b[r] - partial[r] - (rem_min[r] - own_min)
            # need slack_lo <= c * v <= slack_hi
            if c > 0:
                vmin = max(vmin, -((-slack_lo) // c))
                vmax = min(vmax, slack_hi // c)
            else:
                vmin = max(vmin, -((-slack_hi) // c))
                vmax = min(vmax, slack_lo // c)
        if vmin > vmax:
            return
        for r, c in var_rows[j]:
            rem_min[r] -= min(c * lo[j], c * hi[j])
            rem_max[r] -= max(c * lo[j], c * hi[j])
        for v in range(vmin, vmax + 1):
            nodes[0] += 1
            if nodes[0] > max_nodes:
                raise BudgetExceeded(f"lattice search exceeded {max_nodes} nodes")
            point[j] = v
            for r, c in var_rows[j]:
                partial[r] += c * v
            yield from search(j + 1)
            for r, c in var_rows[j]:
                partial[r] -= c * v
        for r, c in var_rows[j]:
            rem_min[r] += min(c * lo[j], c * hi[j])
            rem_max[r] += max(c * lo[j], c * hi[j])

    yield from search(0)


def count_ip_points(model: IPModel, max_nodes: int = DEFAULT_MAX_NODES) -> int:
    return sum(1 for _ in enumerate_ip_points(model, max_nodes))


@dataclass(frozen=True)
class IPSolution:
    point: Tuple[int, ...]
    value: int
    status = "optimal"
    feasible = True


def solve_ip_exhaustive(model: IPModel, max_nodes: int = DEFAULT_MAX_NODES):
    """Optimal feasible point (lexicographically first among optima) or :class:`Infeasible`."""
    if not model.has_objective:
        raise SolverNotApplicable("model carries no separable objective")
    best = None
    for point in enumerate_ip_points(model, max_nodes):
        value = model.objective_value(point)
        if best is None or value < best.value:
            best = IPSolution(point, value)
    if best is None:
        return Infeasible("no feasible lattice point", solver="ip-exhaustive")
    return best


# --------------------------------------------------------------------------
# read-off maps between lattice points and partitions


def ip_solution_to_partition(model: IPModel, point: Sequence[int]):
    """Assignment tuple (vector model) or ``t x p`` counts matrix (type model)."""
    if not model.is_feasible(point):
        raise InstanceError("point is not feasible for the model")
    p, n, d = model.p, model.n, model.d
    if model.kind == "vector":
        return tuple(next(k for k in range(p) if point[k * n + j] == 1) for j in range(n))
    return as_matrix([[point[k * d + i] for k in range(p)] for i in range(d)])


def partition_to_ip_point(model: IPModel, partition) -> Tuple[int, ...]:
    """Inverse of :func:`ip_solution_to_partition`; rejects inadmissible input."""
    p, n, d = model.p, model.n, model.d
    if model.kind == "vector":
        if len(partition) != n or any(not 0 <= k < p for k in partition):
            raise InstanceError("assignment does not match the model dimensions")
        x = [0] * (p * n)
        for j, k in enumerate(partition):
            x[k * n + j] = 1
        aug = ((1,) * n,) + tuple(model.data)
        y = [
            sum(aug[i][j] for j in range(n) if partition[j] == k) for k in range(p) for i in range(d + 1)
        ]
        point = tuple(x + y)
    else:
        if len(partition) != d or any(len(r) != p for r in partition):
            raise InstanceError("counts matrix does not match the model dimensions")
        x = [partition[i][k] for k in range(p) for i in range(d)]
        y = [sum(partition[i][k] for i in range(d)) for k in range(p)]
        point = tuple(x + y)
    if not model.is_feasible(point):
        raise InstanceError("partition is not admissible for the model")
    return point
