"""Completely separable convex type partition as a convex-cost transportation flow.

Nodes: ``0`` is the super-source, ``1..t`` the types (supply ``n_i``),
``t+1..t+p`` the parts, ``t+p+1`` the super-sink.  Type ``i`` and part
``k`` are joined by a bundle of ``min(u_k, n_i)`` unit increments, the
``r``-th costing ``g_{k,i}(r) - g_{k,i}(r-1)``.  Convexity makes these
marginals nondecreasing, so a bundle carrying ``x`` units always uses its
first ``x`` increments; a bundle is therefore stored as one arc whose
residual costs are the next and the last increment.

Each part reaches the sink through a window arc ``[l_k, u_k]``: its
mandatory ``l_k`` units are fixed up front (a deficit of ``l_k`` at the
part) and the optional ``u_k - l_k`` units form an ordinary zero-cost arc.
The solver is successive shortest paths with node potentials; the first
potentials come from a Bellman-Ford pass because increments may be
negative.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InstanceError, SolverNotApplicable
from .model import Infeasible, Solution, TypeInstance, expand_counts
from .objectives import CompletelySeparable, as_matrix, is_convex_on


@dataclass(frozen=True)
class ConvexityReport:
    """``terms[(k, i)] = (convex, first violating point or None)``."""

    terms: Dict[Tuple[int, int], Tuple[bool, Optional[int]]]

    @property
    def convex(self) -> bool:
        return all(ok for ok, _ in self.terms.values())

    def violations(self) -> List[Tuple[int, int, int]]:
        return [(k, i, x) for (k, i), (ok, x) in sorted(self.terms.items()) if not ok]


def check_convexity(objective: CompletelySeparable, domains) -> ConvexityReport:
    """Scan each term ``f_{k,i}`` for convexity on its domain.

    ``domains`` is one ``(lo, hi)`` pair for every term or a mapping
    ``(k, i) -> (lo, hi)``.  Declarative families other than tables are
    convex by construction and are not scanned.
    """
    out = {}
    for k, row in enumerate(objective.terms):
        for i, f in enumerate(row):
            lo, hi = domains[(k, i)] if isinstance(domains, dict) else domains
            if getattr(f, "convex", None) is not True and hasattr(f, "covers") and not f.covers(lo, hi):
                raise InstanceError(f"table does not cover reachable domain [{lo}, {hi}]")
            out[(k, i)] = is_convex_on(f, lo, hi)
    return ConvexityReport(out)


@dataclass(frozen=True)
class Bundle:
    type_index: int
    part: int
    capacity: int
    func: object


@dataclass(frozen=True)
class FlowNetwork:
    counts: Tuple[int, ...]
    lower: Tuple[int, ...]
    upper: Tuple[int, ...]
    bundles: Tuple[Bundle, ...]
    infeasible: Optional[str] = None

    @property
    def t(self) -> int:
        return len(self.counts)

    @property
    def p(self) -> int:
        return len(self.lower)

    @property
    def num_nodes(self) -> int:
        return 2 + self.t + self.p

    @property
    def increment_arcs(self) -> int:
        return sum(b.capacity for b in self.bundles)

    @property
    def window_arcs(self) -> int:
        return self.p

    def bundle(self, i: int, k: int) -> Bundle:
        return self.bundles[k * self.t + i]


def build_flow_network(instance: TypeInstance) -> FlowNetwork:
    """Transportation network for a convex, completely separable type instance.

    Raises :class:`SolverNotApplicable` when a hypothesis fails.  When the
    windows cannot absorb the supply the returned network carries an
    ``infeasible`` reason instead of raising.
    """
    if instance.kind != "type":
        raise SolverNotApplicable("flow requires completely separable convex type instance")
    objective = instance.objective
    if not isinstance(objective, CompletelySeparable):
        raise SolverNotApplicable("flow requires completely separable convex type instance")
    bounds = instance.shape.interval_bounds(instance.p, instance.n)
    if bounds is None:
        raise SolverNotApplicable("flow requires an interval shape")
    l, u = bounds
    t, p, counts = instance.t, instance.p, instance.counts
    caps = {(k, i): min(u[k], counts[i]) for k in range(p) for i in range(t)}
    report = check_convexity(objective, {key: (0, cap) for key, cap in caps.items()})
    if not report.convex:
        k, i, x = report.violations()[0]
        raise SolverNotApplicable(
            f"term (part {k + 1}, type {i + 1}) is not convex at {x}; use dp-separable or dp-general"
        )
    bundles = tuple(
        Bundle(i, k, caps[(k, i)], objective.terms[k][i]) for k in range(p) for i in range(t)
    )
    n = instance.n
    reason = None
    if sum(l) > n:
        reason = f"lower bounds sum to {sum(l)} > n = {n}"
    elif sum(u) < n:
        reason = f"upper bounds sum to {sum(u)} < n = {n}"
    return FlowNetwork(tuple(counts), tuple(l), tuple(u), bundles, reason)


@dataclass
class FlowResult:
    x: Tuple[Tuple[int, ...], ...]  # t x p bundle flows
    window: Tuple[int, ...]  # flow through each part's window arc, l_k included
    cost: int  # sum of g(x) - g(0) over bundles
    potentials: Tuple[int, ...]
    stats: Dict[str, int] = field(default_factory=dict)
    status = "optimal"
    feasible = True


class _Residual:
    """Arc-list residual graph.  Arc ``e`` runs ``tail[e] -> head[e]``."""

    def __init__(self, network: FlowNetwork):
        t, p = network.t, network.p
        self.t, self.p = t, p
        self.sink = t + p + 1
        self.tail: List[int] = []
        self.head: List[int] = []
        self.cap: List[int] = []
        self.flow: List[int] = []
        self.func: List[Optional[object]] = []
        for i, c in enumerate(network.counts):
            self._arc(0, 1 + i, c, None)
        self.bundle_arc = {}
        for b in network.bundles:
            self.bundle_arc[(b.type_index, b.part)] = len(self.tail)
            self._arc(1 + b.type_index, 1 + t + b.part, b.capacity, b.func)
        self.window_arc = []
        for k in range(p):
            self.window_arc.append(len(self.tail))
            self._arc(1 + t + k, self.sink, network.upper[k] - network.lower[k], None)
        self.out: List[List[int]] = [[] for _ in range(t + p + 2)]
        self.inc: List[List[int]] = [[] for _ in range(t + p + 2)]
        for e in range(len(self.tail)):
            self.out[self.tail[e]].append(e)
            self.inc[self.head[e]].append(e)
        self.fwd = [0] * len(self.tail)
        self.bwd = [0] * len(self.tail)
        for e in range(len(self.tail)):
            self._reprice(e)

    def _arc(self, a, b, cap, func):
        self.tail.append(a)
        self.head.append(b)
        self.cap.append(cap)
        self.flow.append(0)
        self.func.append(func)

    def _reprice(self, e: int) -> None:
        g, f = self.func[e], self.flow[e]
        if g is None:
            return
        if f < self.cap[e]:
            self.fwd[e] = g(f + 1) - g(f)
        if f > 0:
            self.bwd[e] = -(g(f) - g(f - 1))

    def arcs_from(self, u: int):
        """Residual arcs out of ``u`` as ``(v, cost, arc, direction)``."""
        for e in self.out[u]:
            if self.flow[e] < self.cap[e]:
                yield self.head[e], self.fwd[e], e, 1
        for e in self.inc[u]:
            if self.flow[e] > 0:
                yield self.tail[e], self.bwd[e], e, -1

    def run_length(self, e: int, direction: int, limit: int) -> int:
        """Units that can move over arc ``e`` at its current marginal cost."""
        g = self.func[e]
        if g is None or limit <= 1:
            return limit
        f = self.flow[e]
        if direction == 1:
            m = self.fwd[e]
            r = 1
            while r < limit and g(f + r + 1) - g(f + r) == m:
                r += 1
        else:
            m = self.bwd[e]
            r = 1
            while r < limit and -(g(f - r) - g(f - r - 1)) == m:
                r += 1
        return r


def _bellman_ford(res: _Residual, source: int) -> List[Optional[int]]:
    n = res.t + res.p + 2
    dist: List[Optional[int]] = [None] * n
    dist[source] = 0
    for _ in range(n):
        changed = False
        for u in range(n):
            if dist[u] is None:
                continue
            for v, c, _, _ in res.arcs_from(u):
                if dist[v] is None or dist[u] + c < dist[v]:
                    dist[v] = dist[u] + c
                    changed = True
        if not changed:
            return dist
    raise RuntimeError("negative cycle in the initial residual network")


def solve_min_cost_flow(network: FlowNetwork):
    """Integral min-cost flow routing all ``n`` units within the sink windows.

    Returns :class:`FlowResult` or :class:`~vecpart.model.Infeasible`.
    """
    if network.infeasible:
        return Infeasible(network.infeasible, solver="flow")
    res = _Residual(network)
    t, p, sink = res.t, res.p, res.sink
    num = t + p + 2
    n = sum(network.counts)
    excess = n
    deficit = [0] * num
    for k in range(p):
        deficit[1 + t + k] = network.lower[k]
    deficit[sink] = n - sum(network.lower)

    init = _bellman_ford(res, 0)
    reached = [d for d in init if d is not None]
    pi = [d if d is not None else max(reached) for d in init]
    augmentations = 0
    out, inc, head, tail = res.out, res.inc, res.head, res.tail
    flow, cap, fwd, bwd = res.flow, res.cap, res.fwd, res.bwd
    while excess > 0:
        dist: List[Optional[int]] = [None] * num
        pred: List[Optional[Tuple[int, int]]] = [None] * num
        dist[0] = 0
        heap = [(0, 0)]
        done = [False] * num
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            base = d + pi[u]
            for e in out[u]:
                if flow[e] < cap[e]:
                    v = head[e]
                    nd = base + fwd[e] - pi[v]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        pred[v] = (e, 1)
                        heapq.heappush(heap, (nd, v))
            for e in inc[u]:
                if flow[e] > 0:
                    v = tail[e]
                    nd = base + bwd[e] - pi[v]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        pred[v] = (e, -1)
                        heapq.heappush(heap, (nd, v))
        targets = [v for v in range(num) if deficit[v] > 0 and dist[v] is not None]
        if not targets:
            return Infeasible("remaining supply cannot reach any part window", solver="flow")
        target = min(targets, key=lambda v: (dist[v], v))
        far = max(dv for dv in dist if dv is not None)
        for v in range(num):
            pi[v] += dist[v] if dist[v] is not None else far

        path = []
        delta = min(excess, deficit[target])
        v = target
        while v != 0:
            e, direction = pred[v]
            path.append((e, direction))
            delta = min(delta, res.cap[e] - res.flow[e] if direction == 1 else res.flow[e])
            v = res.tail[e] if direction == 1 else res.head[e]
        for e, direction in path:
            delta = res.run_length(e, direction, delta)
        for e, direction in path:
            res.flow[e] += direction * delta
            res._reprice(e)
        excess -= delta
        deficit[target] -= delta
        augmentations += 1

    x = [[0] * p for _ in range(t)]
    cost = 0
    for b in network.bundles:
        f = res.flow[res.bundle_arc[(b.type_index, b.part)]]
        x[b.type_index][b.part] = f
        cost += b.func(f) - b.func(0)
    window = tuple(network.lower[k] + res.flow[res.window_arc[k]] for k in range(p))
    return FlowResult(
        x=as_matrix(x),
        window=window,
        cost=cost,
        potentials=tuple(pi),
        stats={
            "augmentations": augmentations,
            "nodes": network.num_nodes,
            "increment_arcs": network.increment_arcs,
            "window_arcs": network.window_arcs,
        },
    )


def residual_negative_cycle(network: FlowNetwork, x: Sequence[Sequence[int]]) -> bool:
    """True iff the residual network of bundle flows ``x`` has a negative cycle.

    Window and supply arcs are reconstructed from ``x``; a False answer
    certifies optimality of the flow.
    """
    res = _Residual(network)
    t, p = network.t, network.p
    for b in network.bundles:
        e = res.bundle_arc[(b.type_index, b.part)]
        res.flow[e] = x[b.type_index][b.part]
        res._reprice(e)
    for i in range(t):
        res.flow[i] = sum(x[i])
    for k in range(p):
        res.flow[res.window_arc[k]] = sum(x[i][k] for i in range(t)) - network.lower[k]
    num = t + p + 2
    dist = [0] * num
    for it in range(num + 1):
        changed = False
        for u in range(num):
            for v, c, _, _ in res.arcs_from(u):
                if dist[u] + c < dist[v]:
                    dist[v] = dist[u] + c
                    changed = True
        if not changed:
            return False
    return True


def flow_to_partition(network: FlowNetwork, flow: FlowResult, instance: TypeInstance) -> Solution:
    """Read the counts matrix off the bundle flows."""
    x = flow.x
    value = flow.cost + sum(b.func(0) for b in network.bundles)
    return Solution(
        value=value,
        assignment=expand_counts(x, instance.members(), instance.p),
        sums=x,
        counts=x,
        solver="flow",
        stats=dict(flow.stats),
    )


def solve_flow_type(instance: TypeInstance):
    """Build, solve and read off; :class:`Solution` or :class:`Infeasible`."""
    network = build_flow_network(instance)
    flow = solve_min_cost_flow(network)
    if not flow.feasible:
        return flow
    return flow_to_partition(network, flow, instance)
