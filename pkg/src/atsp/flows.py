"""Graph engine: multigraphs, max-flow/min-cut, integral min-cost flow
with node imbalances, Eulerian circuits, connectivity, and the cut-value
preserving symmetrization of balanced arc weights.

All operations are pure functions with documented lowest-index-first
tie-breaking, so identical inputs give identical outputs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .cuts import CutRecord, cut_record
from .errors import (
    DisconnectedError,
    ImbalanceSumError,
    InfeasibleError,
    NotBalancedError,
    NotEulerianError,
)
from .instance import CostMatrix

_EPS = 1e-12


@dataclass(frozen=True)
class IntegerMultiDigraph:
    """Integer arc multiplicities over vertices 0..n-1; no self-loops."""

    n: int
    mult: dict[tuple[int, int], int]

    def __post_init__(self):
        clean: dict[tuple[int, int], int] = {}
        for (v, w), k in self.mult.items():
            k = int(k)
            if k < 0:
                raise ValueError(f"negative multiplicity on arc ({v}, {w})")
            if v == w:
                raise ValueError(f"self-loop on vertex {v}")
            if not (0 <= v < self.n and 0 <= w < self.n):
                raise ValueError(f"arc ({v}, {w}) out of range")
            if k > 0:
                clean[(v, w)] = k
        object.__setattr__(self, "mult", clean)

    def arcs(self) -> list[tuple[int, int, int]]:
        return [(v, w, k) for (v, w), k in sorted(self.mult.items())]

    def out_degree(self, v: int) -> int:
        return sum(k for (a, _), k in self.mult.items() if a == v)

    def in_degree(self, v: int) -> int:
        return sum(k for (_, b), k in self.mult.items() if b == v)

    def total_arcs(self) -> int:
        return sum(self.mult.values())

    def total_cost(self, m: CostMatrix) -> float:
        return float(sum(k * m.c[v, w] for (v, w), k in self.mult.items()))

    def __add__(self, other: "IntegerMultiDigraph") -> "IntegerMultiDigraph":
        if self.n != other.n:
            raise ValueError("vertex counts differ")
        merged = dict(self.mult)
        for arc, k in other.mult.items():
            merged[arc] = merged.get(arc, 0) + k
        return IntegerMultiDigraph(self.n, merged)


def vertex_imbalances(g: IntegerMultiDigraph) -> list[int]:
    """out-degree minus in-degree per vertex; always sums to zero."""
    out = [0] * g.n
    for (v, w), k in g.mult.items():
        out[v] += k
        out[w] -= k
    return out


@dataclass(frozen=True)
class SymmetrizedWeights:
    """Weights on unordered pairs, the half-sum of the two arc directions."""

    n: int
    y: dict[frozenset[int], float]

    def boundary_weight(self, members: Iterable[int]) -> float:
        inside = set(members)
        total = 0.0
        for pair, weight in sorted(self.y.items(), key=lambda it: sorted(it[0])):
            a, b = sorted(pair)
            if (a in inside) != (b in inside):
                total += weight
        return total


def symmetrize(
    n: int, arcs: Mapping[tuple[int, int], float], tol: float = 1e-6
) -> SymmetrizedWeights:
    """Average each arc with its reverse. Requires vertex balance within
    tol, since only balanced weights have direction-free cut values."""
    net = [0.0] * n
    for (v, w), weight in arcs.items():
        net[v] += weight
        net[w] -= weight
    worst = max((abs(d) for d in net), default=0.0)
    if worst > tol:
        raise NotBalancedError(f"vertex imbalance {worst:.3g} exceeds {tol:.3g}")
    y: dict[frozenset[int], float] = {}
    for (v, w), weight in arcs.items():
        if weight == 0.0:
            continue
        key = frozenset((v, w))
        y[key] = y.get(key, 0.0) + weight / 2.0
    return SymmetrizedWeights(n, y)


def max_flow(
    n: int,
    capacities: Mapping[tuple[int, int], float],
    s: int,
    t: int,
) -> tuple[float, CutRecord]:
    """Dinic's blocking-flow algorithm.

    Returns the flow value and a minimum s-t cut U with s in U, whose
    outgoing capacity equals the value (exactly for integral capacities).
    """
    if s == t:
        raise ValueError("source equals sink")
    heads: list[list[int]] = [[] for _ in range(n)]
    cap: list[float] = []
    to: list[int] = []
    rev_of: list[int] = []

    def add_edge(u: int, v: int, c: float) -> None:
        heads[u].append(len(to))
        to.append(v)
        cap.append(c)
        heads[v].append(len(to))
        to.append(u)
        cap.append(0.0)

    merged: dict[tuple[int, int], float] = {}
    for (u, v), c in capacities.items():
        if u == v or c <= 0.0:
            continue
        merged[(u, v)] = merged.get((u, v), 0.0) + c
    for (u, v), c in sorted(merged.items()):
        add_edge(u, v, c)

    def bfs_levels() -> list[int]:
        level = [-1] * n
        level[s] = 0
        queue = [s]
        for u in queue:
            for e in heads[u]:
                v = to[e]
                if cap[e] > _EPS and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level

    def dfs_push(u: int, limit: float, level: list[int], it: list[int]) -> float:
        if u == t:
            return limit
        while it[u] < len(heads[u]):
            e = heads[u][it[u]]
            v = to[e]
            if cap[e] > _EPS and level[v] == level[u] + 1:
                pushed = dfs_push(v, min(limit, cap[e]), level, it)
                if pushed > _EPS:
                    cap[e] -= pushed
                    cap[e ^ 1] += pushed
                    return pushed
            it[u] += 1
        return 0.0

    value = 0.0
    while True:
        level = bfs_levels()
        if level[t] < 0:
            break
        it = [0] * n
        while True:
            pushed = dfs_push(s, float("inf"), level, it)
            if pushed <= _EPS:
                break
            value += pushed
    reachable = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        for e in heads[u]:
            v = to[e]
            if cap[e] > _EPS and v not in reachable:
                reachable.add(v)
                stack.append(v)
    members = tuple(sorted(reachable))
    return value, cut_record(n, merged, members)


def _ssp_network(g: IntegerMultiDigraph, costs, b: Sequence[int]):
    """Shared successive-shortest-path state over g plus super source/sink."""
    n = g.n
    size = n + 2
    source, sink = n, n + 1
    heads: list[list[int]] = [[] for _ in range(size)]
    to: list[int] = []
    cap: list[int] = []
    cost: list[float] = []
    arc_of: dict[int, tuple[int, int]] = {}

    def add_edge(u, v, c, w, orig=None):
        if orig is not None:
            arc_of[len(to)] = orig
        heads[u].append(len(to))
        to.append(v)
        cap.append(c)
        cost.append(w)
        heads[v].append(len(to))
        to.append(u)
        cap.append(0)
        cost.append(-w)

    for (v, w), k in sorted(g.mult.items()):
        c = 0.0 if costs is None else float(costs[v, w])
        add_edge(v, w, k, c, orig=(v, w))
    demand = 0
    for v in range(n):
        if b[v] < 0:
            add_edge(source, v, -b[v], 0.0)
        elif b[v] > 0:
            add_edge(v, sink, b[v], 0.0)
            demand += b[v]
    return size, source, sink, heads, to, cap, cost, arc_of, demand


def _infeasible_cut(g: IntegerMultiDigraph, reachable) -> CutRecord:
    # witness: vertices not reachable from the super source in the final
    # residual network form a cut with less incoming capacity than demand
    members = tuple(v for v in range(g.n) if v not in reachable)
    return cut_record(g.n, dict(g.mult), members)


def min_cost_flow(
    g: IntegerMultiDigraph, costs: CostMatrix, b: Sequence[int]
) -> IntegerMultiDigraph:
    """Integral min-cost transshipment within capacities g.

    b[v] is the required net inflow at v (negative for net outflow).
    Successive shortest augmenting paths with node potentials; valid since
    all costs are nonnegative. Raises InfeasibleError carrying a violated
    cut exactly when no transshipment within g exists.
    """
    if len(b) != g.n:
        raise ValueError("imbalance vector length mismatch")
    if sum(b) != 0:
        raise ImbalanceSumError(f"imbalances sum to {sum(b)}, not zero")
    size, source, sink, heads, to, cap, cost, arc_of, demand = _ssp_network(
        g, costs.c, b
    )
    potential = [0.0] * size
    shipped = 0
    while shipped < demand:
        dist = [float("inf")] * size
        prev_edge = [-1] * size
        dist[source] = 0.0
        pq = [(0.0, source)]
        while pq:
            d, u = heapq.heappop(pq)
            if d > dist[u] + _EPS:
                continue
            for e in heads[u]:
                if cap[e] <= 0:
                    continue
                v = to[e]
                nd = d + cost[e] + potential[u] - potential[v]
                if nd < dist[v] - _EPS:
                    dist[v] = nd
                    prev_edge[v] = e
                    heapq.heappush(pq, (nd, v))
        if dist[sink] == float("inf"):
            reachable = {v for v in range(size) if dist[v] < float("inf")}
            raise InfeasibleError(
                "transshipment infeasible: a cut has less capacity than demand",
                certificate=_infeasible_cut(g, reachable),
            )
        # capping at dist[sink] keeps every residual reduced cost nonnegative,
        # including arcs leaving vertices Dijkstra did not reach
        cap_dist = dist[sink]
        for v in range(size):
            potential[v] += min(dist[v], cap_dist)
        bottleneck = demand - shipped
        v = sink
        while v != source:
            e = prev_edge[v]
            bottleneck = min(bottleneck, cap[e])
            v = to[e ^ 1]
        v = sink
        while v != source:
            e = prev_edge[v]
            cap[e] -= bottleneck
            cap[e ^ 1] += bottleneck
            v = to[e ^ 1]
        shipped += bottleneck
    flow: dict[tuple[int, int], int] = {}
    for e, arc in arc_of.items():
        used = cap[e ^ 1]
        if used > 0:
            flow[arc] = used
    _check_slackness(heads, to, cap, cost, potential)
    return IntegerMultiDigraph(g.n, flow)


def _check_slackness(heads, to, cap, cost, potential) -> None:
    # optimality certificate: no residual arc has negative reduced cost
    for u in range(len(heads)):
        for e in heads[u]:
            if cap[e] > 0:
                reduced = cost[e] + potential[u] - potential[to[e]]
                assert reduced > -1e-9, f"complementary slackness violated: {reduced}"


def transshipment_certificate(
    g: IntegerMultiDigraph, b: Sequence[int]
) -> CutRecord | None:
    """Feasibility check alone: returns a violated cut, or None if a
    transshipment meeting the imbalances exists within capacities g.

    Pure max-flow on the super-source/super-sink reduction; costs are
    irrelevant to feasibility.
    """
    if sum(b) != 0:
        raise ImbalanceSumError(f"imbalances sum to {sum(b)}, not zero")
    n = g.n
    caps: dict[tuple[int, int], float] = {
        (v, w): float(k) for (v, w), k in g.mult.items()
    }
    demand = 0.0
    for v in range(n):
        if b[v] < 0:
            caps[(n, v)] = float(-b[v])
        elif b[v] > 0:
            caps[(v, n + 1)] = float(b[v])
            demand += b[v]
    if demand == 0:
        return None
    value, cut = max_flow(n + 2, caps, n, n + 1)
    if value >= demand - 1e-9:
        return None
    members = tuple(v for v in range(n) if v not in cut.members)
    return cut_record(n, dict(g.mult), members)


def euler_circuit(g: IntegerMultiDigraph) -> list[tuple[int, int]]:
    """Hierholzer's algorithm on a balanced, support-connected multigraph.

    Starts at the smallest vertex with positive degree and always leaves
    along the lowest-index head, so the walk is deterministic. Returns the
    closed walk as a list of arcs, each arc appearing multiplicity times.
    """
    imbalance = vertex_imbalances(g)
    if any(imbalance):
        bad = next(v for v in range(g.n) if imbalance[v])
        raise NotEulerianError(f"vertex {bad} has imbalance {imbalance[bad]}")
    support_vertices = sorted(
        {v for arc in g.mult for v in arc}
    )
    if not support_vertices:
        raise DisconnectedError("empty multigraph has no circuit")
    if not _support_connected(g, support_vertices):
        raise DisconnectedError("multigraph support is not weakly connected")
    remaining: dict[int, list[list[int]]] = {}
    for v in support_vertices:
        outs = sorted(
            (w, k) for (a, w), k in g.mult.items() if a == v
        )
        remaining[v] = [[w, k] for w, k in outs]
    pointer = {v: 0 for v in support_vertices}
    start = support_vertices[0]
    stack = [start]
    walk_rev: list[int] = []
    while stack:
        v = stack[-1]
        outs = remaining[v]
        i = pointer[v]
        while i < len(outs) and outs[i][1] == 0:
            i += 1
        pointer[v] = i
        if i == len(outs):
            walk_rev.append(stack.pop())
        else:
            outs[i][1] -= 1
            stack.append(outs[i][0])
    walk = walk_rev[::-1]
    return [(walk[i], walk[i + 1]) for i in range(len(walk) - 1)]


def _support_connected(g: IntegerMultiDigraph, support: list[int]) -> bool:
    adjacency: dict[int, set[int]] = {v: set() for v in support}
    for v, w in g.mult:
        adjacency[v].add(w)
        adjacency[w].add(v)
    seen = {support[0]}
    stack = [support[0]]
    while stack:
        u = stack.pop()
        for v in adjacency[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(support)


def is_weakly_connected(g: IntegerMultiDigraph) -> bool:
    """True iff all n vertices lie in one weakly connected component of
    the support. An isolated vertex therefore makes this false."""
    if g.n == 0:
        return True
    adjacency: list[set[int]] = [set() for _ in range(g.n)]
    for v, w in g.mult:
        adjacency[v].add(w)
        adjacency[w].add(v)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adjacency[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.n


def to_text(g: IntegerMultiDigraph) -> str:
    """Header ``n m`` then m lines ``v w mult`` in lexicographic order."""
    arcs = g.arcs()
    lines = [f"{g.n} {len(arcs)}"]
    lines.extend(f"{v} {w} {k}" for v, w, k in arcs)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> IntegerMultiDigraph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty multigraph text")
    n, m = (int(tok) for tok in lines[0].split())
    if len(lines) != m + 1:
        raise ValueError(f"expected {m} arcs, found {len(lines) - 1}")
    mult: dict[tuple[int, int], int] = {}
    for ln in lines[1:]:
        v, w, k = (int(tok) for tok in ln.split())
        mult[(v, w)] = mult.get((v, w), 0) + k
    return IntegerMultiDigraph(n, mult)
