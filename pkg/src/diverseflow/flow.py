"""Classical exact network-flow kernels.

Everything is integer arithmetic on adjacency arrays: Dinic for max s-t
flow, successive shortest paths with Dijkstra, node potentials and capacity
scaling for min-cost flows with vertex demands, plus residual graphs and
feasible dual potentials.  Arc order is insertion order throughout, which
makes every solve deterministic.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

from .errors import InternalInvariantError

__all__ = [
    "FlowNetwork",
    "Flow",
    "ResidualGraph",
    "max_flow",
    "min_cut_side",
    "min_cost_bflow",
    "residual_graph",
    "feasible_potential",
]

_INT_BOUND = 1 << 62


@dataclass(frozen=True)
class FlowNetwork:
    """Integer-capacity (optionally costed and demand-constrained) digraph.

    arcs are (tail, head, capacity, cost) tuples; demands, when present,
    must sum to zero for feasibility.
    """

    n: int
    arcs: tuple[tuple[int, int, int, int], ...]
    demands: tuple[int, ...] | None = None

    def __post_init__(self):
        for a, (u, v, cap, cost) in enumerate(self.arcs):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc {a} endpoint outside vertex range")
            if cap < 0:
                raise ValueError(f"arc {a} has negative capacity {cap}")
            if abs(cap) >= _INT_BOUND or abs(cost) >= _INT_BOUND:
                raise OverflowError(f"arc {a} exceeds 64-bit bounds")
        if self.demands is not None:
            if len(self.demands) != self.n:
                raise ValueError("demand vector length mismatch")
            if any(abs(d) >= _INT_BOUND for d in self.demands):
                raise OverflowError("demand exceeds 64-bit bounds")

    @staticmethod
    def build(n, arcs, demands=None) -> "FlowNetwork":
        """Accept (u, v, cap) or (u, v, cap, cost) arc tuples."""
        full = tuple((a[0], a[1], a[2], a[3] if len(a) > 3 else 0) for a in arcs)
        return FlowNetwork(n, full, None if demands is None else tuple(demands))


@dataclass(frozen=True)
class Flow:
    """Per-arc flow values, aligned with the owning network's arc list."""

    values: tuple[int, ...]

    def boundary(self, net: FlowNetwork) -> list[int]:
        """net outflow minus inflow per vertex."""
        b = [0] * net.n
        for (u, v, _c, _g), f in zip(net.arcs, self.values):
            b[u] += f
            b[v] -= f
        return b


@dataclass(frozen=True)
class ResidualGraph:
    """Arcs with positive residual capacity, carrying dual lengths.

    Forward arcs keep the original cost as length, backward arcs the negated
    cost.  kind is "fwd" or "bwd"; arc_index points back into the network.
    """

    n: int
    arcs: tuple[tuple[int, int, int, int, str, int], ...]  # (u, v, length, residual, kind, arc_index)


def residual_graph(net: FlowNetwork, flow: Flow) -> ResidualGraph:
    arcs = []
    for a, ((u, v, cap, cost), f) in enumerate(zip(net.arcs, flow.values)):
        if not 0 <= f <= cap:
            raise ValueError(f"arc {a}: flow {f} outside [0, {cap}]")
        if f < cap:
            arcs.append((u, v, cost, cap - f, "fwd", a))
        if f > 0:
            arcs.append((v, u, -cost, f, "bwd", a))
    return ResidualGraph(net.n, tuple(arcs))


class _Adj:
    """Paired-slot residual arrays: slot 2a is arc a, slot 2a^1 its reverse."""

    def __init__(self, net: FlowNetwork):
        self.n = net.n
        m = len(net.arcs)
        self.frm = [0] * (2 * m)
        self.to = [0] * (2 * m)
        self.res = [0] * (2 * m)
        self.cost = [0] * (2 * m)
        self.adj = [[] for _ in range(net.n)]
        for a, (u, v, cap, cost) in enumerate(net.arcs):
            j = 2 * a
            self.frm[j], self.to[j], self.res[j], self.cost[j] = u, v, cap, cost
            self.frm[j + 1], self.to[j + 1], self.res[j + 1], self.cost[j + 1] = v, u, 0, -cost
            self.adj[u].append(j)
            self.adj[v].append(j + 1)

    def flow_values(self) -> tuple[int, ...]:
        return tuple(self.res[2 * a + 1] for a in range(len(self.res) // 2))


def _dinic(adj: _Adj, s: int, t: int) -> int:
    n, to, res, nbrs = adj.n, adj.to, adj.res, adj.adj
    total = 0
    while True:
        level = [-1] * n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for j in nbrs[u]:
                v = to[j]
                if res[j] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        if level[t] < 0:
            return total
        it = [0] * n
        frm = adj.frm

        # iterative blocking flow: walk admissible arcs, augment on reaching
        # t, retreat past exhausted vertices
        path = []
        u = s
        while True:
            if u == t:
                pushed = min(res[j] for j in path)
                total += pushed
                for j in path:
                    res[j] -= pushed
                    res[j ^ 1] += pushed
                # restart from the tail of the first saturated arc
                cut = next(i for i, j in enumerate(path) if res[j] == 0)
                u = frm[path[cut]]
                del path[cut:]
                continue
            if it[u] < len(nbrs[u]):
                j = nbrs[u][it[u]]
                v = to[j]
                if res[j] > 0 and level[v] == level[u] + 1:
                    path.append(j)
                    u = v
                else:
                    it[u] += 1
            else:
                if u == s:
                    break
                level[u] = -1  # dead end, never revisit this phase
                j = path.pop()
                u = frm[j]
                it[u] += 1


def max_flow(net: FlowNetwork, s: int, t: int) -> tuple[Flow, int]:
    """Integral maximum s-t flow; strong duality is asserted on every solve."""
    if s == t:
        raise ValueError("source equals sink")
    adj = _Adj(net)
    value = _dinic(adj, s, t)
    flow = Flow(adj.flow_values())
    side = _reachable(adj, s)
    cut_cap = sum(cap for (u, v, cap, _g) in net.arcs if u in side and v not in side)
    if cut_cap != value:
        raise InternalInvariantError(f"max-flow value {value} != residual cut capacity {cut_cap}")
    return flow, value


def _reachable(adj: _Adj, s: int) -> set[int]:
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for j in adj.adj[u]:
            v = adj.to[j]
            if adj.res[j] > 0 and v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def min_cut_side(net: FlowNetwork, flow: Flow, s: int, t: int | None = None) -> frozenset[int]:
    """Source side of a minimum cut: residual-reachable vertices from s.

    Rejects non-maximum flows (t reachable) when t is given.
    """
    adj = _Adj(net)
    for a, f in enumerate(flow.values):
        adj.res[2 * a] -= f
        adj.res[2 * a + 1] += f
        if adj.res[2 * a] < 0:
            raise ValueError(f"arc {a}: flow exceeds capacity")
    side = _reachable(adj, s)
    if t is not None and t in side:
        raise ValueError("flow is not maximum: sink reachable in residual graph")
    return frozenset(side)


def _feasible_by_maxflow(net: FlowNetwork) -> bool:
    """Gale-style feasibility: saturate a supersource/supersink transformation."""
    d = net.demands
    n = net.n
    arcs = [(u, v, cap) for (u, v, cap, _g) in net.arcs]
    supply = 0
    for v, dv in enumerate(d):
        if dv > 0:
            arcs.append((n, v, dv))
            supply += dv
        elif dv < 0:
            arcs.append((v, n + 1, -dv))
    aux = FlowNetwork.build(n + 2, arcs)
    _flow, value = max_flow(aux, n, n + 1)
    return value == supply


def min_cost_bflow(net: FlowNetwork) -> Flow:
    """Minimum-cost integral flow meeting every vertex demand exactly.

    Successive shortest paths with Dijkstra over reduced costs, plus
    capacity scaling: each phase first saturates admissible arcs whose
    reduced cost went negative, then ships excess in Delta-sized chunks.
    Optimality is certified post hoc by a negative-cycle scan of the
    residual graph.
    """
    if net.demands is None:
        raise ValueError("network has no demand vector")
    if sum(net.demands) != 0:
        raise ValueError("demands do not sum to zero")
    if not _feasible_by_maxflow(net):
        raise ValueError("infeasible demands: supersource/supersink max-flow check failed")

    adj = _Adj(net)
    n, frm, to, res, cost, nbrs = adj.n, adj.frm, adj.to, adj.res, adj.cost, adj.adj
    balance = list(net.demands)  # remaining outflow each vertex still owes
    pi = [0] * n

    top = max(
        max((abs(d) for d in net.demands), default=0),
        max((cap for (_u, _v, cap, _g) in net.arcs), default=0),
        1,
    )
    delta = 1 << (top.bit_length() - 1)

    while delta >= 1:
        # restore reduced-cost optimality on the delta-admissible network
        for j in range(len(res)):
            if res[j] >= delta and cost[j] + pi[frm[j]] - pi[to[j]] < 0:
                amt = res[j]
                res[j] = 0
                res[j ^ 1] += amt
                balance[frm[j]] -= amt
                balance[to[j]] += amt
        while True:
            sources = [v for v in range(n) if balance[v] >= delta]
            if not sources or not any(balance[v] <= -delta for v in range(n)):
                break
            dist = [None] * n
            parent = [-1] * n
            heap = []
            for v in sources:
                dist[v] = 0
                heapq.heappush(heap, (0, v))
            target = -1
            while heap:
                du, u = heapq.heappop(heap)
                if du > dist[u]:
                    continue
                if balance[u] <= -delta:
                    target = u
                    break
                for j in nbrs[u]:
                    if res[j] < delta:
                        continue
                    v = to[j]
                    nd = du + cost[j] + pi[u] - pi[v]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        parent[v] = j
                        heapq.heappush(heap, (nd, v))
            if target < 0:
                break  # no shippable pair at this scale
            dt = dist[target]
            for v in range(n):
                pi[v] += dt if dist[v] is None else min(dist[v], dt)
            v = target
            while parent[v] >= 0:
                j = parent[v]
                res[j] -= delta
                res[j ^ 1] += delta
                v = frm[j]
            balance[v] -= delta
            balance[target] += delta
        delta //= 2

    if any(balance):
        raise InternalInvariantError("scaling phase left nonzero imbalance on a feasible instance")

    flow = Flow(adj.flow_values())
    if flow.boundary(net) != list(net.demands):
        raise InternalInvariantError("flow boundary does not match demands")
    _assert_no_negative_cycle(residual_graph(net, flow))
    return flow


def _bellman_ford(res: ResidualGraph) -> list[int]:
    """Distances from a virtual root with zero-length arcs to every vertex."""
    dist = [0] * res.n
    for _ in range(res.n):
        changed = False
        for u, v, length, _r, _k, _a in res.arcs:
            if dist[u] + length < dist[v]:
                dist[v] = dist[u] + length
                changed = True
        if not changed:
            return dist
    for u, v, length, _r, _k, _a in res.arcs:
        if dist[u] + length < dist[v]:
            raise ValueError("negative-length cycle in residual graph: flow not optimal")
    return dist


def _assert_no_negative_cycle(res: ResidualGraph) -> None:
    try:
        _bellman_ford(res)
    except ValueError as exc:
        raise InternalInvariantError(str(exc)) from exc


def feasible_potential(res: ResidualGraph, root: int = 0) -> list[int]:
    """A potential with length(a) >= pi(head) - pi(tail) on every residual arc.

    Bellman-Ford from an implicit all-zero root, then shifted so the chosen
    root vertex sits at zero.  Raises when the residual graph has a negative
    cycle, i.e. the flow it came from was not optimal.
    """
    dist = _bellman_ford(res)
    shift = dist[root]
    return [d - shift for d in dist]
