"""Diverse unweighted minimum s-t cuts.

Pipeline: one max-flow solve, then the Picard-Queyranne condensation of the
residual graph (strongly connected components, with the source and sink
sides stripped) gives a DAG whose reachability-closed vertex sets are
exactly the minimum-cut sides.  Arcs carrying flow map to their endpoint
blocks; arcs without flow can sit in no minimum cut and drop out.  The
generic level-assignment solve then returns k cuts at once.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ._driver import DiverseResult, solve_generic
from .errors import InputFormatError, InternalInvariantError
from .flow import Flow, FlowNetwork, max_flow
from .ringfamily import BlockPartition, PreReductionMap, lift

__all__ = ["Digraph", "MinCutDag", "build_pq", "mincut_pre_reduction", "solve_diverse_mincut", "parse_dimacs"]


@dataclass(frozen=True)
class Digraph:
    """Unit-capacity input digraph; parallel arcs are distinct ground elements."""

    n: int
    arcs: tuple[tuple[int, int], ...]
    s: int
    t: int

    def __post_init__(self):
        if not (0 <= self.s < self.n and 0 <= self.t < self.n):
            raise ValueError("terminals outside vertex range")
        if self.s == self.t:
            raise ValueError("source equals sink")
        for u, v in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u},{v}) outside vertex range")


@dataclass(frozen=True)
class MinCutDag:
    """Condensation of the residual graph, minus the forced sides.

    components[i] is the vertex set contracted into DAG vertex i;
    side_s / side_t are the vertices forced onto the source / sink side of
    every minimum cut.  Arcs follow residual direction, so reachability-
    closed component sets (ideals) are exactly the optional parts of
    minimum-cut sides.
    """

    components: tuple[frozenset[int], ...]
    arcs: tuple[tuple[int, int], ...]
    side_s: frozenset[int]
    side_t: frozenset[int]


def _residual_adj(g: Digraph, flow: Flow) -> list[list[int]]:
    adj = [[] for _ in range(g.n)]
    for (u, v), f in zip(g.arcs, flow.values):
        if f < 1:
            adj[u].append(v)
        if f > 0:
            adj[v].append(u)
    return adj


def _bfs(adj, start) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def _tarjan_scc(vertices, adj) -> list[list[int]]:
    """Iterative Tarjan restricted to ``vertices``; deep graphs stay safe."""
    vset = set(vertices)
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(adj[root]))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in vset:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def build_pq(g: Digraph) -> tuple[MinCutDag, Flow, int]:
    """Max flow, then condense the residual graph around the forced sides.

    Returns the condensation, the flow, and q (the common size of every
    minimum cut; 0 when the sink is unreachable, making the empty cut the
    unique solution).
    """
    net = FlowNetwork.build(g.n, [(u, v, 1) for u, v in g.arcs])
    flow, q = max_flow(net, g.s, g.t)
    adj = _residual_adj(g, flow)
    side_s = _bfs(adj, g.s)
    radj = [[] for _ in range(g.n)]
    for u in range(g.n):
        for v in adj[u]:
            radj[v].append(u)
    side_t = _bfs(radj, g.t)
    if side_s & side_t:
        raise InternalInvariantError("flow not maximum: source side meets sink side")
    survivors = [v for v in range(g.n) if v not in side_s and v not in side_t]
    comps = _tarjan_scc(survivors, adj)
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    carcs = set()
    for u in survivors:
        cu = comp_of[u]
        for v in adj[u]:
            if v in comp_of and comp_of[v] != cu:
                carcs.add((cu, comp_of[v]))
    dag = MinCutDag(
        tuple(frozenset(c) for c in comps),
        tuple(sorted(carcs)),
        frozenset(side_s),
        frozenset(side_t),
    )
    return dag, flow, q


def mincut_pre_reduction(g: Digraph, flow: Flow) -> PreReductionMap:
    """Arcs carrying flow map to their endpoints; idle arcs collapse onto t."""
    pairs = tuple((u, v) if f else (g.t, g.t) for (u, v), f in zip(g.arcs, flow.values))
    return PreReductionMap(pairs)


def block_partition(dag: MinCutDag) -> BlockPartition:
    return BlockPartition.build(dag.side_s, dag.side_t, dag.components, dag.arcs)


def cut_side_of_ideal(dag: MinCutDag, ideal_components) -> set[int]:
    side = set(dag.side_s)
    for ci in ideal_components:
        side |= dag.components[ci]
    return side


def solve_diverse_mincut(g: Digraph, k: int, measure="sum", backend="auto") -> DiverseResult:
    """k maximally diverse minimum s-t cuts, as sets of arc indices.

    Every returned set is revalidated: it has the minimum-cut cardinality
    and its removal disconnects t from s.
    """
    dag, flow, q = build_pq(g)
    part = block_partition(dag)
    pre = mincut_pre_reduction(g, flow)
    rmap = lift(pre, part)
    result = solve_generic(part.poset, rmap, k, measure, backend)
    for cut in result.solutions:
        _validate_cut(g, cut, q)
    return result


def _validate_cut(g: Digraph, cut_elements: frozenset[int], q: int) -> None:
    if len(cut_elements) != q:
        raise InternalInvariantError(f"cut size {len(cut_elements)} != q={q}")
    removed = set(cut_elements)
    adj = [[] for _ in range(g.n)]
    for a, (u, v) in enumerate(g.arcs):
        if a not in removed:
            adj[u].append(v)
    if g.t in _bfs(adj, g.s):
        raise InternalInvariantError("returned arc set does not disconnect t from s")


def parse_dimacs(text: str) -> Digraph:
    """DIMACS max-flow format: p max / n <id> s|t / a <u> <v> [cap]; unit caps."""
    n = None
    arcs = []
    s = t = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "p":
            if len(parts) < 4 or parts[1] != "max":
                raise InputFormatError("expected 'p max <n> <m>'", lineno)
            try:
                n = int(parts[2])
            except ValueError:
                raise InputFormatError(f"bad vertex count {parts[2]!r}", lineno) from None
        elif kind == "n":
            if n is None:
                raise InputFormatError("node line before problem line", lineno)
            if len(parts) != 3 or parts[2] not in ("s", "t"):
                raise InputFormatError("expected 'n <id> s' or 'n <id> t'", lineno)
            try:
                vid = int(parts[1])
            except ValueError:
                raise InputFormatError(f"bad vertex id {parts[1]!r}", lineno) from None
            if not 1 <= vid <= n:
                raise InputFormatError(f"vertex id {vid} outside 1..{n}", lineno)
            if parts[2] == "s":
                if s is not None:
                    raise InputFormatError("duplicate source designation", lineno)
                s = vid - 1
            else:
                if t is not None:
                    raise InputFormatError("duplicate sink designation", lineno)
                t = vid - 1
        elif kind == "a":
            if n is None:
                raise InputFormatError("arc line before problem line", lineno)
            if len(parts) not in (3, 4):
                raise InputFormatError("expected 'a <u> <v> [cap]'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise InputFormatError("bad arc endpoints", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise InputFormatError(f"arc ({u},{v}) outside 1..{n}", lineno)
            arcs.append((u - 1, v - 1))
        else:
            raise InputFormatError(f"unknown line type {kind!r}", lineno)
    if n is None:
        raise InputFormatError("missing problem line 'p max <n> <m>'")
    if s is None or t is None:
        raise InputFormatError("missing source or sink designation")
    return Digraph(n, tuple(arcs), s, t)
