"""Max-flow / min-cut backend for the minimum level-assignment problem.

The instance DAG is copied k times.  Chain arcs between consecutive copies
of a vertex force every cheap cut to pick a threshold level per vertex;
reversed structure arcs (plus terminal hookups) force those levels to be a
valid assignment; penalty arcs between copies of each weighted arc's
endpoints charge exactly the convex cost of the level drop.  Works for the
pairs (binom) and coverage penalties only; other shapes route to the
min-cost-flow backend.
"""

from __future__ import annotations

from dataclasses import dataclass

from .convex import BINOM, COV
from .core import BOT, TOP, KPotential, KPotentialInstance, potential_cost, validate_potential
from .errors import ConfigError, InternalInvariantError
from .flow import FlowNetwork, max_flow, min_cut_side

__all__ = ["CutReduction", "build_reduction", "extract_potential", "solve_min_potential"]


@dataclass(frozen=True)
class CutReduction:
    """k-layer copied network with source s and sink t appended last.

    Copy i of vertex v (1-based layer i) has id (i-1)*n + v; s and t are
    k*n and k*n + 1.
    """

    network: FlowNetwork
    big_m: int
    k: int
    n_base: int
    phi_kind: str

    @property
    def s(self) -> int:
        return self.k * self.n_base

    @property
    def t(self) -> int:
        return self.k * self.n_base + 1

    def copy_id(self, v: int, layer: int) -> int:
        return (layer - 1) * self.n_base + v

    def to_dot(self) -> str:
        lines = ["digraph cut_reduction {", "  rankdir=LR;"]
        for layer in range(1, self.k + 1):
            names = ", ".join(f'"v{v}_{layer}"' for v in range(self.n_base))
            lines.append(f"  {{ rank=same; {names} }}")
        for u, v, cap, _cost in self.network.arcs:
            lines.append(f'  "{self._name(u)}" -> "{self._name(v)}" [label={cap}];')
        lines.append("}")
        return "\n".join(lines)

    def _name(self, x: int) -> str:
        if x == self.s:
            return "s"
        if x == self.t:
            return "t"
        return f"v{x % self.n_base}_{x // self.n_base + 1}"


def build_reduction(inst: KPotentialInstance, big_m: int | None = None) -> CutReduction:
    if inst.convex.kind not in (BINOM, COV):
        raise ConfigError(
            f"cut backend supports binom and cov penalties, not {inst.convex.kind}; use the mcf backend"
        )
    k, n = inst.k, inst.n
    if big_m is None:
        big_m = inst.total_weight * inst.convex.eval(k) + 1

    def cid(v, layer):
        return (layer - 1) * n + v

    s, t = k * n, k * n + 1
    arcs = []
    # layer chains: a cheap cut crosses each vertex's chain at one threshold
    for v in range(n):
        for i in range(1, k):
            arcs.append((cid(v, i), cid(v, i + 1), big_m))
    # reversed structure arcs per layer, plus terminal hookups
    seen = set()
    for u, v in inst.arcs:
        if (u, v) in seen:
            continue  # parallel arcs collapse: these are set-valued constraints
        seen.add((u, v))
        for i in range(1, k + 1):
            arcs.append((cid(v, i), cid(u, i), big_m))
    for i in range(1, k + 1):
        arcs.append((cid(BOT, i), t, big_m))
        arcs.append((s, cid(TOP, i), big_m))
    # penalty arcs
    for (u, v), w in zip(inst.arcs, inst.weights):
        if w <= 0:
            continue
        if inst.convex.kind == BINOM:
            for i in range(1, k + 1):
                for j in range(i + 1, k + 1):
                    arcs.append((cid(u, i), cid(v, j), w))
        else:
            for i in range(1, k):
                arcs.append((cid(u, i), cid(v, i + 1), w))

    net = FlowNetwork.build(k * n + 2, arcs)
    return CutReduction(net, big_m, k, n, inst.convex.kind)


def extract_potential(cut_side, red: CutReduction, inst: KPotentialInstance) -> KPotential:
    """Read vertex levels off a cut side: the highest copy outside the side.

    Requires the cut to be cheaper than big_m, which guarantees the copies
    of each vertex split at a single threshold.
    """
    delta = sum(cap for (u, v, cap, _g) in red.network.arcs if u in cut_side and v not in cut_side)
    if delta >= red.big_m:
        raise InternalInvariantError(f"cut value {delta} reached the big-m barrier {red.big_m}")
    k, n = red.k, red.n_base
    values = []
    for v in range(n):
        inside = [i for i in range(1, k + 1) if red.copy_id(v, i) in cut_side]
        if inside and inside != list(range(inside[0], k + 1)):
            raise InternalInvariantError(f"cut side not threshold-shaped at vertex {v}: {inside}")
        values.append(inside[0] - 1 if inside else k)
    p = KPotential(tuple(values))
    try:
        validate_potential(p, inst)
    except ValueError as exc:
        raise InternalInvariantError(f"extracted levels invalid: {exc}") from exc
    if potential_cost(p, inst) != delta:
        raise InternalInvariantError("extracted level cost does not match cut value")
    return p


def solve_min_potential(inst: KPotentialInstance, big_m: int | None = None) -> tuple[KPotential, int]:
    """Minimise the instance cost via one max-flow solve."""
    red = build_reduction(inst, big_m)
    flow, _value = max_flow(red.network, red.s, red.t)
    side = min_cut_side(red.network, flow, red.s, red.t)
    p = extract_potential(side, red, inst)
    return p, potential_cost(p, inst)
