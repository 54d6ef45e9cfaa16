"""Min-cost-flow backend for the minimum level-assignment problem.

Each weighted arc of the instance becomes a bundle of parallel arcs, one per
breakpoint of the convex penalty, whose costs are the breakpoints and whose
capacities encode the slope increments; auxiliary arcs from a fresh root pin
every vertex level into [0, k] and the terminals to k and 0.  A feasible
dual potential of the optimal flow's residual graph, restricted to the
original vertices, is then a minimising level assignment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .convex import breakpoint_profile
from .core import BOT, TOP, KPotential, KPotentialInstance, potential_cost, validate_potential
from .errors import InternalInvariantError
from .flow import FlowNetwork, feasible_potential, min_cost_bflow, residual_graph

__all__ = ["CostFlowReduction", "build_reduction", "solve_min_potential", "default_big_m"]

_INT_BOUND = 1 << 62


@dataclass(frozen=True)
class CostFlowReduction:
    """The demand-constrained min-cost-flow network for one instance.

    provenance maps each network arc back to (instance arc index, copy
    index) or to an auxiliary role ("root", vertex).
    """

    network: FlowNetwork
    big_m: int
    root: int
    provenance: tuple[tuple, ...]

    def dump_json(self) -> str:
        doc = {
            "vertices": self.network.n,
            "root": self.root,
            "big_m": self.big_m,
            "demands": list(self.network.demands),
            "arcs": [
                {"tail": u, "head": v, "capacity": cap, "cost": cost, "provenance": list(prov)}
                for (u, v, cap, cost), prov in zip(self.network.arcs, self.provenance)
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def default_big_m(inst: KPotentialInstance) -> int:
    """Strict upper bound on any level assignment's cost: sum w * phi(k) + 1."""
    return inst.total_weight * inst.convex.eval(inst.k) + 1


def build_reduction(inst: KPotentialInstance, big_m: int | None = None) -> CostFlowReduction:
    """Construct the network; the root vertex takes the last id.

    For a weighted arc the copy capacities telescope through the slope
    increments; with no interior breakpoints (phi linear on [0, k], slope
    sigma) the two copies degenerate to capacities w*sigma + M and
    M - w*sigma, which is the same formula with both boundary slopes equal.
    """
    k = inst.k
    big_m = default_big_m(inst) if big_m is None else big_m
    prof = breakpoint_profile(inst.convex, k)
    n = inst.n
    root = n

    arcs = []
    prov = []

    def add(u, v, cap, cost, why):
        if cap < 0:
            raise InternalInvariantError(f"negative capacity {cap} for {why}")
        arcs.append((u, v, cap, cost))
        prov.append(why)

    for ia, ((u, v), w) in enumerate(zip(inst.arcs, inst.weights)):
        if w > 0:
            first_slope = prof.segment_slope(0)
            last_slope = prof.segment_slope(prof.z - 1)
            caps = [w * first_slope + big_m]
            for i in range(len(prof.left_slopes)):
                caps.append(w * (prof.right_slopes[i] - prof.left_slopes[i]))
            caps.append(big_m - w * last_slope)
            for copy, (cost, cap) in enumerate(zip(prof.points, caps)):
                add(u, v, cap, cost, ("arc", ia, copy))
        else:
            add(u, v, big_m, 0, ("arc", ia, 0))
            add(u, v, big_m, k, ("arc", ia, 1))

    for v in range(2, n):
        add(root, v, big_m, 0, ("root", v, 0))
        add(root, v, big_m, k, ("root", v, 1))
    add(root, BOT, 2 * big_m, k, ("root", BOT, 0))
    add(root, TOP, 2 * big_m, 0, ("root", TOP, 0))

    demands = [0] * (n + 1)
    for u, v in inst.arcs:
        demands[u] += big_m
        demands[v] -= big_m
    for v in range(n):
        demands[v] -= big_m  # the root arc into v
    demands[root] = big_m * n
    if sum(demands) != 0:
        raise InternalInvariantError("demand vector does not sum to zero")
    if big_m * (n + len(inst.arcs) + 2) >= _INT_BOUND:
        raise OverflowError("reduction magnitudes exceed 64-bit bounds")

    net = FlowNetwork.build(n + 1, arcs, demands)
    return CostFlowReduction(net, big_m, root, tuple(prov))


def solve_min_potential(inst: KPotentialInstance, big_m: int | None = None) -> tuple[KPotential, int]:
    """Minimise the instance cost via one min-cost-flow solve.

    Pipeline: build the reduction, find a min-cost flow, recover a feasible
    dual potential of its residual graph (normalised to zero at the root),
    and restrict to the instance vertices.  The restriction is validated
    against the level-assignment conditions before being returned.
    """
    red = build_reduction(inst, big_m)
    flow = min_cost_bflow(red.network)
    res = residual_graph(red.network, flow)
    pi = feasible_potential(res, root=red.root)
    p = KPotential(tuple(pi[v] for v in range(inst.n)))
    violation_guard(p, inst)
    return p, potential_cost(p, inst)


def violation_guard(p: KPotential, inst: KPotentialInstance) -> None:
    try:
        validate_potential(p, inst)
    except ValueError as exc:
        raise InternalInvariantError(f"recovered dual is not a valid level assignment: {exc}") from exc
