"""Posets as DAGs, reduction maps, k-potentials, and solution tuples.

The machinery here turns "pick k ideals of a poset" into "pick one integer
per vertex": a k-potential assigns each vertex a level in [0, k], the level
sets are ideals, and the penalty of the induced k solutions equals a
weighted convex cost over the potential drops.  Backends minimise that cost;
this module owns the translation in both directions.

Conventions: poset vertices are dense ints, with the minimum element at id 0
(BOT) and the maximum at id 1 (TOP).  DAG arcs point from larger to smaller
elements, so TOP is the unique source and BOT the unique sink.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property

from .convex import ConvexSpec
from .errors import InternalInvariantError

BOT = 0
TOP = 1

__all__ = [
    "BOT",
    "TOP",
    "PosetDag",
    "ReductionMap",
    "KPotentialInstance",
    "KPotential",
    "SolutionTuple",
    "PotentialViolation",
    "solution_from_ideal",
    "build_instance",
    "validate_potential",
    "check_potential",
    "potential_cost",
    "solutions_from_potential",
    "diversity_sum",
    "diversity_cov",
    "convex_penalty",
]


@dataclass(frozen=True)
class PosetDag:
    """A finite poset with distinct minimum (id 0) and maximum (id 1) as a DAG.

    Any arc set consistent with reachability is accepted; transitive
    reduction is not required.  For interior u, v: u <= v in the order
    exactly when u is reachable from v along arcs.
    """

    n: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("poset needs distinct bottom and top")
        for u, v in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u},{v}) outside vertex range")
            if u == v:
                raise ValueError(f"self-loop at {u}")
        indeg = [0] * self.n
        outdeg = [0] * self.n
        for u, v in self.arcs:
            outdeg[u] += 1
            indeg[v] += 1
        sources = [v for v in range(self.n) if indeg[v] == 0]
        sinks = [v for v in range(self.n) if outdeg[v] == 0]
        if sources != [TOP]:
            raise ValueError(f"top must be the unique source, sources={sources}")
        if sinks != [BOT]:
            raise ValueError(f"bottom must be the unique sink, sinks={sinks}")
        if self._topo_order() is None:
            raise ValueError("arc set has a cycle")

    def _topo_order(self):
        indeg = [0] * self.n
        for _, v in self.arcs:
            indeg[v] += 1
        out = self.out_adj
        order = [v for v in range(self.n) if indeg[v] == 0]
        queue = deque(order)
        while queue:
            u = queue.popleft()
            for v in out[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
                    order.append(v)
        return order if len(order) == self.n else None

    @cached_property
    def out_adj(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            adj[u].append(v)
        return tuple(tuple(a) for a in adj)

    @cached_property
    def reach_masks(self) -> tuple[int, ...]:
        """reach_masks[v] has bit u set iff u is reachable from v (incl. v)."""
        order = self._topo_order()
        masks = [0] * self.n
        for v in reversed(order):
            m = 1 << v
            for w in self.out_adj[v]:
                m |= masks[w]
            masks[v] = m
        return tuple(masks)

    def reaches(self, u: int, v: int) -> bool:
        """True when there is a u -> v path (v is below u, or v == u)."""
        return bool(self.reach_masks[u] >> v & 1)

    @property
    def interior(self) -> range:
        return range(2, self.n)

    def validate_ideal(self, members) -> tuple[int, int] | None:
        """Return a closure-violating arc (v, u) with v in, u out, or None.

        One pass over arcs suffices: interior reachability never routes
        through BOT (no out-arcs) or TOP (no in-arcs).
        """
        mset = set(members)
        for v in mset:
            if v in (BOT, TOP) or not 0 <= v < self.n:
                raise ValueError(f"ideal member {v} is not an interior vertex")
        for u, v in self.arcs:
            if u in mset and v != BOT and v not in mset:
                return (u, v)
        return None


@dataclass(frozen=True)
class ReductionMap:
    """Per ground element, the pair of poset vertices (e_plus, e_minus).

    e_plus <= e_minus in the poset.  Elements whose two images coincide can
    occur in no solution and are dropped at build time; ``kept`` records the
    surviving positions in the caller's original element list and ``dropped``
    the discarded ones, so size accounting stays visible either way.
    """

    eplus: tuple[int, ...]
    eminus: tuple[int, ...]
    kept: tuple[int, ...]
    dropped: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.eplus)

    @classmethod
    def normalize(cls, pairs, poset: PosetDag) -> "ReductionMap":
        """Validate pairs against the poset and drop degenerate elements."""
        eplus, eminus, kept, dropped = [], [], [], []
        for i, (ep, em) in enumerate(pairs):
            if not (0 <= ep < poset.n and 0 <= em < poset.n):
                raise ValueError(f"element {i}: image ({ep},{em}) outside poset")
            if ep == em:
                dropped.append(i)
                continue
            if not poset.reaches(em, ep):
                raise ValueError(f"element {i}: e_plus {ep} not reachable from e_minus {em}")
            eplus.append(ep)
            eminus.append(em)
            kept.append(i)
        return cls(tuple(eplus), tuple(eminus), tuple(kept), tuple(dropped))


def solution_from_ideal(ideal, rmap: ReductionMap, poset: PosetDag) -> frozenset[int]:
    """The solution carried by an ideal: elements entering at its boundary.

    Element e is selected when e_plus lies in the ideal (or is BOT) while
    e_minus does not.  Raises on non-ideal input, naming a witness arc.
    """
    witness = poset.validate_ideal(ideal)
    if witness is not None:
        raise ValueError(f"not an ideal: {witness[0]} in, reachable {witness[1]} out")
    inside = set(ideal)
    inside.add(BOT)
    return frozenset(
        i
        for i in range(rmap.size)
        if rmap.eplus[i] in inside and rmap.eminus[i] not in inside
    )


@dataclass(frozen=True)
class KPotentialInstance:
    """Weighted DAG + convex spec + k: the input of the level-assignment solve.

    Arcs hold the poset's structural arcs first (weight 0) followed by one
    arc (e_minus, e_plus) per distinct image pair, weighted by multiplicity.
    Parallel arcs are legal; a structural arc may coincide endpoint-wise
    with a weighted one and the two are never merged.
    """

    poset: PosetDag
    arcs: tuple[tuple[int, int], ...]
    weights: tuple[int, ...]
    convex: ConvexSpec
    k: int

    @property
    def n(self) -> int:
        return self.poset.n

    @property
    def n_structural(self) -> int:
        return len(self.poset.arcs)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    def with_convex(self, spec: ConvexSpec, k: int | None = None) -> "KPotentialInstance":
        return KPotentialInstance(self.poset, self.arcs, self.weights, spec, self.k if k is None else k)


def build_instance(poset: PosetDag, rmap: ReductionMap, spec: ConvexSpec, k: int) -> KPotentialInstance:
    """Assemble the solve instance from a poset and a normalized reduction map.

    A valid poset has no isolated vertices (every interior vertex lies on a
    TOP-to-BOT path), so no pruning pass is needed here.  The combined arc
    set is re-checked as a poset DAG; weighted arcs never break validity
    because each one parallels an existing reachability.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    weighted = Counter(zip(rmap.eminus, rmap.eplus))
    arcs = list(poset.arcs)
    weights = [0] * len(arcs)
    for (em, ep), w in sorted(weighted.items()):
        arcs.append((em, ep))
        weights.append(w)
    PosetDag(poset.n, tuple(arcs))  # validation only
    return KPotentialInstance(poset, tuple(arcs), tuple(weights), spec, k)


@dataclass(frozen=True)
class KPotential:
    """Integer level per vertex; the encoding of a multiset of k ideals."""

    values: tuple[int, ...]

    def __getitem__(self, v: int) -> int:
        return self.values[v]


@dataclass(frozen=True)
class PotentialViolation:
    condition: str  # "P1" | "P2" | "P3"
    detail: str


def check_potential(p: KPotential, inst: KPotentialInstance) -> PotentialViolation | None:
    """Exact check of the three level-assignment conditions; None when valid."""
    vals = p.values
    if len(vals) != inst.n:
        return PotentialViolation("P2", f"expected {inst.n} values, got {len(vals)}")
    if vals[BOT] != inst.k:
        return PotentialViolation("P1", f"p(bot)={vals[BOT]}, expected k={inst.k}")
    if vals[TOP] != 0:
        return PotentialViolation("P1", f"p(top)={vals[TOP]}, expected 0")
    for v, x in enumerate(vals):
        if not 0 <= x <= inst.k:
            return PotentialViolation("P2", f"p({v})={x} outside [0,{inst.k}]")
    for u, v in inst.arcs:
        if vals[u] > vals[v]:
            return PotentialViolation("P3", f"arc ({u},{v}): p({u})={vals[u]} > p({v})={vals[v]}")
    return None


def validate_potential(p: KPotential, inst: KPotentialInstance) -> None:
    violation = check_potential(p, inst)
    if violation is not None:
        raise ValueError(f"{violation.condition}: {violation.detail}")


def potential_cost(p: KPotential, inst: KPotentialInstance) -> int:
    """Sum over arcs of weight * phi(potential drop); drops lie in [0, k]."""
    validate_potential(p, inst)
    phi = inst.convex
    total = 0
    for (u, v), w in zip(inst.arcs, inst.weights):
        if w:
            total += w * phi.eval(p.values[v] - p.values[u])
    return total


@dataclass(frozen=True)
class SolutionTuple:
    """An ordered k-tuple of element subsets with per-element multiplicities.

    For families with the equal-size property every set has the same
    cardinality q; ``q`` raises if the sets are ragged (possible only for
    reduction maps that do not come from such a family).
    """

    sets: tuple[frozenset[int], ...]

    @property
    def k(self) -> int:
        return len(self.sets)

    @cached_property
    def multiplicity(self) -> Counter:
        mu = Counter()
        for s in self.sets:
            mu.update(s)
        return mu

    @property
    def q(self) -> int:
        sizes = {len(s) for s in self.sets}
        if len(sizes) > 1:
            raise InternalInvariantError(f"ragged solution sizes {sorted(sizes)}")
        return sizes.pop() if sizes else 0


def solutions_from_potential(p: KPotential, rmap: ReductionMap, inst: KPotentialInstance) -> SolutionTuple:
    """Decode a valid potential into its k-tuple of solutions.

    Element e joins S_i exactly for p(e_minus) < i <= p(e_plus), so its
    multiplicity is the potential drop across its arc and the tuple's
    convex penalty reproduces the potential's cost.
    """
    validate_potential(p, inst)
    sets = [set() for _ in range(inst.k)]
    for e in range(rmap.size):
        lo = p.values[rmap.eminus[e]]
        hi = p.values[rmap.eplus[e]]
        for i in range(lo, hi):
            sets[i].add(e)
    return SolutionTuple(tuple(frozenset(s) for s in sets))


def diversity_sum(t: SolutionTuple) -> int:
    """Total pairwise symmetric-difference size, cross-checked two ways."""
    direct = 0
    for i in range(t.k):
        for j in range(i + 1, t.k):
            direct += len(t.sets[i] ^ t.sets[j])
    k = t.k
    via_mu = sum(m * (k - m) for m in t.multiplicity.values())
    if direct != via_mu:
        raise InternalInvariantError(f"d_sum mismatch: direct {direct} != multiplicity form {via_mu}")
    return direct


def diversity_cov(t: SolutionTuple) -> int:
    """Number of distinct elements covered by the k sets."""
    return len(frozenset().union(*t.sets)) if t.sets else 0


def convex_penalty(t: SolutionTuple, spec: ConvexSpec) -> int:
    """Sum of phi(multiplicity) over elements; the quantity the solver minimises."""
    return sum(spec.eval(m) for m in t.multiplicity.values())
