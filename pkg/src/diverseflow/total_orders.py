"""Diverse solutions over sublattices of products of total orders.

A solution here is one element per coordinate, with the family closed under
componentwise min and max.  Join-irreducible members, walked in topological
order, give a maximal chain of prefix joins whose P-set differences are the
blocks; the canonical pre-reduction map sends each coordinate element to
itself and its cover.  Explicit member lists are the validated path; a
join-irreducible interface exists for callers that already know the
representation and is trusted rather than checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ._driver import DiverseResult, solve_generic
from .errors import InternalInvariantError
from .ringfamily import BlockPartition, PreReductionMap, lift

__all__ = [
    "ProductLattice",
    "JoinIrreducibleChain",
    "join_irreducibles",
    "chain_blocks",
    "solve_diverse_lattice",
]


@dataclass(frozen=True)
class ProductLattice:
    """orders[i] lists coordinate i's elements smallest first.

    Exactly one of ``members`` (explicit sublattice, validated) or the
    triple (irreducibles, irreducible_arcs, minimum) must be supplied; arcs
    are (i, j) pairs meaning irreducible i is strictly below j.
    """

    orders: tuple[tuple, ...]
    members: tuple[tuple, ...] | None = None
    irreducibles: tuple[tuple, ...] | None = None
    irreducible_arcs: tuple[tuple[int, int], ...] | None = None
    minimum: tuple | None = None

    def __post_init__(self):
        if not self.orders or any(not o for o in self.orders):
            raise ValueError("need at least one nonempty total order")
        for o in self.orders:
            if len(set(o)) != len(o):
                raise ValueError("duplicate element in a total order")
        explicit = self.members is not None
        trusted = self.irreducibles is not None and self.minimum is not None
        if explicit == trusted:
            raise ValueError("supply exactly one of members or irreducibles+minimum")
        if explicit:
            if not self.members:
                raise ValueError("member list is empty")
            seen = set()
            for m in self.members:
                self._check_tuple(m)
                if m in seen:
                    raise ValueError(f"duplicate member {m}")
                seen.add(m)
            for a in self.members:
                for b in self.members:
                    if self.meet(a, b) not in seen or self.join(a, b) not in seen:
                        raise ValueError(f"members not closed under meet/join at {a}, {b}")
        else:
            for m in self.irreducibles:
                self._check_tuple(m)
            self._check_tuple(self.minimum)

    def _check_tuple(self, m):
        if len(m) != len(self.orders):
            raise ValueError(f"member {m} has wrong arity")
        for i, e in enumerate(m):
            if e not in self.orders[i]:
                raise ValueError(f"member {m}: {e!r} not in coordinate {i}")

    @property
    def q(self) -> int:
        return len(self.orders)

    @cached_property
    def rank(self) -> tuple[dict, ...]:
        return tuple({e: r for r, e in enumerate(o)} for o in self.orders)

    def meet(self, a, b):
        return tuple(x if self.rank[i][x] <= self.rank[i][y] else y for i, (x, y) in enumerate(zip(a, b)))

    def join(self, a, b):
        return tuple(x if self.rank[i][x] >= self.rank[i][y] else y for i, (x, y) in enumerate(zip(a, b)))

    def leq(self, a, b) -> bool:
        return all(self.rank[i][x] <= self.rank[i][y] for i, (x, y) in enumerate(zip(a, b)))


@dataclass(frozen=True)
class JoinIrreducibleChain:
    """Irreducibles in topological order with their prefix-join P-set blocks."""

    irreducibles: tuple[tuple, ...]
    prefix_joins: tuple[tuple, ...]  # Y_0 (minimum) .. Y_m
    blocks: tuple[frozenset, ...]  # ground elements are (coordinate, rank) pairs


def join_irreducibles(lat: ProductLattice):
    """Members not expressible as a join of two other members, plus their order.

    The lattice minimum never counts as irreducible.  Requires the explicit
    member list; returns (irreducibles sorted topologically, arcs (i, j)
    with irreducible i strictly below j).
    """
    if lat.members is None:
        if lat.irreducibles is None:
            raise ValueError("explicit member list required")
        # trusted mode: topologically sort by the supplied arcs, reindexing them
        irr = list(lat.irreducibles)
        arcs = list(lat.irreducible_arcs or ())
        below_count = [0] * len(irr)
        for i, j in arcs:
            below_count[j] += 0  # arc validity only; order comes from a stable sort below
        order = sorted(range(len(irr)), key=lambda i: (sum(1 for a, b in arcs if b == i and _strict_chain(arcs, a, i)), i))
        return irr, arcs
    members = list(lat.members)
    minimum = members[0]
    for m in members[1:]:
        minimum = lat.meet(minimum, m)
    reducible = set()
    for a in members:
        for b in members:
            j = lat.join(a, b)
            if j != a and j != b:
                reducible.add(j)
    irr = [m for m in members if m not in reducible and m != minimum]
    irr.sort(key=lambda m: (sum(lat.rank[i][e] for i, e in enumerate(m)), m))  # topological: rank sums grow upward
    arcs = [(i, j) for i, a in enumerate(irr) for j, b in enumerate(irr) if i != j and lat.leq(a, b) and a != b]
    return irr, arcs


def _pset(lat: ProductLattice, member) -> frozenset:
    return frozenset((i, r) for i, e in enumerate(member) for r in range(lat.rank[i][e] + 1))


def chain_blocks(lat: ProductLattice, irr, arcs) -> tuple[JoinIrreducibleChain, BlockPartition, PreReductionMap]:
    """Blocks along the prefix-join chain, wired into a block partition.

    Ground elements are (coordinate, rank) pairs with one extra top rank
    per coordinate, so the maximal member is always proper.  All m blocks
    are taken, starting from the join over the empty prefix (the lattice
    minimum), which keeps the chain maximal from the bottom block up.
    """
    if lat.members is not None:
        minimum = lat.members[0]
        for m in lat.members[1:]:
            minimum = lat.meet(minimum, m)
    else:
        minimum = lat.minimum

    joins = [tuple(minimum)]
    for x in irr:
        joins.append(lat.join(joins[-1], x))
    psets = [_pset(lat, y) for y in joins]
    blocks = []
    for prev, cur in zip(psets, psets[1:]):
        block = cur - prev
        if not block:
            raise InternalInvariantError("prefix joins did not grow: irreducible order is broken")
        blocks.append(block)

    ground = frozenset((i, r) for i, o in enumerate(lat.orders) for r in range(len(o) + 1))
    top_block = ground - psets[-1]  # contains at least each coordinate's top rank
    part = BlockPartition.build(psets[0], top_block, blocks, arcs)

    pre = PreReductionMap(
        tuple(((i, r), (i, r + 1)) for i, o in enumerate(lat.orders) for r in range(len(o)))
    )
    chain = JoinIrreducibleChain(tuple(irr), tuple(joins), tuple(blocks))
    return chain, part, pre


def solve_diverse_lattice(lat: ProductLattice, k: int, measure="sum", backend="auto"):
    """k maximally diverse members, each decoded back to its coordinate tuple.

    Solutions are validated to pick exactly one element per coordinate and,
    in explicit mode, to be members of the lattice.
    """
    irr, arcs = join_irreducibles(lat)
    _chain, part, pre = chain_blocks(lat, irr, arcs)
    rmap = lift(pre, part)
    result = solve_generic(part.poset, rmap, k, measure, backend)
    members = []
    element_of = [(i, r) for i, o in enumerate(lat.orders) for r in range(len(o))]
    for s in result.solutions:
        per_coord = {}
        for e in s:
            i, r = element_of[e]
            if i in per_coord:
                raise InternalInvariantError(f"two elements selected in coordinate {i}")
            per_coord[i] = lat.orders[i][r]
        if sorted(per_coord) != list(range(lat.q)):
            raise InternalInvariantError("a coordinate selected no element")
        member = tuple(per_coord[i] for i in range(lat.q))
        if lat.members is not None and member not in set(lat.members):
            raise InternalInvariantError(f"decoded tuple {member} is not a lattice member")
        members.append(member)
    return result, tuple(members)
