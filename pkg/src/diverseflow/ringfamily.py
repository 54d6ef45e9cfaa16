"""Block partitions of ring families and lifting of pre-reduction maps.

A ring family (nonempty, closed under union and intersection) is determined
by its minimal member, the complement of its maximal member, and the blocks
in between, ordered by containment of members.  Applications build that
partition directly from their own structure (min-cut condensation, rotation
poset, join-irreducible chain); this module wires the partition into a
poset DAG and lifts element-level maps to block-level reduction maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable

from .core import BOT, TOP, PosetDag, ReductionMap

__all__ = ["BlockPartition", "PreReductionMap", "AugmentResult", "augment_terminals", "lift"]


@dataclass(frozen=True)
class BlockPartition:
    """Disjoint blocks covering the ring family's ground set.

    blocks[i] holds the contents of poset vertex i: blocks[0] is the
    minimal member, blocks[1] the complement of the maximal member, and
    the rest are the interior difference blocks.
    """

    blocks: tuple[frozenset, ...]
    poset: PosetDag

    def __post_init__(self):
        if len(self.blocks) != self.poset.n:
            raise ValueError("one block per poset vertex required")
        seen = set()
        for i, b in enumerate(self.blocks):
            if not b and i not in (BOT, TOP):
                raise ValueError(f"interior block {i} is empty")
            if seen & b:
                raise ValueError(f"block {i} overlaps an earlier block")
            seen |= b
        if not self.blocks[BOT]:
            raise ValueError("bottom block must be nonempty")
        if not self.blocks[TOP]:
            raise ValueError("top block must be nonempty")

    @property
    def ground(self) -> frozenset:
        return frozenset().union(*self.blocks)

    def block_of(self, x) -> int:
        return self._lookup[x]

    @cached_property
    def _lookup(self) -> dict:
        out = {}
        for i, b in enumerate(self.blocks):
            for x in b:
                out[x] = i
        return out

    @staticmethod
    def build(bot_block, top_block, interior_blocks, interior_arcs) -> "BlockPartition":
        """Wire terminal blocks around an interior order.

        interior_blocks[i] becomes poset vertex i + 2; interior_arcs are
        (i, j) pairs meaning block j is below block i (arcs point from
        larger to smaller, matching member containment).  Arcs TOP -> x are
        added for order-maximal interior blocks, x -> BOT for minimal ones,
        and TOP -> BOT when the interior is empty; reachability, not arc
        count, is what matters.
        """
        ni = len(interior_blocks)
        arcs = [(i + 2, j + 2) for i, j in interior_arcs]
        indeg = {v: 0 for v in range(ni)}
        outdeg = {v: 0 for v in range(ni)}
        for i, j in interior_arcs:
            outdeg[i] += 1
            indeg[j] += 1
        for v in range(ni):
            if indeg[v] == 0:
                arcs.append((TOP, v + 2))
            if outdeg[v] == 0:
                arcs.append((v + 2, BOT))
        if ni == 0:
            arcs.append((TOP, BOT))
        poset = PosetDag(ni + 2, tuple(arcs))
        blocks = (frozenset(bot_block), frozenset(top_block)) + tuple(frozenset(b) for b in interior_blocks)
        return BlockPartition(blocks, poset)


@dataclass(frozen=True)
class PreReductionMap:
    """Per ground element, a pair of ring-family ground members (plus, minus).

    Membership contract: whenever a family member contains the minus image
    it also contains the plus image.  Checked only by enumeration tests at
    desk scale; production paths trust the application's construction.
    """

    pairs: tuple[tuple[Hashable, Hashable], ...]

    @property
    def size(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class AugmentResult:
    ground: frozenset
    bot_added: Hashable | None
    top_added: Hashable | None


def augment_terminals(ground, minimal_member, maximal_member,
                      bot_sentinel="__bot__", top_sentinel="__top__") -> AugmentResult:
    """Ensure the minimal member is nonempty and the maximal one proper.

    Adds a fresh bottom element (to be unioned into every member) when the
    minimal member is empty, and a fresh top element (ground only) when the
    maximal member covers the ground set.
    """
    original = frozenset(ground)
    out = original
    bot_added = None
    top_added = None
    if not minimal_member:
        if bot_sentinel in original:
            raise ValueError("bottom sentinel collides with a ground element")
        bot_added = bot_sentinel
        out |= {bot_sentinel}
    if frozenset(maximal_member) == original:
        if top_sentinel in original:
            raise ValueError("top sentinel collides with a ground element")
        top_added = top_sentinel
        out |= {top_sentinel}
    return AugmentResult(out, bot_added, top_added)


def lift(pre: PreReductionMap, part: BlockPartition) -> ReductionMap:
    """Turn element-level images into block-level ones and normalise.

    Elements whose two images land in the same block are dropped (they
    occur in no solution); the result's ``kept`` indices point back into
    the pre-reduction map's element order.
    """
    pairs = []
    for i, (plus, minus) in enumerate(pre.pairs):
        try:
            bp = part.block_of(plus)
            bm = part.block_of(minus)
        except KeyError as exc:
            raise ValueError(f"element {i}: image {exc.args[0]!r} not covered by the partition") from exc
        pairs.append((bp, bm))
    return ReductionMap.normalize(pairs, part.poset)
