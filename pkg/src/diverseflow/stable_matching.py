"""Diverse stable matchings.

Gale-Shapley gives the two extreme stable matchings; repeatedly eliminating
exposed rotations walks from the proposer-optimal one to the other extreme,
enumerating every rotation.  Rotations with their precedence order form the
poset whose ideals are exactly the stable matchings, and each rotation owns
a block of (u, v) pairs: the slice of u's preference list the rotation
moves across.  The pre-reduction map sends a pair to itself and its cover
in u's list, which selects exactly the matched pairs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from ._driver import DiverseResult, solve_generic
from .errors import InputFormatError, InternalInvariantError
from .ringfamily import BlockPartition, PreReductionMap, lift

__all__ = [
    "SmInstance",
    "Rotation",
    "RotationPoset",
    "gale_shapley",
    "is_stable",
    "build_rotation_poset",
    "sm_pre_reduction",
    "block_partition",
    "solve_diverse_sm",
    "parse_preferences",
]

@dataclass(frozen=True)
class SmInstance:
    """Preference lists; pref_u[u] is u's ranking of the V side, best first."""

    pref_u: tuple[tuple[int, ...], ...]
    pref_v: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.pref_u)
        if len(self.pref_v) != n or n == 0:
            raise ValueError("preference sides must be nonempty and the same size")
        for side in (self.pref_u, self.pref_v):
            for i, p in enumerate(side):
                if sorted(p) != list(range(n)):
                    raise ValueError(f"preference list {i} is not a permutation of 0..{n - 1}")

    @property
    def n(self) -> int:
        return len(self.pref_u)

    @cached_property
    def rank_u(self) -> tuple[tuple[int, ...], ...]:
        return tuple(_inverse(p) for p in self.pref_u)

    @cached_property
    def rank_v(self) -> tuple[tuple[int, ...], ...]:
        return tuple(_inverse(p) for p in self.pref_v)


def _inverse(perm):
    inv = [0] * len(perm)
    for i, x in enumerate(perm):
        inv[x] = i
    return tuple(inv)


def _propose(prefs_a, rank_b):
    """Deferred acceptance with side A proposing; returns A's partner array."""
    n = len(prefs_a)
    nxt = [0] * n
    holder = [None] * n  # per B member, current proposer
    free = deque(range(n))
    while free:
        a = free.popleft()
        b = prefs_a[a][nxt[a]]
        nxt[a] += 1
        cur = holder[b]
        if cur is None:
            holder[b] = a
        elif rank_b[b][a] < rank_b[b][cur]:
            holder[b] = a
            free.append(cur)
        else:
            free.append(a)
    partner = [None] * n
    for b, a in enumerate(holder):
        partner[a] = b
    return partner


def gale_shapley(inst: SmInstance, proposing: str = "u") -> frozenset[tuple[int, int]]:
    """The proposing-side-optimal stable matching, stability-checked."""
    if proposing == "u":
        partner = _propose(inst.pref_u, inst.rank_v)
        matching = frozenset((u, v) for u, v in enumerate(partner))
    elif proposing == "v":
        partner = _propose(inst.pref_v, inst.rank_u)
        matching = frozenset((u, v) for v, u in enumerate(partner))
    else:
        raise ValueError("proposing side must be 'u' or 'v'")
    if not is_stable(inst, matching):
        raise InternalInvariantError("deferred acceptance produced an unstable matching")
    return matching


def is_stable(inst: SmInstance, matching) -> bool:
    n = inst.n
    pu = [None] * n
    pv = [None] * n
    for u, v in matching:
        if pu[u] is not None or pv[v] is not None:
            return False
        pu[u] = v
        pv[v] = u
    if any(x is None for x in pu) or any(x is None for x in pv):
        return False
    for u in range(n):
        for v in range(n):
            if v == pu[u]:
                continue
            if inst.rank_u[u][v] < inst.rank_u[u][pu[u]] and inst.rank_v[v][u] < inst.rank_v[v][pv[v]]:
                return False
    return True


@dataclass(frozen=True)
class Rotation:
    """Cyclic pair list ((u0,v0),...): each u_i trades v_i for v_{i+1}."""

    pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class RotationPoset:
    rotations: tuple[Rotation, ...]
    before: tuple[tuple[int, int], ...]  # (i, j): i must be eliminated before j
    blocks: tuple[frozenset[tuple[int, int]], ...]  # preference-slice per rotation
    man_optimal: tuple[int, ...]  # partner of each u
    woman_optimal: tuple[int, ...]


def _exposed_cycles(inst: SmInstance, cur):
    """Rotations exposed in the matching ``cur`` (partner array for U)."""
    n = inst.n
    partner_of_v = [0] * n
    for u, v in enumerate(cur):
        partner_of_v[v] = u
    succ = [None] * n
    for u in range(n):
        for v in inst.pref_u[u]:
            if inst.rank_v[v][u] < inst.rank_v[v][partner_of_v[v]]:
                succ[u] = partner_of_v[v]
                break
    cycles = []
    color = [0] * n
    for u0 in range(n):
        if color[u0] or succ[u0] is None:
            continue
        path, pos = [], {}
        u = u0
        while u is not None and color[u] == 0:
            color[u] = 1
            pos[u] = len(path)
            path.append(u)
            u = succ[u]
        if u is not None and color[u] == 1:
            cyc = path[pos[u]:]
            shift = cyc.index(min(cyc))
            cycles.append(cyc[shift:] + cyc[:shift])
        for w in path:
            color[w] = 2
    return cycles


def build_rotation_poset(inst: SmInstance) -> RotationPoset:
    """Enumerate all rotations and their precedence DAG from the U-optimal end.

    Precedence arcs come from the two classical labelling rules: the
    rotation that moved u onto v precedes any rotation moving u off v, and
    the rotation that eliminated (u, v) precedes any rotation moving u
    across v.  Correctness is certified against brute-force enumeration in
    the tests rather than argued here.
    """
    n = inst.n
    m0 = _propose(inst.pref_u, inst.rank_v)
    mz_pairs = gale_shapley(inst, "v")
    mz = [None] * n
    for u, v in mz_pairs:
        mz[u] = v

    cur = list(m0)
    rotations: list[Rotation] = []
    moved_to: dict[tuple[int, int], int] = {}
    eliminated_by: dict[tuple[int, int], int] = {}
    while cur != mz:
        cycles = _exposed_cycles(inst, cur)
        if not cycles:
            raise InternalInvariantError("no exposed rotation before reaching the V-optimal matching")
        for cyc in cycles:
            c = len(cyc)
            pairs = tuple((u, cur[u]) for u in cyc)
            idx = len(rotations)
            rotations.append(Rotation(pairs))
            for i in range(c):
                u_i, v_i = pairs[i]
                v_next = pairs[(i + 1) % c][1]
                u_prev = pairs[(i - 1) % c][0]
                moved_to[(u_i, v_next)] = idx
                # v_i switches from u_i up to u_prev: pairs in between die
                lo = inst.rank_v[v_i][u_prev]
                hi = inst.rank_v[v_i][u_i]
                for r in range(lo + 1, hi + 1):
                    eliminated_by[(inst.pref_v[v_i][r], v_i)] = idx
            for i in range(c):
                cur[cyc[i]] = pairs[(i + 1) % c][1]

    before = set()
    for idx, rho in enumerate(rotations):
        c = len(rho.pairs)
        for i in range(c):
            u, v = rho.pairs[i]
            v_next = rho.pairs[(i + 1) % c][1]
            prev = moved_to.get((u, v))
            if prev is not None and prev != idx:
                before.add((prev, idx))
            for r in range(inst.rank_u[u][v] + 1, inst.rank_u[u][v_next]):
                via = eliminated_by[(u, inst.pref_u[u][r])]
                if via != idx:
                    before.add((via, idx))

    blocks = []
    for rho in rotations:
        c = len(rho.pairs)
        block = set()
        for i in range(c):
            u, v = rho.pairs[i]
            v_next = rho.pairs[(i + 1) % c][1]
            for r in range(inst.rank_u[u][v] + 1, inst.rank_u[u][v_next] + 1):
                block.add((u, inst.pref_u[u][r]))
        blocks.append(frozenset(block))

    return RotationPoset(tuple(rotations), tuple(sorted(before)), tuple(blocks), tuple(m0), tuple(mz))


def p_set(inst: SmInstance, partner) -> frozenset[tuple[int, int]]:
    """All pairs (u, v) with v at least as preferred as u's partner."""
    out = set()
    for u in range(inst.n):
        for r in range(inst.rank_u[u][partner[u]] + 1):
            out.add((u, inst.pref_u[u][r]))
    return frozenset(out)


def block_partition(inst: SmInstance, rp: RotationPoset) -> BlockPartition:
    """Ground set is U x (V plus a per-instance top column encoded as v = n)."""
    n = inst.n
    ground = {(u, v) for u in range(n) for v in range(n)} | {(u, n) for u in range(n)}
    bot = p_set(inst, rp.man_optimal)
    top_members = p_set(inst, rp.woman_optimal)
    top = frozenset(ground - top_members)
    union_blocks = frozenset().union(*rp.blocks) if rp.blocks else frozenset()
    if union_blocks != top_members - bot:
        raise InternalInvariantError("rotation blocks do not partition the P-set difference")
    interior_arcs = [(j, i) for i, j in rp.before]  # poset arcs point larger -> smaller
    return BlockPartition.build(bot, top, rp.blocks, interior_arcs)


def sm_pre_reduction(inst: SmInstance) -> PreReductionMap:
    """Element (u, v) maps to itself and to the next entry in u's list.

    The cover of u's last choice is the top column (u, n); matched pairs
    are exactly those whose own image is in a P-set but whose cover is not.
    """
    n = inst.n
    pairs = []
    for u in range(n):
        for v in range(n):
            r = inst.rank_u[u][v]
            cover = (u, inst.pref_u[u][r + 1]) if r + 1 < n else (u, n)
            pairs.append(((u, v), cover))
    return PreReductionMap(tuple(pairs))


def solve_diverse_sm(inst: SmInstance, k: int, measure="sum", backend="auto") -> tuple[DiverseResult, tuple]:
    """k maximally diverse stable matchings.

    Returns the generic result (element indices are u*n + v) together with
    the decoded matchings as frozensets of (u, v) pairs, each revalidated
    for stability.
    """
    rp = build_rotation_poset(inst)
    part = block_partition(inst, rp)
    pre = sm_pre_reduction(inst)
    rmap = lift(pre, part)
    result = solve_generic(part.poset, rmap, k, measure, backend)
    n = inst.n
    matchings = tuple(frozenset(divmod(e, n) for e in s) for s in result.solutions)
    for m in matchings:
        if not is_stable(inst, m):
            raise InternalInvariantError("pipeline returned an unstable matching")
    return result, matchings


def parse_preferences(text: str) -> SmInstance:
    """Line 1: n; then n U-side preference permutations, then n V-side (1-based)."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, line))
    if not rows:
        raise InputFormatError("empty preference file")
    lineno, first = rows[0]
    try:
        n = int(first)
    except ValueError:
        raise InputFormatError(f"expected instance size, got {first!r}", lineno) from None
    if n < 1:
        raise InputFormatError("instance size must be positive", lineno)
    if len(rows) != 1 + 2 * n:
        raise InputFormatError(f"expected {2 * n} preference lines after the size, found {len(rows) - 1}")
    sides = []
    for lineno, line in rows[1:]:
        try:
            perm = [int(tok) - 1 for tok in line.split()]
        except ValueError:
            raise InputFormatError("non-integer preference entry", lineno) from None
        if sorted(perm) != list(range(n)):
            raise InputFormatError(f"preference line is not a permutation of 1..{n}", lineno)
        sides.append(tuple(perm))
    return SmInstance(tuple(sides[:n]), tuple(sides[n:]))
