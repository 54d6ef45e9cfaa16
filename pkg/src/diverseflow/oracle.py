"""Brute-force reference implementations for differential testing.

Nothing here is clever on purpose: every routine enumerates its search
space directly and carries a hard size guard.  These are the independent
oracles that the flow-based pipelines are validated against.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .convex import ConvexSpec
from .core import KPotential, KPotentialInstance, PosetDag, check_potential
from .errors import OracleSizeError

__all__ = [
    "OracleReport",
    "enum_ideals",
    "enum_min_cuts",
    "enum_stable_matchings",
    "best_ktuple",
    "brute_min_k_potential",
]


@dataclass(frozen=True)
class OracleReport:
    optimum: int
    best: tuple
    optimal_count: int


def enum_ideals(poset: PosetDag) -> list[frozenset[int]]:
    """All downward-closed interior subsets, as frozensets."""
    interior = list(poset.interior)
    ni = len(interior)
    if ni > 20:
        raise OracleSizeError(f"{ni} interior vertices is beyond the enumeration guard")
    # restrict each vertex's reachability mask to interior bit positions
    pos = {v: i for i, v in enumerate(interior)}
    masks = []
    for v in interior:
        m = 0
        rm = poset.reach_masks[v]
        for w in interior:
            if rm >> w & 1:
                m |= 1 << pos[w]
        masks.append(m)
    out = []
    for sub in range(1 << ni):
        closure = 0
        for i in range(ni):
            if sub >> i & 1:
                closure |= masks[i]
        if closure == sub:
            out.append(frozenset(interior[i] for i in range(ni) if sub >> i & 1))
    return out


def enum_min_cuts(n: int, arcs, s: int, t: int) -> list[frozenset[int]]:
    """All minimum s-t cuts of a unit-capacity digraph, as arc-index sets.

    Scans every vertex bipartition with s inside and t outside; keeps the
    outgoing arc sets of minimum size, deduplicated.
    """
    if n - 2 > 20:
        raise OracleSizeError(f"{n} vertices is beyond the enumeration guard")
    rest = [v for v in range(n) if v not in (s, t)]
    best_size = None
    cuts = set()
    for sub in range(1 << len(rest)):
        side = {s}
        for i, v in enumerate(rest):
            if sub >> i & 1:
                side.add(v)
        cut = frozenset(a for a, (u, v) in enumerate(arcs) if u in side and v not in side)
        if best_size is None or len(cut) < best_size:
            best_size = len(cut)
            cuts = {cut}
        elif len(cut) == best_size:
            cuts.add(cut)
    return sorted(cuts, key=sorted)


def enum_stable_matchings(pref_u, pref_v) -> list[frozenset[tuple[int, int]]]:
    """All stable matchings, by filtering every permutation for blocking pairs."""
    n = len(pref_u)
    if n > 6:
        raise OracleSizeError(f"n={n} is beyond the n! enumeration guard")
    rank_u = [{v: i for i, v in enumerate(p)} for p in pref_u]
    rank_v = [{u: i for i, u in enumerate(p)} for p in pref_v]
    out = []
    for perm in permutations(range(n)):
        stable = True
        for u in range(n):
            for v in range(n):
                if perm[u] == v:
                    continue
                if rank_u[u][v] < rank_u[u][perm[u]] and rank_v[v][u] < rank_v[v][perm.index(v)]:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            out.append(frozenset((u, perm[u]) for u in range(n)))
    return out


def best_ktuple(solutions, k: int, measure) -> OracleReport:
    """Exact optimum of a diversity measure over ordered k-tuples with repeats.

    measure is "sum" or "cov" (maximised) or a ConvexSpec (its multiplicity
    penalty is minimised).  Solutions are encoded as bitmasks so the scan
    stays cheap; symmetric-difference size is just a popcount.
    """
    sols = list(solutions)
    if not sols:
        raise ValueError("no solutions to choose from")
    if len(sols) ** k > 1_000_000:
        raise OracleSizeError(f"{len(sols)}^{k} tuples is beyond the enumeration guard")
    universe = sorted(set().union(*sols))
    pos = {e: i for i, e in enumerate(universe)}
    masks = [sum(1 << pos[e] for e in s) for s in sols]

    if isinstance(measure, ConvexSpec):
        def score(combo):
            total = 0
            for i in range(len(universe)):
                mu = sum(masks[c] >> i & 1 for c in combo)
                total += measure.eval(mu)
            return -total  # maximise the negated penalty
    elif measure == "sum":
        m = len(sols)
        dist = [[bin(masks[i] ^ masks[j]).count("1") for j in range(m)] for i in range(m)]

        def score(combo):
            return sum(dist[combo[i]][combo[j]] for i in range(k) for j in range(i + 1, k))
    elif measure == "cov":
        def score(combo):
            u = 0
            for c in combo:
                u |= masks[c]
            return bin(u).count("1")
    else:
        raise ValueError(f"unknown measure {measure!r}")

    best_score = None
    best_combo = None
    count = 0
    for combo in product(range(len(sols)), repeat=k):
        sc = score(combo)
        if best_score is None or sc > best_score:
            best_score, best_combo, count = sc, combo, 1
        elif sc == best_score:
            count += 1
    optimum = -best_score if isinstance(measure, ConvexSpec) else best_score
    return OracleReport(optimum, tuple(sols[c] for c in best_combo), count)


def brute_min_k_potential(inst: KPotentialInstance) -> tuple[KPotential, int]:
    """Exact minimum by scanning every interior level assignment."""
    n, k = inst.n, inst.k
    if (k + 1) ** (n - 2) > 1_000_000:
        raise OracleSizeError("potential space is beyond the enumeration guard")
    phi = inst.convex
    best_p, best_h = None, None
    for combo in product(range(k + 1), repeat=n - 2):
        values = (k, 0) + combo
        p = KPotential(values)
        if check_potential(p, inst) is not None:
            continue
        h = 0
        for (u, v), w in zip(inst.arcs, inst.weights):
            if w:
                h += w * phi.eval(values[v] - values[u])
        if best_h is None or h < best_h:
            best_p, best_h = p, h
    if best_p is None:
        raise ValueError("instance admits no valid potential")
    return best_p, best_h
