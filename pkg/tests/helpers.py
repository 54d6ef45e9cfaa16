"""Shared tiny instances and random generators for the test suite."""

from __future__ import annotations

import random

from diverseflow.core import BOT, TOP, PosetDag, ReductionMap

# Path graph s -> a -> t.  Poset blocks: bot {s}, top {t}, one interior {a}.
G2_ARCS = [(0, 1), (1, 2)]  # vertex ids: s=0, a=1, t=2
G2_S, G2_T = 0, 2

# Diamond s -> {a, b} -> t.
G1_ARCS = [(0, 1), (0, 2), (1, 3), (2, 3)]  # s=0, a=1, b=2, t=3
G1_S, G1_T = 0, 3


def g2_poset():
    # interior vertex 2 is the {a} block
    return PosetDag(3, ((TOP, 2), (2, BOT)))


def g2_reduction(poset=None):
    poset = poset or g2_poset()
    # element 0 = arc sa: (e+, e-) = (bot, m); element 1 = arc at: (m, top)
    return ReductionMap.normalize([(BOT, 2), (2, TOP)], poset)


def g1_poset():
    # interior vertices 2 ({a}) and 3 ({b}), incomparable
    return PosetDag(4, ((TOP, 2), (TOP, 3), (2, BOT), (3, BOT)))


def g1_reduction(poset=None):
    poset = poset or g1_poset()
    # elements: sa, sb, at, bt
    return ReductionMap.normalize([(BOT, 2), (BOT, 3), (2, TOP), (3, TOP)], poset)


# 2x2 stable matching with two stable matchings (all-first-choices vs swap)
SM1_PREF_U = [[0, 1], [1, 0]]  # u1: v1 > v2 ; u2: v2 > v1
SM1_PREF_V = [[1, 0], [0, 1]]  # v1: u2 > u1 ; v2: u1 > u2

# Latin-square preferences, n = 3: a chain of three stable matchings
LATIN3_PREF_U = [[0, 1, 2], [1, 2, 0], [2, 0, 1]]
LATIN3_PREF_V = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]


def random_digraph(rng: random.Random, n_range=(4, 7), m_range=(5, 12)):
    """Arc list with possible parallels; s and t distinct, t maybe unreachable."""
    n = rng.randint(*n_range)
    m = rng.randint(*m_range)
    arcs = []
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n)
        while v == u:
            v = rng.randrange(n)
        arcs.append((u, v))
    s, t = rng.sample(range(n), 2)
    return n, arcs, s, t


def random_preferences(rng: random.Random, n: int):
    pref_u = [rng.sample(range(n), n) for _ in range(n)]
    pref_v = [rng.sample(range(n), n) for _ in range(n)]
    return pref_u, pref_v


def random_poset(rng: random.Random, n_interior_max=4):
    """Random poset DAG on <= n_interior_max interior vertices plus bot/top."""
    ni = rng.randint(0, n_interior_max)
    n = ni + 2
    if ni == 0:
        return PosetDag(2, ((TOP, BOT),))
    # random order among interior ids 2..n-1: arcs only from lower topo rank
    order = list(range(2, n))
    rng.shuffle(order)
    arcs = set()
    for i in range(ni):
        for j in range(i + 1, ni):
            if rng.random() < 0.4:
                arcs.add((order[i], order[j]))
    indeg = {v: 0 for v in range(2, n)}
    outdeg = {v: 0 for v in range(2, n)}
    for u, v in arcs:
        outdeg[u] += 1
        indeg[v] += 1
    for v in range(2, n):
        if indeg[v] == 0:
            arcs.add((TOP, v))
        if outdeg[v] == 0:
            arcs.add((v, BOT))
    return PosetDag(n, tuple(sorted(arcs)))


def random_reduction(rng: random.Random, poset: PosetDag, n_elements: int):
    """Random element images (e+, e-), each pair order-consistent."""
    pairs = []
    for _ in range(n_elements):
        em = rng.randrange(poset.n)
        below = [v for v in range(poset.n) if poset.reaches(em, v)]
        ep = rng.choice(below)
        pairs.append((ep, em))
    return ReductionMap.normalize(pairs, poset)


def random_chain_reduction(rng: random.Random, poset: PosetDag, n_chains: int):
    """Elements laid along top-to-bottom chains; gives equal-size families."""
    pairs = []
    for _ in range(n_chains):
        chain = [TOP]
        v = TOP
        while v != BOT:
            v = rng.choice(poset.out_adj[v])
            chain.append(v)
        for above, below in zip(chain, chain[1:]):
            pairs.append((below, above))
    return ReductionMap.normalize(pairs, poset)


def random_convex(rng: random.Random, k: int):
    from diverseflow import convex

    kind = rng.choice(["square", "binom", "cov", "table"])
    if kind == "square":
        return convex.square(k)
    if kind == "binom":
        return convex.binom(k)
    if kind == "cov":
        return convex.cov(k)
    slopes = sorted(rng.randint(0, 3) for _ in range(k))
    vals = [0]
    for s in slopes:
        vals.append(vals[-1] + s)
    return convex.validate_table(vals)


def enum_potentials(inst):
    """Every valid level assignment of an instance, by direct product scan."""
    from itertools import product

    from diverseflow.core import KPotential, check_potential

    n, k = inst.n, inst.k
    for combo in product(range(k + 1), repeat=n - 2):
        values = (k, 0) + combo
        p = KPotential(values)
        if check_potential(p, inst) is None:
            yield p
