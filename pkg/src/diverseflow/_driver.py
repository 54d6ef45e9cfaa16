"""Shared back half of the application pipelines.

Each application reduces its problem to (poset, reduction map); this module
picks the penalty function and backend, runs the level-assignment solve,
and decodes the optimum back into k solutions over the application's
original element indices.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import convex as convex_mod
from . import cut as cut_backend
from . import mcf as mcf_backend
from .convex import ConvexSpec
from .core import (
    KPotential,
    PosetDag,
    ReductionMap,
    build_instance,
    convex_penalty,
    diversity_cov,
    diversity_sum,
    solutions_from_potential,
)
from .errors import ConfigError

__all__ = ["DiverseResult", "solve_generic", "resolve_backend", "spec_for_measure"]


@dataclass(frozen=True)
class DiverseResult:
    """Solutions are frozensets over the application's own element indices."""

    solutions: tuple[frozenset[int], ...]
    diversity: int
    objective: str  # "sum" | "cov" | "phi"
    backend: str
    k: int
    q: int
    cost: int  # optimal convex penalty of the solve
    potential: KPotential


def resolve_backend(measure, backend: str) -> str:
    if backend == "auto":
        return "cut" if measure in ("sum", "cov") else "mcf"
    if backend not in ("mcf", "cut"):
        raise ConfigError(f"unknown backend {backend!r}")
    if isinstance(measure, ConvexSpec) and backend == "cut":
        raise ConfigError("table penalties require the mcf backend")
    return backend


def spec_for_measure(measure, backend: str, k: int) -> ConvexSpec:
    """The penalty the chosen backend minimises for the requested measure.

    Pairwise-Hamming diversity uses x^2 under mcf but binom(x,2) under the
    cut gadget; the two have the same minimisers because the multiplicities
    sum to a constant.
    """
    if isinstance(measure, ConvexSpec):
        if measure.k_bound < k:
            raise ConfigError(f"table penalty defined up to {measure.k_bound}, need k={k}")
        return measure
    if measure == "sum":
        return convex_mod.binom(k) if backend == "cut" else convex_mod.square(k)
    if measure == "cov":
        return convex_mod.cov(k)
    raise ConfigError(f"unknown measure {measure!r}")


def solve_generic(poset: PosetDag, rmap: ReductionMap, k: int, measure, backend: str) -> DiverseResult:
    if k < 1:
        raise ConfigError("k must be >= 1")
    chosen = resolve_backend(measure, backend)
    spec = spec_for_measure(measure, chosen, k)
    inst = build_instance(poset, rmap, spec, k)
    if chosen == "cut":
        p, cost = cut_backend.solve_min_potential(inst)
    else:
        p, cost = mcf_backend.solve_min_potential(inst)
    t = solutions_from_potential(p, rmap, inst)
    if isinstance(measure, ConvexSpec):
        objective, diversity = "phi", convex_penalty(t, measure)
    elif measure == "sum":
        objective, diversity = "sum", diversity_sum(t)
    else:
        objective, diversity = "cov", diversity_cov(t)
    solutions = tuple(frozenset(rmap.kept[e] for e in s) for s in t.sets)
    return DiverseResult(solutions, diversity, objective, chosen, k, t.q, cost, p)
