"""Diverse solutions for flow- and lattice-structured combinatorial problems.

Computes k solutions maximising pairwise-Hamming or coverage diversity (or
minimising a general discrete-convex multiplicity penalty) for problems
whose solution family is the image of a poset's ideals: unweighted minimum
s-t cuts, stable matchings, and explicit sublattices of products of total
orders.  The optimisation reduces to one classical min-cost-flow or min-cut
computation.
"""

from . import convex, core, cut, flow, mcf, mincut, oracle, ringfamily, stable_matching, total_orders
from .core import BOT, TOP, KPotential, KPotentialInstance, PosetDag, ReductionMap, SolutionTuple

__all__ = [
    "convex",
    "core",
    "cut",
    "flow",
    "mcf",
    "mincut",
    "oracle",
    "ringfamily",
    "stable_matching",
    "total_orders",
    "BOT",
    "TOP",
    "KPotential",
    "KPotentialInstance",
    "PosetDag",
    "ReductionMap",
    "SolutionTuple",
]

__version__ = "0.1.0"
