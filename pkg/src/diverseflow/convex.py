"""Discrete convex penalty functions and their breakpoint structure.

A penalty spec is an integer-valued function phi on [0, k] with phi(0) = 0,
non-decreasing and midpoint-convex on the integer grid.  The solver only ever
evaluates phi at multiplicities, which lie in [0, k], so no behaviour outside
that range is stored.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "ConvexSpec",
    "BreakpointProfile",
    "square",
    "binom",
    "cov",
    "table",
    "validate_table",
    "breakpoint_profile",
]

SQUARE = "square"
BINOM = "binom"
COV = "cov"
TABLE = "table"


@dataclass(frozen=True)
class ConvexSpec:
    """A discrete convex function usable as a diversity penalty.

    kind is one of "square" (x^2), "binom" (x*(x-1)/2), "cov" (max(0, x-1))
    or "table" (explicit values for 0..k_bound).
    """

    kind: str
    k_bound: int
    values: tuple[int, ...] = ()

    def eval(self, x: int) -> int:
        if x < 0 or x > self.k_bound:
            raise ValueError(f"phi argument {x} outside [0, {self.k_bound}]")
        if self.kind == SQUARE:
            return x * x
        if self.kind == BINOM:
            return x * (x - 1) // 2
        if self.kind == COV:
            return max(0, x - 1)
        return self.values[x]

    def __call__(self, x: int) -> int:
        return self.eval(x)


def square(k: int) -> ConvexSpec:
    return ConvexSpec(SQUARE, k)


def binom(k: int) -> ConvexSpec:
    return ConvexSpec(BINOM, k)


def cov(k: int) -> ConvexSpec:
    return ConvexSpec(COV, k)


def validate_table(values) -> ConvexSpec:
    """Build a table spec after checking phi(0)=0, monotonicity and convexity.

    values[x] is phi(x) for x in 0..k; the implied k_bound is len(values)-1.
    """
    vals = tuple(int(v) for v in values)
    if not vals:
        raise ValueError("empty table")
    if vals[0] != 0:
        raise ValueError(f"phi(0) must be 0, got {vals[0]} at index 0")
    for i in range(1, len(vals)):
        if vals[i] < vals[i - 1]:
            raise ValueError(f"monotonicity violated at index {i}: {vals[i]} < {vals[i - 1]}")
    for i in range(1, len(vals) - 1):
        if vals[i - 1] + vals[i + 1] < 2 * vals[i]:
            raise ValueError(
                f"convexity violated at index {i}: "
                f"{vals[i - 1]} + {vals[i + 1]} < 2*{vals[i]}"
            )
    return ConvexSpec(TABLE, len(vals) - 1, vals)


def table(values) -> ConvexSpec:
    return validate_table(values)


@dataclass(frozen=True)
class BreakpointProfile:
    """Breakpoints of phi within [0, k], with slopes at the interior ones.

    points is sorted with points[0] == 0 and points[-1] == k.  For the
    interior point points[i] (1 <= i <= z-1, z = len(points)-1),
    left_slopes[i-1] and right_slopes[i-1] are phi(b)-phi(b-1) and
    phi(b+1)-phi(b).  Slopes telescope: the right slope at one interior
    point is the left slope at the next.  phi_k is phi(k), kept so the
    degenerate z == 1 case (phi linear on [0, k]) still knows its slope.
    """

    points: tuple[int, ...]
    left_slopes: tuple[int, ...]
    right_slopes: tuple[int, ...]
    phi_k: int

    @property
    def z(self) -> int:
        return len(self.points) - 1

    def segment_slope(self, i: int) -> int:
        """Slope of phi on the segment [points[i], points[i+1]]."""
        if i < 0 or i >= self.z:
            raise IndexError(i)
        if not self.left_slopes:
            return self.phi_k // self.points[-1]
        if i == 0:
            return self.left_slopes[0]
        return self.right_slopes[i - 1]


def breakpoint_profile(spec: ConvexSpec, k: int) -> BreakpointProfile:
    """Breakpoints of spec within [0, k], always including 0 and k.

    An interior integer x is a breakpoint when the left and right slopes of
    phi at x differ.  square and binom break at every integer; cov only at 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if spec.kind == TABLE and spec.k_bound < k:
        raise ValueError(f"table defined up to {spec.k_bound}, need {k}")
    pts = [0]
    left, right = [], []
    for x in range(1, k):
        ls = spec.eval(x) - spec.eval(x - 1)
        rs = spec.eval(x + 1) - spec.eval(x)
        if ls < rs:
            pts.append(x)
            left.append(ls)
            right.append(rs)
        elif ls > rs:
            raise ValueError(f"spec not convex at {x}")
    pts.append(k)
    return BreakpointProfile(tuple(pts), tuple(left), tuple(right), spec.eval(k))
