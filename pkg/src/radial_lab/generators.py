"""Constructors for cube families with known dimensions and certificates.

Base-4 digit Cantor products are the workhorse: their box and Hausdorff
dimensions coincide and are exactly ``(log2|Dx| + log2|Dy|)/2``.  Line and
graph sets realise one-dimensional families, and random dyadic subtrees
give certified families at any target exponent.  Every generator verifies
the certificate it advertises before returning; nothing uncertified leaves
this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np

from .dyadic import CubeSet, Rational, to_fraction
from .frostman import check_dyadic_frostman, max_dyadic_exponent


class GenerationError(RuntimeError):
    """Raised when a random generator cannot certify its output."""


GENERATOR_KINDS = ("cantor_product", "line_set", "random_tree", "full_grid", "graph_set")


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative recipe for a test set; random kinds require a seed."""

    kind: str
    level: int
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        if self.kind == "random_tree" and self.seed is None:
            raise ValueError("random_tree requires a seed")


def cantor_dimension(digits_x, digits_y) -> float:
    """Analytic dimension of the base-4 digit product set."""
    return (math.log2(len(set(digits_x))) + math.log2(len(set(digits_y)))) / 2


def cantor_product(n: int, digits_x, digits_y) -> CubeSet:
    """Cubes whose base-4 coordinate digits come from the allowed sets.

    The level must be even: one base-4 digit covers two binary levels.
    The result has (|Dx|*|Dy|)^(n/2) members.
    """
    if n < 0 or n % 2 != 0:
        raise ValueError("cantor_product needs an even nonnegative level")
    dx = sorted(set(int(d) for d in digits_x))
    dy = sorted(set(int(d) for d in digits_y))
    for ds in (dx, dy):
        if not ds:
            raise ValueError("digit sets must be nonempty")
        if any(d < 0 or d > 3 for d in ds):
            raise ValueError("digits must lie in {0, 1, 2, 3}")
    half = n // 2
    xs = [sum(d << (2 * pos) for pos, d in enumerate(rev)) for rev in product(dx, repeat=half)]
    ys = [sum(d << (2 * pos) for pos, d in enumerate(rev)) for rev in product(dy, repeat=half)]
    return CubeSet(n, ((i, j) for i in xs for j in ys))


def line_set(n: int, a: Rational, b: Rational) -> CubeSet:
    """All level-n cubes whose closed square meets the line y = a*x + b.

    Slope and intercept live in [0,1].  The result always passes the
    dyadic certificate at (1, 4); that is asserted before returning.
    """
    a, b = to_fraction(a), to_fraction(b)
    if not (0 <= a <= 1 and 0 <= b <= 1):
        raise ValueError(f"line parameters ({a}, {b}) outside [0,1]^2")
    side = 1 << n
    members = []
    for i in range(side):
        y_min = a * Fraction(i, side) + b
        y_max = a * Fraction(i + 1, side) + b
        j_lo = max(0, math.ceil(y_min * side - 1))
        j_hi = min(side - 1, math.floor(y_max * side))
        for j in range(j_lo, j_hi + 1):
            members.append((i, j))
    if not members:
        raise ValueError(f"line y = {a}x + {b} misses the unit square")
    S = CubeSet(n, members)
    cert = check_dyadic_frostman(S, Fraction(1), Fraction(4))
    if not cert.verified:
        raise AssertionError("line_set output failed its (1, 4) certificate")
    return S


def graph_set(n: int, a2: Rational, a1: Rational, a0: Rational) -> CubeSet:
    """Level-n cubes meeting the graph of y = a2*x^2 + a1*x + a0 inside the square.

    Exact per-column range computation: the quadratic's extrema on a closed
    x-interval sit at the endpoints or at the rational vertex.
    """
    a2, a1, a0 = to_fraction(a2), to_fraction(a1), to_fraction(a0)
    side = 1 << n

    def value(x: Fraction) -> Fraction:
        return a2 * x * x + a1 * x + a0

    members = []
    for i in range(side):
        x_lo = Fraction(i, side)
        x_hi = Fraction(i + 1, side)
        candidates = [value(x_lo), value(x_hi)]
        if a2 != 0:
            vx = -a1 / (2 * a2)
            if x_lo <= vx <= x_hi:
                candidates.append(value(vx))
        y_min, y_max = min(candidates), max(candidates)
        if y_max < 0 or y_min > 1:
            continue
        j_lo = max(0, math.ceil(y_min * side - 1))
        j_hi = min(side - 1, math.floor(y_max * side))
        for j in range(j_lo, j_hi + 1):
            members.append((i, j))
    if not members:
        raise ValueError("graph misses the unit square")
    return CubeSet(n, members)


def random_tree_set(n: int, t: Rational, seed: int, top_band: bool = False) -> CubeSet:
    """Random dyadic subtree with ~2^t children per surviving cube.

    Each survivor keeps floor(2^t) children, plus one more with probability
    frac(2^t) (stochastic rounding), chosen uniformly among its four
    children; the leaf count is 2^(t*n) in expectation.  The output is
    re-certified at constant 4 with step-1/64 exponent resolution, and the
    measured exponent must reach t - 0.1; up to 8 derived seeds are tried
    before giving up.

    ``top_band`` confines the first branching to the upper half of the
    square (y >= 1/2), which incidence experiments use to keep center-line
    intercepts inside the parameter square; it requires t <= 1 since only
    two children are available at the root.
    """
    t = to_fraction(t)
    if not 0 <= t <= 2:
        raise ValueError(f"target exponent {t} outside [0, 2]")
    if top_band and t > 1:
        raise ValueError("top_band generation needs t <= 1")
    if t == 2:
        return CubeSet.full_grid(n)
    branch = 2.0 ** float(t)
    base = int(branch)
    frac = branch - base
    target = t - Fraction(1, 10)
    for attempt in range(8):
        rng = np.random.default_rng([seed, attempt])
        nodes = [(0, 0)]
        for level in range(n):
            choices = (2, 3) if (top_band and level == 0) else (0, 1, 2, 3)
            nxt = []
            for (i, j) in nodes:
                keep = base + (1 if (frac > 0 and rng.random() < frac) else 0)
                keep = min(keep, len(choices))
                picks = rng.choice(choices, size=keep, replace=False)
                for c in picks:
                    nxt.append(((i << 1) | (int(c) & 1), (j << 1) | (int(c) >> 1)))
            nodes = nxt
        S = CubeSet(n, nodes)
        measured = max_dyadic_exponent(S, Fraction(4), Fraction(1, 64))
        if measured is not None and measured >= target:
            return S
    raise GenerationError(
        f"random_tree_set(level={n}, t={t}, seed={seed}) failed certification 8 times"
    )


def full_grid(n: int) -> CubeSet:
    return CubeSet.full_grid(n)


def build(spec: GeneratorSpec) -> CubeSet:
    """Materialise a GeneratorSpec; identical specs give identical sets."""
    p = spec.params
    if spec.kind == "cantor_product":
        return cantor_product(spec.level, p["digits_x"], p["digits_y"])
    if spec.kind == "line_set":
        return line_set(spec.level, p["a"], p["b"])
    if spec.kind == "random_tree":
        return random_tree_set(spec.level, p["t"], spec.seed)
    if spec.kind == "full_grid":
        return full_grid(spec.level)
    if spec.kind == "graph_set":
        return graph_set(spec.level, p.get("a2", 0), p.get("a1", 0), p.get("a0", 0))
    raise ValueError(f"unknown generator kind {spec.kind!r}")
