"""Exact dyadic-grid geometry on the unit square.

A level-n dyadic cube is the half-open grid square
``[i*2^-n, (i+1)*2^-n) x [j*2^-n, (j+1)*2^-n)`` with ``0 <= i, j < 2^n``,
so every point of ``[0,1)^2`` lies in exactly one cube per level.  All
geometric predicates run in exact rational arithmetic: coordinates are
dyadic rationals, and comparisons are done on integers after clearing the
common power-of-two denominator.  Floats never decide anything in this
module.

Ball intersection tests pair the *closed* cube with the *closed* ball,
which keeps the counts monotone under enlargement of either side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

import numpy as np

Rational = Union[int, float, Fraction]


def to_fraction(value: Rational) -> Fraction:
    """Coerce ints, floats and Fractions to an exact Fraction.

    Floats convert via their exact binary value, so 0.375 becomes 3/8 and
    stays dyadic; values like 0.1 become their (non-dyadic) IEEE expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, float)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def is_dyadic(value: Fraction) -> bool:
    """True when the denominator is a power of two."""
    d = value.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class Point2:
    """A point of the unit square with exact dyadic coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", to_fraction(self.x))
        object.__setattr__(self, "y", to_fraction(self.y))
        for c in (self.x, self.y):
            if not 0 <= c <= 1:
                raise ValueError(f"coordinate {c} outside [0, 1]")
            if not is_dyadic(c):
                raise ValueError(f"coordinate {c} is not a dyadic rational")


@dataclass(frozen=True)
class DyadicCube:
    """Half-open grid square at level ``level`` with corner indices (i, j)."""

    level: int
    i: int
    j: int

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError(f"level must be nonnegative, got {self.level}")
        side = 1 << self.level
        if not (0 <= self.i < side and 0 <= self.j < side):
            raise ValueError(
                f"indices ({self.i}, {self.j}) outside grid of side {side}"
            )

    @property
    def side(self) -> Fraction:
        return Fraction(1, 1 << self.level)

    @property
    def x_lo(self) -> Fraction:
        return Fraction(self.i, 1 << self.level)

    @property
    def x_hi(self) -> Fraction:
        return Fraction(self.i + 1, 1 << self.level)

    @property
    def y_lo(self) -> Fraction:
        return Fraction(self.j, 1 << self.level)

    @property
    def y_hi(self) -> Fraction:
        return Fraction(self.j + 1, 1 << self.level)

    @property
    def center(self) -> Point2:
        h = Fraction(1, 1 << (self.level + 1))
        return Point2(self.x_lo + h, self.y_lo + h)

    def contains(self, p: Point2) -> bool:
        """Half-open membership test."""
        return self.x_lo <= p.x < self.x_hi and self.y_lo <= p.y < self.y_hi


def cube_of_point(p: Point2, n: int) -> DyadicCube:
    """The unique level-n cube containing p under the half-open convention.

    Raises ValueError for points outside [0,1)^2; the half-open grid does
    not cover the far edges.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    if not (0 <= p.x < 1 and 0 <= p.y < 1):
        raise ValueError(f"point ({p.x}, {p.y}) outside [0,1)^2")
    i = (p.x.numerator << n) // p.x.denominator
    j = (p.y.numerator << n) // p.y.denominator
    return DyadicCube(n, i, j)


def ancestor(c: DyadicCube, m: int) -> DyadicCube:
    """The unique level-m cube containing c, for m <= c.level."""
    if not 0 <= m <= c.level:
        raise ValueError(f"ancestor level {m} not in [0, {c.level}]")
    k = c.level - m
    return DyadicCube(m, c.i >> k, c.j >> k)


class CubeSet:
    """A finite family of same-level dyadic cubes with a multiscale index.

    The index materialises, for every coarser level m, the number of
    members below each level-m cube; ``box_count`` is then a dictionary
    length lookup.  Instances are immutable after construction and safe to
    share across workers.
    """

    __slots__ = ("level", "members", "_member_set", "_iarr", "_jarr", "_index")

    def __init__(self, level: int, cubes: Iterable[Union[DyadicCube, tuple]]):
        if level < 0:
            raise ValueError("level must be nonnegative")
        side = 1 << level
        pairs = []
        for c in cubes:
            if isinstance(c, DyadicCube):
                if c.level != level:
                    raise ValueError(
                        f"cube at level {c.level} in a level-{level} set"
                    )
                pairs.append((c.i, c.j))
            else:
                i, j = c
                if not (0 <= i < side and 0 <= j < side):
                    raise ValueError(f"indices ({i}, {j}) outside level-{level} grid")
                pairs.append((int(i), int(j)))
        member_set = frozenset(pairs)
        if len(member_set) != len(pairs):
            raise ValueError("duplicate cubes in CubeSet")
        self.level = level
        self.members = tuple(sorted(member_set))
        self._member_set = member_set
        if self.members:
            arr = np.asarray(self.members, dtype=np.int64)
            self._iarr = arr[:, 0].copy()
            self._jarr = arr[:, 1].copy()
        else:
            self._iarr = np.empty(0, dtype=np.int64)
            self._jarr = np.empty(0, dtype=np.int64)
        # index[m] maps each occupied level-m ancestor to its member count
        index = []
        for m in range(level + 1):
            k = level - m
            counts: dict = {}
            for i, j in self.members:
                key = (i >> k, j >> k)
                counts[key] = counts.get(key, 0) + 1
            index.append(counts)
        self._index = tuple(index)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[DyadicCube]:
        for i, j in self.members:
            yield DyadicCube(self.level, i, j)

    def __contains__(self, c) -> bool:
        if isinstance(c, DyadicCube):
            return c.level == self.level and (c.i, c.j) in self._member_set
        return tuple(c) in self._member_set

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CubeSet)
            and self.level == other.level
            and self._member_set == other._member_set
        )

    def __hash__(self) -> int:
        return hash((self.level, self._member_set))

    def __repr__(self) -> str:
        return f"CubeSet(level={self.level}, size={len(self)})"

    def ancestor_counts(self, m: int) -> dict:
        """Member counts keyed by occupied level-m ancestor, m <= level."""
        if not 0 <= m <= self.level:
            raise ValueError(f"level {m} not in [0, {self.level}]")
        return dict(self._index[m])

    def index_arrays(self) -> tuple:
        """(i, j) member indices as int64 arrays in canonical sorted order."""
        return self._iarr, self._jarr

    @classmethod
    def full_grid(cls, level: int) -> "CubeSet":
        side = 1 << level
        return cls(level, ((i, j) for i in range(side) for j in range(side)))


def box_count(S: CubeSet, m: int) -> int:
    """Number of level-m cubes containing at least one member of S."""
    if not 0 <= m <= S.level:
        raise ValueError(f"coarser level {m} not in [0, {S.level}]")
    return len(S._index[m])


def _ball_scale(S: CubeSet, center: Point2, r: Fraction) -> int:
    """Common denominator clearing the cube grid, the center and the radius."""
    scale = 1 << S.level
    for f in (center.x, center.y, r):
        scale = scale * f.denominator // math.gcd(scale, f.denominator)
    return scale


def ball_hit_mask(S: CubeSet, center: Point2, r: Rational) -> np.ndarray:
    """Boolean mask over canonical member order: closed cube meets B(center, r).

    Exact squared-distance comparison on integers scaled by the common
    denominator.  Dyadic inputs at desk scale fit comfortably in int64 and
    take the vectorised path; anything larger falls back to python integers.
    """
    r = to_fraction(r)
    scale = _ball_scale(S, center, r)
    cx = center.x.numerator * (scale // center.x.denominator)
    cy = center.y.numerator * (scale // center.y.denominator)
    rs = r.numerator * (scale // r.denominator)
    u = scale >> S.level  # side of a level-n cube in scaled units
    if scale < (1 << 30):
        xl = S._iarr * u
        yl = S._jarr * u
        dx = np.maximum(0, np.maximum(xl - cx, cx - (xl + u)))
        dy = np.maximum(0, np.maximum(yl - cy, cy - (yl + u)))
        return dx * dx + dy * dy <= rs * rs
    out = np.zeros(len(S), dtype=bool)
    r2 = rs * rs
    for idx, (i, j) in enumerate(S.members):
        dx = max(0, i * u - cx, cx - (i + 1) * u)
        dy = max(0, j * u - cy, cy - (j + 1) * u)
        out[idx] = dx * dx + dy * dy <= r2
    return out


def cubes_in_ball(S: CubeSet, center: Point2, r: Rational) -> int:
    """Members of S whose closed cube intersects the closed ball B(center, r).

    The radius must satisfy 2^-level <= r <= 1.
    """
    r = to_fraction(r)
    if not Fraction(1, 1 << S.level) <= r <= 1:
        raise ValueError(f"radius {r} outside [2^-{S.level}, 1]")
    return int(ball_hit_mask(S, center, r).sum())
