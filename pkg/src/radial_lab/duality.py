"""Point-line duality and delta-tubes.

The duality convention is fixed once: the parameter point (a, b) is the
non-vertical line ``y = a*x + b``, with both slope and intercept confined
to the unit square.  A tube is the line family swept by a parameter-space
dyadic cube.  Steep lines are out of scope here; experiments that need
them run the coordinate-swapped configuration instead.

The tube/cube intersection predicate is decided exactly.  Writing the
closed parameter box ``[a0,a1] x [b0,b1]`` and the closed spatial box
``[x0,x1] x [y0,y1]`` (all coordinates nonnegative, slopes nonnegative),
a line of the tube meets the cube iff

    a0*x0 + b0 <= y1   and   a1*x1 + b1 >= y0.

Necessity is monotonicity: every line of the tube stays above y1 on the
cube's x-range when the first inequality fails, and below y0 when the
second fails.  Sufficiency: if the corner (a1, b1) satisfies the first
constraint it is itself a witness; otherwise the segment of parameters
with ``a*x0 + b = y1`` crosses the box, and any such line passes through
the spatial corner (x0, y1) of the closed cube.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .dyadic import DyadicCube, Point2, Rational, to_fraction


@dataclass(frozen=True)
class Line:
    """The line y = a*x + b with slope and intercept in [0, 1]."""

    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", to_fraction(self.a))
        object.__setattr__(self, "b", to_fraction(self.b))
        if not (0 <= self.a <= 1 and 0 <= self.b <= 1):
            raise ValueError(f"dual point ({self.a}, {self.b}) outside [0,1]^2")

    def y_at(self, x: Rational) -> Fraction:
        return self.a * to_fraction(x) + self.b


@dataclass(frozen=True)
class Tube:
    """The family of lines dual to a parameter-space dyadic cube."""

    param: DyadicCube

    def contains_line(self, line: Line) -> bool:
        """Closed-box membership of the line's parameters."""
        q = self.param
        return q.x_lo <= line.a <= q.x_hi and q.y_lo <= line.b <= q.y_hi


@dataclass(frozen=True)
class Direction:
    """A unit direction with its angle in [0, 2*pi).

    The (dx, dy) representative is a float approximation; ``precision``
    states the bound on its deviation from the exact unit vector.
    """

    angle: float
    dx: float
    dy: float
    precision: float = 1e-12


def dual_of_point(p: Point2) -> Line:
    """Duality map: the point (a, b) becomes the line y = a*x + b."""
    return Line(p.x, p.y)


def line_through(p: Point2, q: Point2) -> Line:
    """The line joining two points, provided its dual lands in [0,1]^2."""
    if p.x == q.x:
        raise ValueError("vertical line has no dual in this convention")
    a = (q.y - p.y) / (q.x - p.x)
    b = p.y - a * p.x
    return Line(a, b)


def tube_of_param_cube(Q: DyadicCube) -> Tube:
    return Tube(Q)


def _meets(a0: Fraction, a1: Fraction, b0: Fraction, b1: Fraction,
           x0: Fraction, x1: Fraction, y0: Fraction, y1: Fraction) -> bool:
    return a0 * x0 + b0 <= y1 and a1 * x1 + b1 >= y0


def tube_meets_cube(T: Tube, Q: DyadicCube) -> bool:
    """True iff some line of the closed tube meets the closed cube."""
    p = T.param
    return _meets(p.x_lo, p.x_hi, p.y_lo, p.y_hi,
                  Q.x_lo, Q.x_hi, Q.y_lo, Q.y_hi)


def tube_meets_cube_indexed(n: int, p: int, q: int, i: int, j: int) -> bool:
    """Same-level predicate on raw indices, in pure integer arithmetic.

    Equivalent to ``tube_meets_cube(Tube(DyadicCube(n,p,q)), DyadicCube(n,i,j))``
    after clearing the 2^-2n denominator.
    """
    return p * i <= ((j + 1 - q) << n) and (p + 1) * (i + 1) >= ((j - q - 1) << n)


def intercept_range(n: int, p: int, i: int, j: int) -> tuple[int, int]:
    """Closed range [q_min, q_max] of intercept cells q with tube (p, q) meeting cube (i, j).

    Unclamped: the endpoints may fall outside [0, 2^n).  The range is the
    exact solution set of the predicate inequalities in q, so bucketing
    tubes by slope cell plus this range is a lossless index.
    """
    scale = 1 << n
    q_max = ((j + 1) * scale - p * i) // scale
    num = (j - 1) * scale - (p + 1) * (i + 1)
    q_min = -((-num) // scale)
    return q_min, q_max


def direction_between(x: Point2, y: Point2) -> Direction:
    """The unit direction (y - x)/|y - x|; the pair must be distinct."""
    vx = y.x - x.x
    vy = y.y - x.y
    if vx == 0 and vy == 0:
        raise ValueError("direction undefined for coincident points")
    fx, fy = float(vx), float(vy)
    norm = math.hypot(fx, fy)
    angle = math.atan2(fy, fx) % (2 * math.pi)
    return Direction(angle=angle, dx=fx / norm, dy=fy / norm)
