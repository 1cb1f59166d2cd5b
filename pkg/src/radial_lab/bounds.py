"""Closed forms for the radial/orthogonal projection dimension bounds.

Every function is a min/max of affine expressions, evaluated on whatever
numeric type comes in (float or Fraction), so exact grids stay exact.
``coupled_fixed_point`` verifies the reduction of the two-variable
inequality system to its closed form by actually iterating the system to
its least fixed point and asserting the match.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

Num = Union[int, float, Fraction]  # all bound algebra is type-preserving


def _check_range(name: str, v: Num, lo: Num, hi: Num) -> None:
    if not lo <= v <= hi:
        raise ValueError(f"{name}={v} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class BoundQuery:
    """Inputs for a bound-table row: ambient dimensions plus optional
    proof-level exponents and slack."""

    dim_x: Num
    dim_y: Num
    t_x: Optional[Num] = None
    t_y: Optional[Num] = None
    s_x: Optional[Num] = None
    s_y: Optional[Num] = None
    eps: Num = 0

    def __post_init__(self) -> None:
        _check_range("dim_x", self.dim_x, 0, 2)
        _check_range("dim_y", self.dim_y, 0, 2)
        for name in ("t_x", "t_y", "s_x", "s_y"):
            v = getattr(self, name)
            if v is not None:
                _check_range(name, v, 0, 1)
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")


def bound_osw1(dX: Num, dY: Num) -> Num:
    """min(dX, dY, 1): the baseline radial projection bound."""
    _check_range("dX", dX, 0, 2)
    _check_range("dY", dY, 0, 2)
    return min(dX, dY, 1)


def bound_osw2(dX: Num, dY: Num) -> Optional[Num]:
    """min(dX + dY - 1, 1), applicable only when dY > 1; None otherwise."""
    _check_range("dX", dX, 0, 2)
    _check_range("dY", dY, 0, 2)
    if dY <= 1:
        return None
    return min(dX + dY - 1, 1)


def bound_main(dX: Num, dY: Num) -> Num:
    """min((dX + dY)/2, dY, 1): the improved bound for dX > 0.

    Computed for dX = 0 too, with a warning: the hypothesis behind the
    bound requires strictly positive dX.
    """
    _check_range("dX", dX, 0, 2)
    _check_range("dY", dY, 0, 2)
    if dX == 0:
        warnings.warn("bound_main hypothesis needs dim_x > 0", stacklevel=2)
    return min((dX + dY) / 2, dY, 1)


def bound_orthogonal_exceptional(dY: Num, u: Num) -> Num:
    """max(2u - dY, 0): size of the exceptional direction set, 0 <= u <= min(dY, 1)."""
    _check_range("dY", dY, 0, 2)
    if not 0 <= u <= min(dY, 1):
        raise ValueError(f"u={u} outside [0, min(dY, 1)]")
    return max(2 * u - dY, 0)


def incidence_exponent(s: Num, t: Num) -> Num:
    """min(t, (s+t)/2, 1): the union-size exponent for s in (0,1], t in (0,2]."""
    if not 0 < s <= 1:
        raise ValueError(f"s={s} outside (0, 1]")
    if not 0 < t <= 2:
        raise ValueError(f"t={t} outside (0, 2]")
    return min(t, (s + t) / 2, 1)


def coupled_fixed_point(t_x: Num, t_y: Num, tol: float = 1e-9) -> tuple:
    """Least fixed point of the coupled exponent inequalities, from (0, 0).

    Iterates  s_y <- min(t_x, (s_x+t_x)/2, 1);  s_x <- min(t_y, (s_y+t_y)/2, 1)
    until the update falls below tol.  Each round trip contracts the error
    by a factor of at least 4, so the iteration cap is never the binding
    constraint.  The fixed point's s_x provably equals
    min(t_y, (t_x+t_y)/2, 1); that closed form is asserted before
    returning (s_x, s_y).
    """
    if not 0 < t_x <= 1:
        raise ValueError(f"t_x={t_x} outside (0, 1]")
    if not 0 < t_y <= 1:
        raise ValueError(f"t_y={t_y} outside (0, 1]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    tx, ty = float(t_x), float(t_y)
    s_x, s_y = 0.0, 0.0
    for _ in range(10_000):
        new_y = min(tx, (s_x + tx) / 2, 1.0)
        new_x = min(ty, (new_y + ty) / 2, 1.0)
        if abs(new_x - s_x) < tol / 4 and abs(new_y - s_y) < tol / 4:
            s_x, s_y = new_x, new_y
            break
        s_x, s_y = new_x, new_y
    else:
        raise RuntimeError("fixed-point iteration failed to converge")
    closed = min(ty, (tx + ty) / 2, 1.0)
    if abs(s_x - closed) > tol:
        raise AssertionError(
            f"fixed point s_x={s_x} disagrees with closed form {closed}"
        )
    return s_x, s_y


@dataclass(frozen=True)
class DominanceReport:
    """Pointwise comparison of the main bound against the earlier two."""

    dX: float
    dY: float
    main: float
    osw1: float
    osw2: Optional[float]
    strict_over_osw1: bool
    strict_over_osw2: Optional[bool]


def dominance_report(dX: Num, dY: Num) -> DominanceReport:
    """Compare bound_main with bound_osw1 (and bound_osw2 when dY > 1).

    The main bound never falls below the others; strictness over osw1
    occurs exactly when dX < min(dY, 1), and over osw2 exactly when
    dX + dY - 1 < 1.  Those characterizations are test assertions; this
    report carries the actual pointwise comparisons.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        main = bound_main(dX, dY)
    o1 = bound_osw1(dX, dY)
    o2 = bound_osw2(dX, dY)
    return DominanceReport(
        dX=float(dX),
        dY=float(dY),
        main=float(main),
        osw1=float(o1),
        osw2=None if o2 is None else float(o2),
        strict_over_osw1=main > o1,
        strict_over_osw2=None if o2 is None else main > o2,
    )
