"""Shared brute-force oracles, written independently of the library paths.

Everything here favours obviousness over speed: plain loops, Fractions,
and explicit enumeration.  The library's indexed/vectorised code must
agree with these on every instance the tests throw at it.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from radial_lab.dyadic import CubeSet, Point2


def oracle_box_count(S: CubeSet, m: int) -> int:
    k = S.level - m
    return len({(i >> k, j >> k) for i, j in S.members})


def oracle_cubes_in_ball(S: CubeSet, center: Point2, r: Fraction) -> int:
    """Closed-cube / closed-ball intersection count, pure Fractions."""
    h = Fraction(1, 1 << S.level)
    r2 = Fraction(r) * Fraction(r)
    hits = 0
    for i, j in S.members:
        dx = max(Fraction(0), i * h - center.x, center.x - (i + 1) * h)
        dy = max(Fraction(0), j * h - center.y, center.y - (j + 1) * h)
        if dx * dx + dy * dy <= r2:
            hits += 1
    return hits


def within_frostman_bound(count: int, e: int, s: Fraction, C: Fraction, total: int) -> bool:
    """count <= C * 2^(-s*e) * total, decided by clearing the q-th root."""
    p, q = s.numerator, s.denominator
    return (count * C.denominator) ** q * 2 ** (p * e) <= (C.numerator * total) ** q


def oracle_ball_verified(S: CubeSet, s: Fraction, C: Fraction) -> bool:
    """Direct enumeration over member centers and dyadic radii."""
    n = S.level
    total = len(S)
    h2 = Fraction(1, 1 << (n + 1))
    for ci, cj in S.members:
        center = Point2((2 * ci + 1) * h2, (2 * cj + 1) * h2)
        for k in range(n + 1):
            count = oracle_cubes_in_ball(S, center, Fraction(1, 1 << k))
            if not within_frostman_bound(count, k, s, C, total):
                return False
    return True


def oracle_dyadic_verified(S: CubeSet, s: Fraction, C: Fraction) -> bool:
    """Direct enumeration over every occupied ancestor at every level."""
    total = len(S)
    for m in range(S.level + 1):
        k = S.level - m
        counts: dict = {}
        for i, j in S.members:
            key = (i >> k, j >> k)
            counts[key] = counts.get(key, 0) + 1
        for count in counts.values():
            if not within_frostman_bound(count, m, s, C, total):
                return False
    return True


def _solve2(l1, l2):
    (a1, b1, c1), (a2, b2, c2) = l1, l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return (Fraction(c1 * b2 - c2 * b1, det), Fraction(a1 * c2 - a2 * c1, det))


def oracle_tube_meets(param_box, spatial_box) -> bool:
    """Vertex-enumeration feasibility of the tube/cube intersection system.

    param_box, spatial_box: (lo_x, hi_x, lo_y, hi_y) as Fractions.  The
    system is (a, b) in the closed param box with a*x0 + b <= y1 and
    a*x1 + b >= y0; nonempty iff some pairwise boundary intersection is
    feasible.  Independent of the library's two-corner shortcut.
    """
    a0, a1, b0, b1 = param_box
    x0, x1, y0, y1 = spatial_box
    lines = [
        (Fraction(1), Fraction(0), a0),
        (Fraction(1), Fraction(0), a1),
        (Fraction(0), Fraction(1), b0),
        (Fraction(0), Fraction(1), b1),
        (x0, Fraction(1), y1),
        (x1, Fraction(1), y0),
    ]
    for ii in range(len(lines)):
        for jj in range(ii + 1, len(lines)):
            pt = _solve2(lines[ii], lines[jj])
            if pt is None:
                continue
            a, b = pt
            if not (a0 <= a <= a1 and b0 <= b <= b1):
                continue
            if a * x0 + b <= y1 and a * x1 + b >= y0:
                return True
    return False


def oracle_ball_verified_int(S: CubeSet, s: Fraction, C: Fraction) -> bool:
    """Same enumeration as oracle_ball_verified, plain integer loops.

    All geometry scaled by 2^(n+1): cube (i, j) is [2i, 2i+2]^2, its center
    (2i+1, 2j+1), radius 2^-k becomes 2^(n+1-k).
    """
    n = S.level
    total = len(S)
    members = S.members
    for ci, cj in members:
        cx, cy = 2 * ci + 1, 2 * cj + 1
        for k in range(n + 1):
            r = 1 << (n + 1 - k)
            r2 = r * r
            count = 0
            for i, j in members:
                dx = 2 * i - cx
                if dx < 0:
                    dx = cx - 2 * i - 2
                    if dx < 0:
                        dx = 0
                dy = 2 * j - cy
                if dy < 0:
                    dy = cy - 2 * j - 2
                    if dy < 0:
                        dy = 0
                if dx * dx + dy * dy <= r2:
                    count += 1
            if not within_frostman_bound(count, k, s, C, total):
                return False
    return True


def oracle_dyadic_verified_int(S: CubeSet, s: Fraction, C: Fraction) -> bool:
    """Occupied-ancestor enumeration with plain dict counting."""
    total = len(S)
    for m in range(S.level + 1):
        k = S.level - m
        counts: dict = {}
        for i, j in S.members:
            key = (i >> k) * (1 << m) + (j >> k)
            counts[key] = counts.get(key, 0) + 1
        if any(
            not within_frostman_bound(c, m, s, C, total) for c in counts.values()
        ):
            return False
    return True


def random_cubeset(rng: np.random.Generator, level: int, size: int) -> CubeSet:
    side = 1 << level
    size = min(size, side * side)
    flat = rng.choice(side * side, size=size, replace=False)
    return CubeSet(level, ((int(v) // side, int(v) % side) for v in flat))


@pytest.fixture
def rng():
    return np.random.default_rng(20250808)
