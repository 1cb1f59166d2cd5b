"""Discretized radial and orthogonal projections with box-dimension estimates.

Radial projection of a cube family from a viewpoint x covers, for every
member cube farther than the exclusion radius, the full angular interval
the closed cube subtends as seen from x.  Corner angles are computed in
floating point from exact coordinate differences and the interval is
widened outward by a fixed guard (2^-40 radians, far below any bin width
used here), so the marked bins genuinely cover the projection.  Dimension
estimates are always least-squares slopes over a window of scales, never
single-scale ratios; the estimator measures box-counting dimension, the
finite-data surrogate for Hausdorff dimension.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .dyadic import CubeSet, Point2, Rational, ball_hit_mask, to_fraction
from .frostman import BranchingProfile

_ANGLE_GUARD = 2.0 ** -40
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DirectionSet:
    """Occupied dyadic arcs: angle bins of width 2*pi/2^precision on [0, 2*pi)."""

    precision: int
    bins: frozenset

    def __len__(self) -> int:
        return len(self.bins)

    @property
    def empty(self) -> bool:
        """The empty-projection signal: every source cube was excluded."""
        return not self.bins

    def projective_bins(self) -> frozenset:
        """Bins folded under the antipodal identification (factor <= 2 in counts)."""
        half = 1 << (self.precision - 1)
        full = 1 << self.precision
        return frozenset(min(b, (b + half) % full) for b in self.bins)


@dataclass(frozen=True)
class DimensionEstimate:
    """Least-squares slope of log2-counts against scale, with diagnostics."""

    slope: float
    window: tuple
    residual: float
    counts: tuple


def _worker_count() -> int:
    env = os.environ.get("RADIAL_LAB_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _subtended_arcs(x: Point2, Y: CubeSet, rho: Fraction) -> Optional[list]:
    """Angular interval (lo, hi) per member cube at distance > rho from x.

    ``hi`` may exceed 2*pi to keep the interval contiguous across the cut.
    Returns None when every cube is excluded.  Exclusion is decided
    exactly; the closed-ball hit mask at radius rho is complemented.
    """
    included = ~ball_hit_mask(Y, x, rho)
    if not included.any():
        return None
    n = Y.level
    iarr, jarr = Y.index_arrays()
    fx, fy = float(x.x), float(x.y)
    scale = float(2 ** -n)
    arcs = []
    for i, j in zip(iarr[included], jarr[included]):
        xs = (float(i) * scale - fx, (float(i) + 1) * scale - fx)
        ys = (float(j) * scale - fy, (float(j) + 1) * scale - fy)
        angles = sorted(
            math.atan2(cy, cx) % _TWO_PI for cx in xs for cy in ys
        )
        # the subtended arc is the complement of the largest cyclic gap
        best_gap, best_idx = -1.0, 0
        for k in range(4):
            nxt = angles[(k + 1) % 4] + (_TWO_PI if k == 3 else 0.0)
            gap = nxt - angles[k]
            if gap > best_gap:
                best_gap, best_idx = gap, k
        if best_idx == 3:
            lo, hi = angles[0], angles[3]
        else:
            lo, hi = angles[best_idx + 1], angles[best_idx] + _TWO_PI
        arcs.append((lo, hi))
    return arcs


def _bins_of_arcs(arcs: Iterable[tuple], m: int) -> frozenset:
    width = _TWO_PI / (1 << m)
    full = 1 << m
    out = set()
    for lo, hi in arcs:
        b0 = math.floor((lo - _ANGLE_GUARD) / width)
        b1 = math.floor((hi + _ANGLE_GUARD) / width)
        if b1 - b0 >= full:
            out.update(range(full))
        else:
            out.update(b % full for b in range(b0, b1 + 1))
    return frozenset(out)


def radial_project(x: Point2, Y: CubeSet, m: int, rho: Rational) -> DirectionSet:
    """Cover of the radial projection of Y (minus a rho-ball around x).

    Marks every angle bin at precision m touched by the arc some included
    closed cube subtends from x.  An all-excluded source yields the empty
    DirectionSet rather than an error.
    """
    rho = to_fraction(rho)
    if rho < 2 * Fraction(1, 1 << Y.level):
        raise ValueError(f"exclusion radius {rho} below 2*2^-{Y.level}")
    if m < 1:
        raise ValueError("precision must be at least 1")
    arcs = _subtended_arcs(x, Y, rho)
    if arcs is None:
        return DirectionSet(m, frozenset())
    return DirectionSet(m, _bins_of_arcs(arcs, m))


def orthogonal_project(theta: float, S: CubeSet, m: int) -> frozenset:
    """Occupied width-2^-m intervals of the theta-axis shadow of S.

    Projects every closed member cube onto the axis with direction theta
    and marks the touched intervals (indices may be negative once the axis
    direction has a negative component).  Axis-aligned angles (multiples
    of pi/2) take an exact rational path; other angles use floats with the
    outward guard.
    """
    n = S.level
    iarr, jarr = S.index_arrays()
    quarter = theta / (math.pi / 2)
    out = set()
    if quarter == round(quarter):
        k = int(round(quarter)) % 4
        axis_i = (iarr, jarr, iarr, jarr)[k]
        sign = 1 if k < 2 else -1
        for v in axis_i:
            lo = sign * (int(v) + (k >= 2))
            hi = sign * (int(v) + (k < 2))
            # closed interval [lo, hi] * 2^-n, binned at 2^-m
            if m >= n:
                out.update(range(lo << (m - n), (hi << (m - n)) + 1))
            else:
                out.update(range(lo >> (n - m), (hi >> (n - m)) + 1))
        return frozenset(out)
    c, s = math.cos(theta), math.sin(theta)
    scale = 2.0 ** -n
    width = 2.0 ** -m
    for i, j in zip(iarr, jarr):
        dots = [
            (float(i) + di) * scale * c + (float(j) + dj) * scale * s
            for di in (0, 1)
            for dj in (0, 1)
        ]
        lo, hi = min(dots), max(dots)
        b0 = math.floor((lo - _ANGLE_GUARD) / width)
        b1 = math.floor((hi + _ANGLE_GUARD) / width)
        out.update(range(b0, b1 + 1))
    return frozenset(out)


def estimate_dimension(
    counts: Union[BranchingProfile, Sequence[int], dict],
    m_lo: int,
    m_hi: int,
) -> DimensionEstimate:
    """Fit log2(count) against the scale index over [m_lo, m_hi].

    ``counts`` is indexed by scale: a BranchingProfile, a sequence with
    counts[m], or a mapping m -> count.  At least three scales are
    required; there is no extrapolation beyond the window.
    """
    if isinstance(counts, BranchingProfile):
        lookup = dict(enumerate(counts.counts))
    elif isinstance(counts, dict):
        lookup = counts
    else:
        lookup = dict(enumerate(counts))
    if m_lo >= m_hi:
        raise ValueError("need m_lo < m_hi")
    scales = list(range(m_lo, m_hi + 1))
    if len(scales) < 3:
        raise ValueError("dimension estimation needs at least 3 scales")
    missing = [m for m in scales if m not in lookup]
    if missing:
        raise ValueError(f"no counts at scales {missing}")
    ys = np.log2(np.array([lookup[m] for m in scales], dtype=float))
    xs = np.array(scales, dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = float(np.max(np.abs(slope * xs + intercept - ys)))
    return DimensionEstimate(
        slope=float(slope),
        window=(m_lo, m_hi),
        residual=residual,
        counts=tuple(int(lookup[m]) for m in scales),
    )


@dataclass(frozen=True)
class SupRadialResult:
    """Per-viewpoint dimension estimates and their running maximum."""

    estimates: tuple  # (Point2, DimensionEstimate | None) per sample
    max_slope: float
    argmax: Optional[Point2]
    excluded: tuple


def sup_radial_dimension(
    X_sample: Sequence[Point2],
    Y: CubeSet,
    m: int,
    rho: Rational,
    m_lo: int = 4,
) -> SupRadialResult:
    """Radial-projection dimension estimate for each viewpoint, and the sup.

    For each x the subtended arcs are computed once and binned at every
    precision in [m_lo, m]; the estimate is the slope over that window.
    Viewpoints whose projection is empty are recorded and excluded from
    the sup.  Viewpoints are processed by a thread pool sized by
    RADIAL_LAB_THREADS; results merge in input order, so the outcome is
    deterministic.
    """
    if not X_sample:
        raise ValueError("empty X_sample")
    if m - m_lo < 2:
        raise ValueError("precision window too short for a slope fit")
    rho = to_fraction(rho)

    def one(x: Point2):
        arcs = _subtended_arcs(x, Y, rho)
        if arcs is None:
            return None
        counts = {mm: len(_bins_of_arcs(arcs, mm)) for mm in range(m_lo, m + 1)}
        return estimate_dimension(counts, m_lo, m)

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        results = list(pool.map(one, X_sample))
    estimates = []
    excluded = []
    max_slope = -math.inf
    argmax = None
    for x, est in zip(X_sample, results):
        estimates.append((x, est))
        if est is None:
            excluded.append(x)
        elif est.slope > max_slope:
            max_slope = est.slope
            argmax = x
    return SupRadialResult(
        estimates=tuple(estimates),
        max_slope=max_slope,
        argmax=argmax,
        excluded=tuple(excluded),
    )
