"""Cube-tube incidence counting and the incidence-exponent harness.

A tube here is a parameter-space dyadic cube (see ``duality``); a tube and
a spatial cube are incident when some line of the tube meets the cube.
Counting is accelerated by bucketing tubes by slope cell: for a fixed
spatial cube and slope cell, the incident intercept cells form one exact
integer interval, so candidate retrieval is two binary searches.  The
single-cube query re-confirms every candidate with the exact predicate;
bulk counting is cross-checked against the brute-force double loop in
tests and on demand.

The harness measures how large the union of per-cube tube families must
be: given a family P of cubes with a dyadic (t)-certificate and, for each
cube, a tube family with a dyadic (s)-certificate of size close to M, it
reports the empirical exponent ``log_(1/delta)(|union| / M)`` next to the
predicted floor ``min(t, (s+t)/2, 1) - eps``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Union

import numpy as np

from .dyadic import CubeSet, DyadicCube
from .duality import Tube, intercept_range, tube_meets_cube_indexed
from .frostman import FrostmanCertificate, check_dyadic_frostman


class ValidationError(ValueError):
    """A harness precondition failed (bad family, missing certificate...)."""


class TubeSet:
    """A same-level family of tubes with a slope-cell interval index."""

    __slots__ = ("level", "members", "_keys")

    def __init__(self, level: int, tubes: Iterable[Union[Tube, DyadicCube, tuple]]):
        if level < 0:
            raise ValueError("level must be nonnegative")
        side = 1 << level
        pairs = []
        for t in tubes:
            if isinstance(t, Tube):
                c = t.param
                if c.level != level:
                    raise ValueError(f"tube at level {c.level} in a level-{level} set")
                pairs.append((c.i, c.j))
            elif isinstance(t, DyadicCube):
                if t.level != level:
                    raise ValueError(f"tube at level {t.level} in a level-{level} set")
                pairs.append((t.i, t.j))
            else:
                p, q = t
                if not (0 <= p < side and 0 <= q < side):
                    raise ValueError(f"indices ({p}, {q}) outside level-{level} grid")
                pairs.append((int(p), int(q)))
        unique = frozenset(pairs)
        if len(unique) != len(pairs):
            raise ValueError("duplicate tubes in TubeSet")
        self.level = level
        self.members = tuple(sorted(unique))
        if self.members:
            arr = np.asarray(self.members, dtype=np.int64)
            self._keys = (arr[:, 0] << level) | arr[:, 1]
        else:
            self._keys = np.empty(0, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Tube]:
        for p, q in self.members:
            yield Tube(DyadicCube(self.level, p, q))

    def __repr__(self) -> str:
        return f"TubeSet(level={self.level}, size={len(self)})"

    def param_cubes(self) -> CubeSet:
        """The parameter-space cube family; certificates of a tube set are
        certificates of this set."""
        return CubeSet(self.level, self.members)

    def keys(self) -> np.ndarray:
        """Sorted int64 keys p*2^n + q in canonical order."""
        return self._keys


@dataclass(frozen=True)
class IncidenceRecord:
    """Result of an incidence count or a harness run.

    ``per_cube`` aligns with the canonical member order of the cube family.
    The exponent fields are populated by the harness only.
    """

    level: int
    num_cubes: int
    union_size: int
    incidences: int
    per_cube: tuple
    M: Optional[int] = None
    s: Optional[float] = None
    t: Optional[float] = None
    eps: Optional[float] = None
    exponent_hat: Optional[float] = None
    exponent_floor: Optional[float] = None

    CSV_HEADER = "n,num_cubes,M,s,t,eps,union_size,incidences,exponent_hat,exponent_floor"

    def csv_row(self) -> str:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return f"{v:.12g}"
            return str(v)

        return ",".join(
            fmt(v)
            for v in (
                self.level,
                self.num_cubes,
                self.M,
                self.s,
                self.t,
                self.eps,
                self.union_size,
                self.incidences,
                self.exponent_hat,
                self.exponent_floor,
            )
        )


def _interval_counts(Ts: TubeSet, i: int, j: int) -> int:
    """Incident-tube count for cube (i, j) via the slope-interval index."""
    n = Ts.level
    side = 1 << n
    keys = Ts.keys()
    if len(keys) == 0:
        return 0
    cols = np.arange(side, dtype=np.int64)
    q_max = ((j + 1) * side - cols * i) // side
    q_min = -(((cols + 1) * (i + 1) - (j - 1) * side) // side)
    lo = np.maximum(q_min, 0)
    hi = np.minimum(q_max, side - 1)
    valid = lo <= hi
    lo_keys = (cols << n) + np.where(valid, lo, 0)
    hi_keys = (cols << n) + np.where(valid, hi, 0)
    counts = np.searchsorted(keys, hi_keys, side="right") - np.searchsorted(
        keys, lo_keys, side="left"
    )
    return int(np.where(valid, counts, 0).sum())


def count_tubes_through_cube(Ts: TubeSet, Q: DyadicCube) -> int:
    """Exact number of tubes in Ts meeting Q.

    Candidates come from the slope index; each one is confirmed by the
    exact predicate, so correctness never rests on the index alone.
    """
    if Ts.level != Q.level:
        raise ValueError(f"tube level {Ts.level} != cube level {Q.level}")
    n = Ts.level
    side = 1 << n
    keys = Ts.keys()
    count = 0
    for p in range(side):
        q_min, q_max = intercept_range(n, p, Q.i, Q.j)
        lo = max(q_min, 0)
        hi = min(q_max, side - 1)
        if lo > hi:
            continue
        a = int(np.searchsorted(keys, (p << n) + lo, side="left"))
        b = int(np.searchsorted(keys, (p << n) + hi, side="right"))
        for key in keys[a:b]:
            kq = int(key) & (side - 1)
            if tube_meets_cube_indexed(n, p, kq, Q.i, Q.j):
                count += 1
    return count


def brute_force_incidences(P: CubeSet, Ts: TubeSet) -> int:
    """Reference double loop over every (cube, tube) pair; exact predicate only."""
    if P.level != Ts.level:
        raise ValueError("level mismatch")
    n = P.level
    total = 0
    for (i, j) in P.members:
        for (p, q) in Ts.members:
            if tube_meets_cube_indexed(n, p, q, i, j):
                total += 1
    return total


def count_incidences(P: CubeSet, Ts: TubeSet, cross_check: bool = False) -> IncidenceRecord:
    """Total and per-cube incidence counts between P and Ts.

    With ``cross_check`` the indexed totals are re-derived by the brute
    force double loop and must agree exactly; tests run every small
    instance this way.
    """
    if P.level != Ts.level:
        raise ValueError(f"cube level {P.level} != tube level {Ts.level}")
    per_cube = tuple(_interval_counts(Ts, i, j) for (i, j) in P.members)
    total = int(sum(per_cube))
    if cross_check:
        brute = brute_force_incidences(P, Ts)
        if brute != total:
            raise AssertionError(
                f"indexed count {total} != brute force {brute}; index is broken"
            )
    return IncidenceRecord(
        level=P.level,
        num_cubes=len(P),
        union_size=len(Ts),
        incidences=total,
        per_cube=per_cube,
    )


def union_tubes(level: int, families: Iterable[TubeSet]) -> TubeSet:
    """Union of tube families by canonical sorted merge of their key arrays."""
    keys = [ts.keys() for ts in families]
    if not keys:
        return TubeSet(level, ())
    merged = np.unique(np.concatenate(keys))
    side_mask = (1 << level) - 1
    return TubeSet(level, ((int(k) >> level, int(k) & side_mask) for k in merged))


def renwang_harness(
    P: CubeSet,
    P_cert: FrostmanCertificate,
    families: Mapping[tuple, tuple],
    M: int,
    eps: float,
) -> IncidenceRecord:
    """Measure the union-size exponent of per-cube tube families.

    ``families`` maps each member (i, j) of P to a pair
    ``(TubeSet, FrostmanCertificate)``.  Preconditions enforced here:
    P's dyadic certificate is verified (and re-checked against P), every
    family certificate is a verified dyadic one, every tube meets its
    cube, and every family size is within a factor 2 of M.

    The record carries the empirical exponent
    ``e_hat = log2(|union|/M) / n`` and the predicted floor
    ``min(t, (s+t)/2, 1) - eps`` with t from P's certificate and s the
    smallest family exponent.
    """
    n = P.level
    if M <= 0:
        raise ValueError("M must be positive")
    if P_cert is None or P_cert.kind != "dyadic" or not P_cert.verified:
        raise ValidationError("P needs a verified dyadic certificate")
    if not check_dyadic_frostman(P, P_cert.s, P_cert.C).verified:
        raise ValidationError("P's certificate does not re-verify")
    s_min: Optional[Fraction] = None
    max_family = 0
    for (i, j) in P.members:
        if (i, j) not in families:
            raise ValidationError(f"no tube family for cube ({i}, {j})")
        ts, cert = families[(i, j)]
        if ts.level != n:
            raise ValidationError(f"family at ({i}, {j}) has level {ts.level} != {n}")
        if cert is None or cert.kind != "dyadic" or not cert.verified:
            raise ValidationError(f"family at ({i}, {j}) lacks a verified dyadic certificate")
        if not (M <= 2 * len(ts) and len(ts) <= 2 * M):
            raise ValidationError(
                f"family size {len(ts)} at ({i}, {j}) not within factor 2 of M={M}"
            )
        for (p, q) in ts.members:
            if not tube_meets_cube_indexed(n, p, q, i, j):
                raise ValidationError(f"tube ({p}, {q}) misses its cube ({i}, {j})")
        s_min = cert.s if s_min is None else min(s_min, cert.s)
        max_family = max(max_family, len(ts))
    union = union_tubes(n, (families[m][0] for m in P.members))
    u = len(union)
    assert max_family <= u <= len(P) * max_family
    per_cube = tuple(_interval_counts(union, i, j) for (i, j) in P.members)
    total = int(sum(per_cube))
    s = float(s_min)
    t = float(P_cert.s)
    e_hat = float(np.log2(u / M) / n) if n > 0 else 0.0
    floor = min(t, (s + t) / 2, 1.0) - eps
    return IncidenceRecord(
        level=n,
        num_cubes=len(P),
        union_size=u,
        incidences=total,
        per_cube=per_cube,
        M=M,
        s=s,
        t=t,
        eps=eps,
        exponent_hat=e_hat,
        exponent_floor=floor,
    )


def slope_columns(n: int, density: Fraction, stride: int = 1,
                  half_range: bool = False) -> list:
    """Slope cells for harness families.

    Density 1 gives an arithmetic progression of columns with the given
    power-of-two stride (a (1, stride)-non-concentrated family); density
    1/2 gives the even-bit pattern, whose aligned dyadic intervals of
    length 2^L hold at most 2^ceil(L/2) columns, the (1/2)-dimensional
    non-concentration the harness certificates need.  ``half_range``
    restricts to slopes below 1/2 (top bit zero), which keeps center-line
    intercepts inside the parameter square for families anchored in the
    upper half of the spatial square.
    """
    density = Fraction(density)
    top = n - 1 if half_range else n
    if density == 1:
        if stride < 1 or stride & (stride - 1):
            raise ValueError("stride must be a positive power of two")
        return list(range(0, 1 << top, stride))
    if density == Fraction(1, 2):
        free = [pos for pos in range(top) if pos % 2 == 0]
        cols = [0]
        for pos in free:
            cols = [c | (bit << pos) for c in cols for bit in (0, 1)]
        return sorted(cols)
    raise ValueError(f"unsupported column density {density}")


def center_tube_family(n: int, i: int, j: int, columns: Iterable[int]) -> TubeSet:
    """One tube per slope column, anchored at the cube's center line.

    For column p the line through the center of cube (i, j) with the
    column's center slope has intercept b; the tube is the intercept cell
    containing b, clamped into the parameter square.  Columns whose
    clamped tube fails the exact incidence predicate are dropped.
    """
    side = 1 << n
    tubes = []
    for p in columns:
        num = ((2 * j + 1) << (n + 1)) - (2 * p + 1) * (2 * i + 1)
        q = num // (1 << (n + 2))
        q = min(max(q, 0), side - 1)
        if tube_meets_cube_indexed(n, p, q, i, j):
            tubes.append((p, q))
    return TubeSet(n, tubes)


def certified_center_families(
    P: CubeSet,
    density: Fraction,
    stride: int = 1,
    half_range: bool = False,
    C: Optional[Fraction] = None,
) -> tuple:
    """Center-line families for every cube of P, certified at (density, C).

    Returns (families dict, M) where M is the largest family size.  Raises
    ValidationError if the families end up ragged (more than factor-2
    spread) or any certificate fails.  The default constant is 4*stride,
    which the column patterns provably satisfy.
    """
    if C is None:
        C = Fraction(4) * stride
    n = P.level
    cols = slope_columns(n, density, stride=stride, half_range=half_range)
    families = {}
    sizes = []
    for (i, j) in P.members:
        ts = center_tube_family(n, i, j, cols)
        if len(ts) == 0:
            raise ValidationError(f"cube ({i}, {j}) admits no center tubes")
        cert = check_dyadic_frostman(ts.param_cubes(), Fraction(density), C)
        if not cert.verified:
            raise ValidationError(
                f"family at ({i}, {j}) failed its ({density}, {C}) certificate"
            )
        families[(i, j)] = (ts, cert)
        sizes.append(len(ts))
    M = max(sizes)
    if min(sizes) * 2 < M:
        raise ValidationError(
            f"family sizes spread beyond factor 2: {min(sizes)}..{M}"
        )
    return families, M
