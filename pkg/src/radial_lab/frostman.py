"""Non-concentration certificates for finite dyadic cube families.

Two flavours of Frostman-type condition are certified here, each exact:

* ball form: ``|S ∩ B(x, r)|  <=  C * r^s * |S|`` tested at every member
  cube center x and every dyadic radius ``r = 2^-k`` with ``2^-n <= r <= 1``.
  Quantifying over arbitrary centers and radii only changes the constant
  by a bounded factor, and the certificate records this convention.
* dyadic form: every level-m cube holds at most ``C * 2^(-s*m) * |S|``
  members, for every m <= n.

Comparisons with rational ``s = p/q`` clear the q-th root by raising both
sides to the q-th power, so verification is pure integer arithmetic:

    count <= (Cn/Cd) * 2^(-s*e) * total
        <=>  (count*Cd)^q * 2^(p*e)  <=  (Cn*total)^q.

``extract_uniform_subset`` prunes a family to one with constant dyadic
branching per scale block (pigeonhole over branching classes, processed
from the finest block upward so coarser pruning removes whole subtrees and
never disturbs the classes already fixed below), then re-certifies the
result before returning it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .dyadic import CubeSet, Rational, box_count, to_fraction


@dataclass(frozen=True)
class Witness:
    """The tested (scale, site) achieving the worst count/bound ratio.

    ``scale`` is the dyadic exponent: the radius exponent k (r = 2^-k) for
    ball certificates, the coarser level m for dyadic ones.  ``index`` is
    the grid index of the ball center's cube or of the ancestor cube.
    """

    scale: int
    index: tuple
    count: int
    bound: float


@dataclass(frozen=True)
class FrostmanCertificate:
    kind: str  # "ball" or "dyadic"
    s: Fraction
    C: Fraction
    verified: bool
    witness: Optional[Witness] = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "s": float(self.s),
            "C": float(self.C),
            "verified": self.verified,
        }
        if self.witness is not None:
            out["witness"] = {
                "scale": self.witness.scale,
                "index": list(self.witness.index),
                "count": self.witness.count,
                "bound": self.witness.bound,
            }
        return out


@dataclass(frozen=True)
class BranchingProfile:
    """Box counts of a family at every level from the root down to its own.

    ``counts[m]`` is the number of occupied level-m cubes; ``values`` is
    the log2 view.  Slopes of this profile are the box-counting surrogate
    used throughout the experiments.
    """

    level: int
    counts: tuple

    @property
    def values(self) -> np.ndarray:
        return np.log2(np.asarray(self.counts, dtype=float))


def _validate_sc(S: CubeSet, s: Fraction, C: Fraction) -> None:
    if len(S) == 0:
        raise ValueError("empty CubeSet cannot be certified")
    if not 0 <= s <= 2:
        raise ValueError(f"exponent {s} outside [0, 2]")
    if C <= 0:
        raise ValueError(f"constant {C} must be positive")


def _count_within_bound(count: int, e: int, s: Fraction, C: Fraction, total: int) -> bool:
    """Exact test of count <= C * 2^(-s*e) * total for integer e >= 0."""
    p, q = s.numerator, s.denominator
    lhs = (count * C.denominator) ** q << (p * e)
    rhs = (C.numerator * total) ** q
    return lhs <= rhs


def _ratio_greater(c1: int, e1: int, c2: int, e2: int, s: Fraction) -> bool:
    """Exact test of c1 * 2^(s*e1) > c2 * 2^(s*e2)."""
    p, q = s.numerator, s.denominator
    base = min(e1, e2)
    return (c1 ** q) << (p * (e1 - base)) > (c2 ** q) << (p * (e2 - base))


def _float_bound(e: int, s: Fraction, C: Fraction, total: int) -> float:
    return float(C) * 2.0 ** (-e * float(s)) * total


def check_ball_frostman(S: CubeSet, s: Rational, C: Rational) -> FrostmanCertificate:
    """Certify the ball-form condition at member centers and dyadic radii.

    For every member cube center x and every radius r = 2^-k with
    0 <= k <= n, the count of members whose closed cube meets the closed
    ball B(x, r) must stay within C * r^s * |S|.  The returned witness is
    the exact worst (center, radius) pair; when not verified it is a
    genuine violator.
    """
    s, C = to_fraction(s), to_fraction(C)
    _validate_sc(S, s, C)
    n = S.level
    total = len(S)
    iarr, jarr = S.index_arrays()
    # everything scaled by 2^(n+1): cube [2i, 2i+2], center 2i+1
    xl = 2 * iarr
    yl = 2 * jarr
    cx_all = xl + 1
    cy_all = yl + 1
    worst_count = np.zeros(n + 1, dtype=np.int64)
    worst_center = np.full(n + 1, -1, dtype=np.int64)
    radii_sq = np.array([(1 << (n + 1 - k)) ** 2 for k in range(n + 1)], dtype=np.int64)
    chunk = max(1, min(total, (1 << 22) // max(total, 1)))
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        dx = np.maximum(0, np.maximum(xl[None, :] - cx_all[lo:hi, None],
                                      cx_all[lo:hi, None] - (xl[None, :] + 2)))
        dy = np.maximum(0, np.maximum(yl[None, :] - cy_all[lo:hi, None],
                                      cy_all[lo:hi, None] - (yl[None, :] + 2)))
        dist2 = dx * dx + dy * dy
        for k in range(n + 1):
            counts = (dist2 <= radii_sq[k]).sum(axis=1)
            arg = int(np.argmax(counts))
            cmax = int(counts[arg])
            if cmax > worst_count[k]:
                worst_count[k] = cmax
                worst_center[k] = lo + arg
    verified = True
    worst_k = 0
    for k in range(n + 1):
        if not _count_within_bound(int(worst_count[k]), k, s, C, total):
            verified = False
        if k > 0 and _ratio_greater(int(worst_count[k]), k,
                                    int(worst_count[worst_k]), worst_k, s):
            worst_k = k
    ci = int(worst_center[worst_k])
    witness = Witness(
        scale=worst_k,
        index=S.members[ci],
        count=int(worst_count[worst_k]),
        bound=_float_bound(worst_k, s, C, total),
    )
    return FrostmanCertificate("ball", s, C, verified, witness)


def _ancestor_maxima(S: CubeSet) -> list:
    """Per level m: (max member count under one level-m cube, first argmax key)."""
    out = []
    for m in range(S.level + 1):
        counts = S.ancestor_counts(m)
        cmax = max(counts.values())
        arg = min(key for key, v in counts.items() if v == cmax)
        out.append((cmax, arg))
    return out


def check_dyadic_frostman(S: CubeSet, s: Rational, C: Rational) -> FrostmanCertificate:
    """Certify the per-ancestor condition: each level-m cube holds at most
    C * 2^(-s*m) * |S| members, for every m <= n.  Exact rational comparison.
    """
    s, C = to_fraction(s), to_fraction(C)
    _validate_sc(S, s, C)
    total = len(S)
    maxima = _ancestor_maxima(S)
    verified = True
    worst_m = 0
    for m, (cmax, _) in enumerate(maxima):
        if not _count_within_bound(cmax, m, s, C, total):
            verified = False
        if m > 0 and _ratio_greater(cmax, m, maxima[worst_m][0], worst_m, s):
            worst_m = m
    cmax, arg = maxima[worst_m]
    witness = Witness(
        scale=worst_m,
        index=arg,
        count=cmax,
        bound=_float_bound(worst_m, s, C, total),
    )
    return FrostmanCertificate("dyadic", s, C, verified, witness)


def max_dyadic_exponent(S: CubeSet, C: Rational, step: Rational) -> Optional[Fraction]:
    """Largest s on the grid {0, step, ..., 2} whose dyadic certificate verifies.

    Verification at s implies verification at every smaller s, so a binary
    search over the grid is sound.  Returns None when even s = 0 fails
    (possible for C < 1).
    """
    C = to_fraction(C)
    step = to_fraction(step)
    if C <= 0 or step <= 0:
        raise ValueError("C and step must be positive")
    if len(S) == 0:
        raise ValueError("empty CubeSet")
    maxima = _ancestor_maxima(S)
    total = len(S)

    def verifies(sv: Fraction) -> bool:
        return all(
            _count_within_bound(cmax, m, sv, C, total)
            for m, (cmax, _) in enumerate(maxima)
        )

    hi = int(Fraction(2) / step)
    if not verifies(Fraction(0)):
        return None
    lo = 0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if verifies(mid * step):
            lo = mid
        else:
            hi = mid - 1
    return lo * step


def branching_profile(S: CubeSet) -> BranchingProfile:
    """Box counts at every level m = 0..n, stored as exact integers."""
    if len(S) == 0:
        raise ValueError("empty CubeSet has no profile")
    return BranchingProfile(
        level=S.level,
        counts=tuple(box_count(S, m) for m in range(S.level + 1)),
    )


def extract_uniform_subset(P: CubeSet, eps: Rational):
    """Extract a large subset with constant dyadic branching per scale block.

    Scales split into blocks of length ``delta = max(1, floor(eps*n))``.
    Blocks are resolved from the finest upward: within a block, each
    surviving block-ancestor is classed by its surviving block-children
    count into a dyadic class [2^k, 2^(k+1)); the class with the largest
    surviving leaf mass wins (ties to the larger class), off-class subtrees
    are dropped, and kept ancestors are trimmed to exactly 2^k children
    (richest leaf mass first, then index order).  Coarser blocks only ever
    remove whole subtrees, so the classes fixed at finer blocks survive to
    the final set.

    Returns ``(subset, certificate, size_floor)``: the certificate is a
    re-verified dyadic one with exponent ``min_J (sum of class exponents
    below block boundary m_J) / m_J`` and constant ``2^(2*delta+1)``, and
    ``size_floor = |P| * (4*delta+2)^(-ceil(n/delta))`` is the guaranteed
    minimum size, returned exactly.
    """
    eps = to_fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError(f"block fraction {eps} outside (0, 1]")
    if len(P) == 0:
        raise ValueError("empty CubeSet")
    n = P.level
    if n == 0:
        cert = check_dyadic_frostman(P, Fraction(0), Fraction(1))
        return P, cert, Fraction(len(P))
    delta = max(1, math.floor(eps * n))
    bounds = list(range(0, n, delta)) + [n]
    K = len(bounds) - 1
    survivors = list(P.members)
    ks = [0] * K
    for J in range(K - 1, -1, -1):
        sh_anc = n - bounds[J]
        sh_child = n - bounds[J + 1]
        leaves_by_child: dict = {}
        for leaf in survivors:
            child = (leaf[0] >> sh_child, leaf[1] >> sh_child)
            leaves_by_child.setdefault(child, []).append(leaf)
        rel = sh_anc - sh_child
        children_by_anc: dict = {}
        for child in leaves_by_child:
            anc = (child[0] >> rel, child[1] >> rel)
            children_by_anc.setdefault(anc, []).append(child)
        class_weight: dict = {}
        for childs in children_by_anc.values():
            k = len(childs).bit_length() - 1
            w = sum(len(leaves_by_child[c]) for c in childs)
            class_weight[k] = class_weight.get(k, 0) + w
        kstar = max(class_weight, key=lambda k: (class_weight[k], k))
        ks[J] = kstar
        keep = 1 << kstar
        survivors = []
        for anc in sorted(children_by_anc):
            childs = children_by_anc[anc]
            if len(childs).bit_length() - 1 != kstar:
                continue
            ranked = sorted(childs, key=lambda c: (-len(leaves_by_child[c]), c))
            for c in ranked[:keep]:
                survivors.extend(leaves_by_child[c])
        survivors.sort()
    subset = CubeSet(n, survivors)
    t_out = min(Fraction(sum(ks[:J]), bounds[J]) for J in range(1, K + 1))
    c_out = Fraction(1 << (2 * delta + 1))
    cert = check_dyadic_frostman(subset, t_out, c_out)
    if not cert.verified:
        raise AssertionError(
            "uniform extraction failed to re-certify; this breaks the contract"
        )
    size_floor = Fraction(len(P), (4 * delta + 2) ** K)
    assert len(subset) >= size_floor
    return subset, cert, size_floor
