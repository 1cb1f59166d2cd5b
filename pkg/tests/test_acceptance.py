"""Acceptance gate: one test per criterion, each printing its own verdict.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS/FAIL
lines.  Tolerances and runtime budgets are pinned here and nowhere else.
"""

import json
import time
from fractions import Fraction

import numpy as np
import pytest

from radial_lab.bounds import (
    bound_main,
    bound_orthogonal_exceptional,
    bound_osw1,
    bound_osw2,
    coupled_fixed_point,
    dominance_report,
    incidence_exponent,
)
from radial_lab.dyadic import CubeSet, Point2
from radial_lab.experiments import ExperimentConfig, parse_config, run
from radial_lab.frostman import (
    check_ball_frostman,
    check_dyadic_frostman,
    extract_uniform_subset,
    max_dyadic_exponent,
)
from radial_lab.generators import cantor_product, line_set, random_tree_set
from radial_lab.incidence import (
    TubeSet,
    certified_center_families,
    count_incidences,
    renwang_harness,
)
from radial_lab.projection import sup_radial_dimension

from conftest import (
    oracle_ball_verified_int,
    oracle_dyadic_verified_int,
    random_cubeset,
)


def verdict(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} ({name}): {detail}"


def test_criterion_1_bound_algebra_exactness():
    t0 = time.perf_counter()
    grid = [Fraction(k, 100) for k in range(201)]
    tol = Fraction(1, 10**12)
    worst = Fraction(0)
    ok = True
    for dx in grid:
        for dy in grid:
            # independent hand evaluations of each closed form
            o1 = dx if dx <= dy and dx <= 1 else (dy if dy <= 1 else Fraction(1))
            got1 = bound_osw1(dx, dy)
            worst = max(worst, abs(got1 - o1))
            main_hand = min([(dx + dy) / 2, dy, Fraction(1)])
            rep = dominance_report(dx, dy)
            worst = max(worst, abs(Fraction(rep.main).limit_denominator(10**9) - main_hand))
            if dy > 1:
                o2_hand = min(dx + dy - 1, Fraction(1))
                worst = max(worst, abs(bound_osw2(dx, dy) - o2_hand))
            elif bound_osw2(dx, dy) is not None:
                ok = False
            u = min(dy, Fraction(1))
            ortho_hand = max(2 * u - dy, Fraction(0))
            worst = max(worst, abs(bound_orthogonal_exceptional(dy, u) - ortho_hand))
            if 0 < dx <= 1 and dy > 0:
                inc_hand = min([dy, (dx + dy) / 2, Fraction(1)])
                worst = max(worst, abs(incidence_exponent(dx, dy) - inc_hand))
            # dominance flags: strict iff dX < min(dY, 1); over osw2 iff dX+dY-1 < 1
            if rep.strict_over_osw1 != (dx < min(dy, Fraction(1))):
                ok = False
            if dy > 1 and rep.strict_over_osw2 != (dx + dy - 1 < 1):
                ok = False
    elapsed = time.perf_counter() - t0
    ok = ok and worst <= tol and elapsed < 10
    verdict(1, "bound-algebra-exactness", ok,
            f"worst dev {float(worst):.2e}, {elapsed:.1f}s on 201x201 grid")


def test_criterion_2_coupled_system():
    t0 = time.perf_counter()
    step = 1e-3
    sy_grid = np.arange(0.0, 1.0 + step / 2, step)
    sx_grid = np.arange(0.0, 1.0 + step / 2, step)
    worst_closed = 0.0
    worst_brute = 0.0
    for kx in range(1, 51):
        for ky in range(1, 51):
            tx, ty = kx * 0.02, ky * 0.02
            sx, _ = coupled_fixed_point(tx, ty, tol=1e-9)
            closed = min(ty, (tx + ty) / 2, 1.0)
            worst_closed = max(worst_closed, abs(sx - closed))
            # independent minimizer: smallest grid s_x admitting a grid s_y
            # with s_y >= f(s_x) and s_x >= g(s_y)
            need = np.minimum(np.minimum(tx, (sx_grid + tx) / 2), 1.0)
            idx = np.clip(np.ceil((need - 1e-12) / step).astype(int), 0, len(sy_grid) - 1)
            g = np.minimum(np.minimum(ty, (sy_grid[idx] + ty) / 2), 1.0)
            feasible = sx_grid >= g - 1e-12
            brute = float(sx_grid[int(np.argmax(feasible))])
            worst_brute = max(worst_brute, abs(sx - brute))
    elapsed = time.perf_counter() - t0
    ok = worst_closed <= 1e-6 and worst_brute <= 2e-3 and elapsed < 60
    verdict(2, "coupled-fixed-point", ok,
            f"closed-form dev {worst_closed:.2e}, brute dev {worst_brute:.2e}, {elapsed:.1f}s")


def test_criterion_3_frostman_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(33)
    disagreements = 0
    for trial in range(200):
        n = int(rng.integers(1, 7))
        S = random_cubeset(rng, n, int(rng.integers(1, 49)))
        s = Fraction(int(rng.integers(0, 129)), 64)
        C = Fraction(int(rng.integers(1, 9)), 2)
        if check_ball_frostman(S, s, C).verified != oracle_ball_verified_int(S, s, C):
            disagreements += 1
        if check_dyadic_frostman(S, s, C).verified != oracle_dyadic_verified_int(S, s, C):
            disagreements += 1
    elapsed = time.perf_counter() - t0
    ok = disagreements == 0 and elapsed < 60
    verdict(3, "frostman-oracle-equivalence", ok,
            f"{disagreements} disagreements over 200 sets, {elapsed:.1f}s")


def test_criterion_4_extraction_contract():
    t0 = time.perf_counter()
    rng = np.random.default_rng(44)
    failures = 0
    for trial in range(50):
        n = int(rng.integers(8, 13))
        size = int(rng.integers(8, 1500))
        P = random_cubeset(rng, n, size)
        eps = Fraction(1, 4) if trial % 2 == 0 else Fraction(1, 2)
        delta = max(1, (eps.numerator * n) // eps.denominator)
        K = -(-n // delta)
        sub, cert, floor = extract_uniform_subset(P, eps)
        recheck = check_dyadic_frostman(sub, cert.s, cert.C)
        if not recheck.verified:
            failures += 1
        if cert.C > 2 ** (2 * delta + 1):
            failures += 1
        if len(sub) < Fraction(len(P), (4 * delta + 2) ** K):
            failures += 1
        if floor != Fraction(len(P), (4 * delta + 2) ** K):
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 120
    verdict(4, "uniform-extraction-contract", ok,
            f"{failures} contract violations over 50 inputs, {elapsed:.1f}s")


def test_criterion_5_incidence_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(55)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        side = 1 << n
        P = random_cubeset(rng, n, int(rng.integers(1, 60)))
        t_size = min(int(rng.integers(1, 60)), side * side)
        flat = rng.choice(side * side, size=t_size, replace=False)
        Ts = TubeSet(n, ((int(v) // side, int(v) % side) for v in flat))
        count_incidences(P, Ts, cross_check=True)  # raises on any mismatch
    small_elapsed = time.perf_counter() - t0
    t1 = time.perf_counter()
    n = 12
    side = 1 << n
    pf = rng.choice(side * side, size=4096, replace=False)
    tf = rng.choice(side * side, size=4096, replace=False)
    P12 = CubeSet(n, ((int(v) // side, int(v) % side) for v in pf))
    T12 = TubeSet(n, ((int(v) // side, int(v) % side) for v in tf))
    rec = count_incidences(P12, T12)
    big_elapsed = time.perf_counter() - t1
    ok = big_elapsed < 30
    verdict(5, "incidence-equivalence", ok,
            f"100 exact matches in {small_elapsed:.1f}s; n=12 4096x4096 -> "
            f"{rec.incidences} incidences in {big_elapsed:.1f}s")


def _fitted_exponent(records: dict) -> float:
    ns = sorted(records)
    ys = [np.log2(records[n].union_size / records[n].M) for n in ns]
    return float(np.polyfit(ns, ys, 1)[0])


def test_criterion_6_renwang_exponents():
    t0 = time.perf_counter()
    levels = (8, 9, 10, 11, 12)
    results = {}

    def diag_instance(n, stride=16):
        P = CubeSet(n, [(k, k) for k in range(0, 1 << n, stride)])
        cert = check_dyadic_frostman(P, 1, 2 * stride)
        assert cert.verified
        return P, cert

    def tree_instance(n, t=Fraction(1, 2), seed=424242):
        P = random_tree_set(n, t, seed, top_band=True)
        s = max_dyadic_exponent(P, 4, Fraction(1, 64))
        cert = check_dyadic_frostman(P, min(s, t), 4)
        assert cert.verified
        return P, cert

    configs = {
        (1.0, 1.0): (diag_instance, Fraction(1), 16, False),
        (0.5, 1.0): (diag_instance, Fraction(1, 2), 1, False),
        (0.5, 0.5): (tree_instance, Fraction(1, 2), 1, True),
    }
    ok = True
    details = []
    for (s, t), (make, density, stride, half) in configs.items():
        records = {}
        for n in levels:
            P, cert = make(n)
            families, M = certified_center_families(
                P, density, stride=stride, half_range=half
            )
            records[n] = renwang_harness(P, cert, families, M, eps=0.1)
        fitted = _fitted_exponent(records)
        floor = min(t, (s + t) / 2, 1.0) - 0.2
        details.append(f"(s={s},t={t}): fitted {fitted:.3f} vs floor {floor:.2f}")
        if fitted < floor:
            ok = False
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 300
    verdict(6, "renwang-exponents", ok, "; ".join(details) + f"; {elapsed:.1f}s")


def test_criterion_7_projection_sanity():
    t0 = time.perf_counter()
    Y = CubeSet.full_grid(8)
    x = Point2(Fraction(1, 2) + Fraction(1, 512), Fraction(1, 2) + Fraction(1, 512))
    full = sup_radial_dimension([x], Y, m=8, rho=Fraction(1, 16)).max_slope
    n = 10
    Yl = line_set(n, 0, Fraction(1, 2))
    xs = [Point2(Fraction(2 * k + 1, 64), Fraction(1, 2)) for k in range(4, 28, 7)]
    collinear = sup_radial_dimension(xs, Yl, m=n, rho=Fraction(1, 4)).max_slope
    elapsed = time.perf_counter() - t0
    ok = abs(full - 1.0) <= 0.05 and collinear <= 0.1 and elapsed < 60
    verdict(7, "projection-sanity", ok,
            f"full-grid slope {full:.3f}, collinear slope {collinear:.3f}, {elapsed:.1f}s")


def test_criterion_8_desk_scale_main_bound():
    t0 = time.perf_counter()
    n = 12
    X = cantor_product(n, {0, 3}, {0})        # dimension 1/2
    Y = cantor_product(n, {0, 3}, {0, 3})     # dimension 1
    xs = [
        Point2(Fraction(2 * i + 1, 1 << (n + 1)), Fraction(2 * j + 1, 1 << (n + 1)))
        for i, j in X.members
    ]
    assert len(xs) == 64
    res = sup_radial_dimension(xs, Y, m=n, rho=Fraction(1, 16))
    elapsed = time.perf_counter() - t0
    target_main = bound_main(0.5, 1.0) - 0.2
    target_osw1 = bound_osw1(0.5, 1.0)
    ok = res.max_slope >= target_main and res.max_slope >= target_osw1 and elapsed < 300
    verdict(8, "desk-scale-main-bound", ok,
            f"max slope {res.max_slope:.3f} vs main-0.2={target_main:.2f} "
            f"and osw1={target_osw1:.2f}, {elapsed:.1f}s")


REPRO_INI = """
[experiment]
kind = projection-sweep
levels = 8
seed = 7
samples = 32
rho = 1/16
precision_lo = 4

[x]
kind = cantor_product
digits_x = 0 3
digits_y = 0

[y]
kind = cantor_product
digits_x = 0 3
digits_y = 0 3
"""


def test_criterion_9_reproducibility(tmp_path):
    base = parse_config(REPRO_INI)
    bodies = []
    for name in ("r1", "r2"):
        cfg = ExperimentConfig(**{**base.__dict__, "out": str(tmp_path / name)})
        res = run(cfg)
        bodies.append(
            tuple(
                p.read_bytes()
                for p in sorted(res.out_dir.glob("*.csv"))
            )
        )
        manifest = json.loads((res.out_dir / "manifest.json").read_text())
        assert "created_unix" in manifest  # timestamps only in the manifest
    ok = bodies[0] == bodies[1]
    verdict(9, "reproducibility", ok,
            "identical CSV bodies across reruns" if ok else "CSV bodies differ")
