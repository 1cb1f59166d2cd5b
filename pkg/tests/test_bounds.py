"""Bound algebra: frozen values, grid characterizations, fixed-point checks."""

import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radial_lab.bounds import (
    BoundQuery,
    bound_main,
    bound_orthogonal_exceptional,
    bound_osw1,
    bound_osw2,
    coupled_fixed_point,
    dominance_report,
    incidence_exponent,
)


class TestClosedForms:
    def test_osw1(self):
        assert bound_osw1(0.5, 0.5) == 0.5
        assert bound_osw1(0, 1.7) == 0
        assert bound_osw1(1.5, 1.5) == 1

    def test_osw2(self):
        assert bound_osw2(0.5, 1.5) == 1.0
        assert bound_osw2(0, 1.2) == pytest.approx(0.2)
        assert bound_osw2(0.3, 0.9) is None

    def test_main(self):
        assert bound_main(0.5, 0.5) == 0.5
        assert bound_main(0.2, 0.8) == 0.5
        assert bound_main(1, 1) == 1

    def test_main_warns_at_zero(self):
        with pytest.warns(UserWarning):
            bound_main(0, 1)

    def test_orthogonal_exceptional(self):
        assert bound_orthogonal_exceptional(1, 0.5) == 0
        assert bound_orthogonal_exceptional(0.8, 0.7) == pytest.approx(0.6)
        assert bound_orthogonal_exceptional(2, 1) == 0

    def test_orthogonal_domain(self):
        with pytest.raises(ValueError):
            bound_orthogonal_exceptional(0.5, 0.8)

    def test_incidence_exponent(self):
        assert incidence_exponent(1, 1) == 1
        assert incidence_exponent(0.5, 0.5) == 0.5
        assert incidence_exponent(0.2, 1.8) == 1

    def test_range_validation(self):
        with pytest.raises(ValueError):
            bound_osw1(-0.1, 1)
        with pytest.raises(ValueError):
            incidence_exponent(0, 1)

    def test_exact_on_fractions(self):
        v = bound_main(Fraction(1, 3), Fraction(2, 3))
        assert v == Fraction(1, 2)
        assert isinstance(v, Fraction)


class TestDominance:
    def test_strict_improvement_region(self):
        rep = dominance_report(0.2, 0.8)
        assert rep.main == 0.5 and rep.osw1 == pytest.approx(0.2)
        assert rep.strict_over_osw1

    def test_boundary_equality(self):
        rep = dominance_report(1, 0.5)
        assert rep.main == rep.osw1 == 0.5
        assert not rep.strict_over_osw1

    def test_osw2_comparison(self):
        rep = dominance_report(0.3, 1.4)
        assert rep.main == pytest.approx(0.85)
        assert rep.osw2 == pytest.approx(0.7)
        assert rep.strict_over_osw2

    def test_characterization_on_grid(self):
        # strict over osw1 iff dX < min(dY, 1); strict over osw2 iff dX+dY-1 < 1
        grid = [Fraction(k, 20) for k in range(41)]
        for dx in grid:
            for dy in grid:
                rep = dominance_report(dx, dy)
                main = bound_main(dx, dy) if dx > 0 else min(dy / 2, dy, 1)
                assert rep.main >= rep.osw1 - 1e-15
                assert rep.strict_over_osw1 == (dx < min(dy, 1))
                if dy > 1:
                    assert rep.main >= rep.osw2 - 1e-15
                    assert rep.strict_over_osw2 == (dx + dy - 1 < 1)

    def test_orthogonal_consistency_with_main(self):
        # whenever dX exceeds the exceptional-set bound at u, the main bound
        # reaches u
        grid = [Fraction(k, 25) for k in range(51)]
        for dy in grid:
            for u in [g for g in grid if g <= min(dy, 1)]:
                exc = bound_orthogonal_exceptional(dy, u)
                for dx in grid:
                    if dx > exc:
                        with warnings.catch_warnings():
                            warnings.simplefilter("ignore")
                            assert bound_main(dx, dy) >= u


class TestLipschitzMonotone:
    @settings(max_examples=120, deadline=None)
    @given(
        dx=st.integers(0, 200), dy=st.integers(0, 200),
        hx=st.integers(0, 10), hy=st.integers(0, 10),
    )
    def test_monotone_and_lipschitz(self, dx, dy, hx, hy):
        a, b = Fraction(dx, 100), Fraction(dy, 100)
        da, db = Fraction(hx, 100), Fraction(hy, 100)
        a2, b2 = min(a + da, 2), min(b + db, 2)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for f in (bound_osw1, bound_main):
                lo, hi = f(a, b), f(a2, b2)
                assert hi >= lo
                assert hi - lo <= (a2 - a) + (b2 - b)


class TestCoupledFixedPoint:
    def test_frozen_examples(self):
        assert coupled_fixed_point(0.4, 0.8)[0] == pytest.approx(0.6, abs=1e-6)
        assert coupled_fixed_point(1, 1)[0] == pytest.approx(1.0, abs=1e-6)
        assert coupled_fixed_point(0.2, 0.5)[0] == pytest.approx(0.35, abs=1e-6)

    def test_closed_form_on_grid(self):
        for tx in np.arange(0.02, 1.001, 0.02):
            for ty in np.arange(0.02, 1.001, 0.02):
                sx, sy = coupled_fixed_point(float(tx), float(ty), tol=1e-9)
                assert abs(sx - min(ty, (tx + ty) / 2, 1.0)) < 1e-6

    def test_fixed_point_satisfies_system(self):
        sx, sy = coupled_fixed_point(0.37, 0.81)
        assert sy == pytest.approx(min(0.37, (sx + 0.37) / 2, 1.0), abs=1e-7)
        assert sx == pytest.approx(min(0.81, (sy + 0.81) / 2, 1.0), abs=1e-7)

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            coupled_fixed_point(0, 0.5)
        with pytest.raises(ValueError):
            coupled_fixed_point(0.5, 1.2)

    def brute_force_minimal_sx(self, tx, ty, step=1e-3):
        # smallest grid s_x admitting a grid s_y with both inequalities
        sy_grid = np.arange(0.0, 1.0 + step / 2, step)
        for sx in np.arange(0.0, 1.0 + step / 2, step):
            need_sy = min(tx, (sx + tx) / 2, 1.0)
            ok = sy_grid[sy_grid >= need_sy - 1e-12]
            if len(ok) and sx >= min(ty, (ok[0] + ty) / 2, 1.0) - 1e-12:
                return sx
        return 1.0

    def test_matches_bruteforce_minimizer_spotchecks(self):
        for tx, ty in ((0.4, 0.8), (0.9, 0.3), (1.0, 1.0), (0.14, 0.98)):
            sx, _ = coupled_fixed_point(tx, ty)
            assert abs(sx - self.brute_force_minimal_sx(tx, ty)) < 2e-3


class TestBoundQuery:
    def test_validation(self):
        BoundQuery(0.5, 1.5, t_x=0.3, eps=0.1)
        with pytest.raises(ValueError):
            BoundQuery(2.5, 0.5)
        with pytest.raises(ValueError):
            BoundQuery(0.5, 0.5, s_x=1.5)
        with pytest.raises(ValueError):
            BoundQuery(0.5, 0.5, eps=-1)
