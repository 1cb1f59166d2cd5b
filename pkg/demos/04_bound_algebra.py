"""The closed-form bound algebra and the coupled fixed point.

Tabulates the three projection bounds, shows where the main bound strictly
improves on the others, and verifies the two-variable inequality system's
closed form by iteration.
"""

from fractions import Fraction

from radial_lab import (
    bound_main,
    bound_orthogonal_exceptional,
    bound_osw1,
    bound_osw2,
    coupled_fixed_point,
    dominance_report,
    incidence_exponent,
)

# --- a small table ------------------------------------------------------------
print(f"{'dX':>5} {'dY':>5} {'osw1':>6} {'osw2':>6} {'main':>6}  strict?")
for dx, dy in ((0.2, 0.8), (0.5, 0.5), (0.3, 1.4), (1.0, 0.5), (0.9, 1.8)):
    rep = dominance_report(dx, dy)
    o2 = "-" if rep.osw2 is None else f"{rep.osw2:.2f}"
    print(f"{dx:>5.2f} {dy:>5.2f} {rep.osw1:>6.2f} {o2:>6} {rep.main:>6.2f}  "
          f"{'yes' if rep.strict_over_osw1 else 'no'}")

print("\nstrict improvement happens exactly when dX < min(dY, 1)")

# --- orthogonal exceptional-set bound ------------------------------------------
print("\nexceptional directions for dY = 0.8:")
for u in (0.2, 0.4, 0.5, 0.7, 0.8):
    print(f"  u = {u:.1f}: bound {bound_orthogonal_exceptional(0.8, u):.2f}")

# --- exact arithmetic stays exact ----------------------------------------------
v = bound_main(Fraction(1, 3), Fraction(2, 3))
print(f"\nbound_main(1/3, 2/3) = {v} (a Fraction, no rounding)")

# --- the coupled system ---------------------------------------------------------
print("\ncoupled fixed point vs closed form min(t_y, (t_x+t_y)/2, 1):")
for tx, ty in ((0.4, 0.8), (1.0, 1.0), (0.2, 0.5), (0.7, 0.3)):
    sx, sy = coupled_fixed_point(tx, ty)
    closed = min(ty, (tx + ty) / 2, 1.0)
    print(f"  t_x={tx:.1f} t_y={ty:.1f}: s_x* = {sx:.4f}, s_y* = {sy:.4f}, "
          f"closed form {closed:.4f}")

print("\nincidence exponent at (s, t) = (1/2, 1):", incidence_exponent(0.5, 1.0))
