"""Dyadic cubes, box counting, and branching profiles.

Walks through the exact grid arithmetic: locating points, taking
ancestors, counting occupied cubes per level, and reading dimensions off
branching profiles of the built-in generator sets.
"""

from fractions import Fraction

from radial_lab import (
    CubeSet,
    Point2,
    ancestor,
    box_count,
    branching_profile,
    cantor_dimension,
    cantor_product,
    cube_of_point,
    cubes_in_ball,
    estimate_dimension,
)

# --- locating points on the grid -------------------------------------------
p = Point2(Fraction(3, 8), Fraction(3, 4))
for n in (1, 2, 3, 5):
    print(f"level {n}: {p!r} sits in {cube_of_point(p, n)}")

c = cube_of_point(p, 5)
print("ancestors:", [ancestor(c, m) for m in (5, 3, 1, 0)])

# --- box counting -----------------------------------------------------------
diag = CubeSet(6, [(k, k) for k in range(64)])
print("\ndiagonal at level 6, counts per coarser level:")
print([box_count(diag, m) for m in range(7)])

print("cubes of the diagonal within 1/4 of the origin:",
      cubes_in_ball(diag, Point2(0, 0), Fraction(1, 4)))

# --- branching profiles read off dimensions ---------------------------------
for name, digits in (("quarter corners", ({0, 3}, {0, 3})),
                     ("half line", ({0, 3}, {0})),
                     ("full square", (range(4), range(4)))):
    S = cantor_product(10, *digits)
    prof = branching_profile(S)
    est = estimate_dimension(prof, 2, 10)
    print(f"\n{name}: {len(S)} cubes at level 10")
    print(f"  counts: {prof.counts}")
    print(f"  fitted slope {est.slope:.3f} (analytic {cantor_dimension(*digits):.3f}), "
          f"residual {est.residual:.2e}")
