"""Dimensions of the isotropy algebra, its prolongation and H^{0,2}.

Run with ``python3 demos/spencer_table.py``.  Everything is computed at the
standard structure J0 and then again at a random conjugate, to show the
numbers only depend on n.
"""

import random

from almostcomplex import build_splitting
from almostcomplex.corpus import random_theta0
from almostcomplex.jets import standard_complex_matrix
from almostcomplex.spencer import spencer_dimensions

print(f"{'n':>2} {'g':>4} {'g1':>4} {'dg':>4} {'dIm':>4} {'H02':>4} {'overlap':>8}")
for n in (1, 2, 3):
    J0 = standard_complex_matrix(n)
    s = spencer_dimensions(J0)
    sp = build_splitting(J0)
    print(f"{n:>2} {s.g:>4} {s.g1:>4} {s.delta_g:>4} {s.delta_im:>4} {s.h02:>4} {sp.intersection.dim:>8}")

# same thing at a conjugate of J0
rng = random.Random(0)
theta0, _ = random_theta0(2, rng)
print("\nconjugate at n=2:", spencer_dimensions(theta0).to_json())

# The two alternation images are far from complementary: they overlap in
# 2n^3 dimensions while still summing to every 2-form.
sp = build_splitting(standard_complex_matrix(2))
print("sum of images:", sp.total.dim, " direct:", sp.is_direct)
