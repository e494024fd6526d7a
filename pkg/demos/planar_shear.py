"""A flat structure on R^2 whose closed-form omega is not zero.

Pull J0 back by the polynomial shear f(x1, x2) = (x1, x2 + x1^2).  The result
is integrable by construction, so N vanishes.  The closed-form omega does not.
The class chi, which is omega modulo the g-image, does vanish.
"""

from almostcomplex import PolyDiffeo, chi, pullback_acs, standard_structure
from almostcomplex.invariants import (
    is_identically_zero,
    jet1_at,
    nijenhuis_symbolic,
    omega_symbolic,
)

f = PolyDiffeo.from_strings(1, ["x1", "x2 + x1^2"], ["x1", "x2 - x1^2"])
S = pullback_acs(f, standard_structure(1))
print("S =", [[str(c) for c in row] for row in S.S])

om = omega_symbolic(S)
print("omega^1_12 =", om[0][0][1])
print("omega^2_12 =", om[1][0][1])
print("N identically zero:", is_identically_zero(nijenhuis_symbolic(S)))

for p in [(0, 0), (1, 2), (-3, 1)]:
    print(p, "chi zero:", chi(jet1_at(S, p)).is_zero())
