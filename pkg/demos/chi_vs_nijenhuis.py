"""Compare omega, chi and N over both corpora.

Transported copies of J0 are integrable; gauge structures mostly are not.
At each sampled point we print whether each quantity vanishes.
"""

import random

from almostcomplex import corpus, integrability_report
from almostcomplex.corpus import random_point

rng = random.Random(7)
for kind in ("pullback", "gauge"):
    for seed in range(4):
        S, _ = corpus.generate(kind, 2, 2, seed)
        pts = [random_point(4, rng) for _ in range(3)]
        rep = integrability_report(S, pts)
        flags = [(pt.omega.is_zero(), pt.chi_zero, pt.nijenhuis.is_zero()) for pt in rep.points]
        print(f"{kind:8} seed={seed}  omega==0: {rep.omega_identically_zero!s:5}  N==0: {rep.nijenhuis_identically_zero!s:5}")
        for (w, c, nz), p in zip(flags, pts):
            print(f"    p=({', '.join(map(str, p))})  omega0={w!s:5} chi0={c!s:5} N0={nz!s:5}")
