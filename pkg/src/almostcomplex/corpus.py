"""Seeded generators for structures, diffeomorphisms, points and jets.

All randomness comes from :class:`random.Random`, whose Mersenne Twister
stream and ``randint``/``choice`` behaviour are stable across platforms, so a
seed fixes the output exactly.

Generated objects:

``constant``   the standard matrix ``J0 = [[0, -I], [I, 0]]``.
``gauge``      ``A J0 A^-1`` with ``A = I + U``, ``U`` strictly upper
               triangular with random polynomial entries; ``A^-1`` is the
               finite sum ``sum_m (-U)^m``.
``pullback``   ``J0`` transported by a shear ``f = L2 ∘ σ ∘ L1`` where the
               ``L`` are sparse integer linear maps with integer inverses
               (a signed permutation times one elementary shear) and ``σ``
               adds a polynomial of one coordinate half to the other half.
               The result is integrable by construction.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .diffeo import PolyDiffeo, pullback_acs
from .jets import ACS, Chart, Jet1, poly_mat_mul, standard_complex_matrix, standard_structure
from .linalg import identity, mat_inv, mat_mul, mat_scale, mat_add, matrix
from .polynomial import Polynomial

__all__ = [
    "random_polynomial",
    "random_unimodular",
    "random_sparse_unimodular",
    "random_invertible",
    "random_theta0",
    "random_point",
    "random_J1pi_jet",
    "random_endo",
    "constant_structure",
    "gauge_structure",
    "random_shear",
    "pullback_structure",
    "generate",
]


def _nonzero(rng: random.Random, lo: int = -3, hi: int = 3) -> int:
    while True:
        c = rng.randint(lo, hi)
        if c:
            return c


def random_polynomial(
    nvars: int,
    degree: int,
    rng: random.Random,
    terms: int = 3,
    variables=None,
    min_degree: int = 0,
) -> Polynomial:
    """Sum of ``terms`` random monomials of total degree in ``[min_degree, degree]``."""
    if degree < 0:
        raise ValueError("degree bound must be non-negative")
    pool = list(range(nvars)) if variables is None else list(variables)
    out = {}
    for _ in range(terms):
        deg = rng.randint(min(min_degree, degree), degree)
        exps = [0] * nvars
        for _ in range(deg):
            exps[rng.choice(pool)] += 1
        key = tuple(exps)
        out[key] = out.get(key, 0) + _nonzero(rng)
    return Polynomial(nvars, {k: Fraction(v) for k, v in out.items()})


def random_unimodular(d: int, rng: random.Random, steps: int | None = None) -> tuple:
    """Product of elementary integer shears; determinant 1, integer inverse."""
    M = [list(r) for r in identity(d)]
    for _ in range(steps if steps is not None else 2 * d):
        a, b = rng.sample(range(d), 2)
        c = _nonzero(rng, -2, 2)
        # row operation: row a += c * row b
        M[a] = [x + c * y for x, y in zip(M[a], M[b])]
    return matrix(M)


def random_sparse_unimodular(d: int, rng: random.Random) -> tuple:
    """Signed permutation matrix times one elementary shear."""
    perm = list(range(d))
    rng.shuffle(perm)
    P = [[Fraction(0)] * d for _ in range(d)]
    for i, j in enumerate(perm):
        P[i][j] = Fraction(rng.choice((-1, 1)))
    return mat_mul(matrix(P), random_unimodular(d, rng, steps=1))


def random_invertible(d: int, rng: random.Random) -> tuple:
    """A unimodular matrix times a diagonal of small nonzero integers."""
    U = random_unimodular(d, rng)
    D = [[Fraction(_nonzero(rng, -2, 2)) if i == j else Fraction(0) for j in range(d)] for i in range(d)]
    return mat_mul(U, matrix(D))


def random_theta0(n: int, rng: random.Random):
    """``(F J0 F^-1, F)`` for a random invertible ``F``."""
    F = random_invertible(2 * n, rng)
    return mat_mul(mat_mul(F, standard_complex_matrix(n)), mat_inv(F)), F


def random_point(d: int, rng: random.Random, bound: int = 3) -> tuple:
    return tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(d))


def random_endo(d: int, rng: random.Random, bound: int = 3) -> tuple:
    return matrix([[rng.randint(-bound, bound) for _ in range(d)] for _ in range(d)])


def random_J1pi_jet(n: int, rng: random.Random) -> Jet1:
    """A jet with ``u`` a random conjugate of ``J0`` and ``du_k = (M_k + u M_k u) / 2``."""
    d = 2 * n
    u, _ = random_theta0(n, rng)
    du = []
    for _ in range(d):
        M = random_endo(d, rng)
        du.append(mat_scale(mat_add(M, mat_mul(mat_mul(u, M), u)), Fraction(1, 2)))
    return Jet1(random_point(d, rng), u, tuple(du))


def constant_structure(n: int) -> ACS:
    return standard_structure(n)


def gauge_structure(n: int, degree: int, rng: random.Random) -> ACS:
    d = 2 * n
    U = [[Polynomial.zero(d) for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            U[i][j] = random_polynomial(d, degree, rng, terms=2, min_degree=1)
    one = Polynomial.constant(d, 1)
    ident = tuple(tuple(one if i == j else Polynomial.zero(d) for j in range(d)) for i in range(d))
    A = tuple(tuple(ident[i][j] + U[i][j] for j in range(d)) for i in range(d))
    negU = tuple(tuple(-x for x in row) for row in U)
    Ainv = ident
    power = ident
    for _ in range(d - 1):
        power = poly_mat_mul(power, negU)
        Ainv = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(Ainv, power))
    J = tuple(
        tuple(Polynomial.constant(d, x) for x in row) for row in standard_complex_matrix(n)
    )
    S = poly_mat_mul(poly_mat_mul(A, J), Ainv)
    return ACS(Chart(n), S)


def _linear_diffeo(L) -> PolyDiffeo:
    d = len(L)
    xs = Polynomial.variables(d)
    Linv = mat_inv(L)

    def apply(M):
        return tuple(
            sum((xs[j].scale(M[i][j]) for j in range(d) if M[i][j]), Polynomial.zero(d))
            for i in range(d)
        )

    return PolyDiffeo(apply(L), apply(Linv))


def random_shear(n: int, degree: int, rng: random.Random) -> PolyDiffeo:
    """``L2 ∘ σ ∘ L1`` with an exact polynomial inverse."""
    d = 2 * n
    xs = Polynomial.variables(d)
    low, high = list(range(n)), list(range(n, d))
    src, dst = (low, high) if rng.random() < 0.5 else (high, low)
    shift = {i: random_polynomial(d, degree, rng, terms=2, variables=src, min_degree=min(2, degree))
             for i in dst}
    f = tuple(xs[i] + shift[i] if i in shift else xs[i] for i in range(d))
    g = tuple(xs[i] - shift[i] if i in shift else xs[i] for i in range(d))
    sigma = PolyDiffeo(f, g)
    L1 = _linear_diffeo(random_sparse_unimodular(d, rng))
    L2 = _linear_diffeo(random_sparse_unimodular(d, rng))
    return L1.then(sigma).then(L2)


def pullback_structure(n: int, degree: int, rng: random.Random):
    """``(S, f)`` with ``S`` the transport of ``J0`` by a random shear ``f``."""
    f = random_shear(n, degree, rng)
    return pullback_acs(f, standard_structure(n)), f


def generate(kind: str, n: int, degree: int, seed: int):
    """Structure (and diffeomorphism for ``pullback``) for the given parameters."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if degree < 0:
        raise ValueError("degree bound must be non-negative")
    rng = random.Random(seed)
    if kind == "constant":
        return constant_structure(n), None
    if kind == "gauge":
        return gauge_structure(n, degree, rng), None
    if kind == "pullback":
        return pullback_structure(n, degree, rng)
    raise ValueError(f"unknown structure kind {kind!r}")
