"""Polynomial diffeomorphisms, their 2-jets, and the lifted actions.

Jet-level operations only need the 2-jet of a diffeomorphism at a point;
the full polynomial inverse is required only to pull back a whole field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .jets import ACS, Jet1, TensorField, poly_mat_mul
from .linalg import (
    DimensionError,
    SingularMatrixError,
    identity,
    mat_add,
    mat_inv,
    mat_mul,
    mat_sub,
    mat_vec,
    matrix,
    vector,
)
from .polynomial import Polynomial, compose_many, polynomials

__all__ = [
    "MissingInverseError",
    "PolyDiffeo",
    "Diffeo2Jet",
    "VFJet1",
    "MatJet1",
    "diffeo_2jet",
    "invert_2jet",
    "compose_2jets",
    "identity_2jet",
    "lift0",
    "lift1",
    "lift0_vf",
    "lift0_tangent",
    "pushforward_vfjet",
    "pullback_acs",
]

ZERO = Fraction(0)


class MissingInverseError(ValueError):
    """An exact polynomial inverse is required but absent."""


@dataclass(frozen=True)
class PolyDiffeo:
    """``x~ = f(x)`` with polynomial components and an optional polynomial inverse.

    When ``f_inv`` is given, both ``f∘f_inv`` and ``f_inv∘f`` are checked to be
    the identity as polynomial identities.
    """

    f: tuple
    f_inv: tuple | None = None

    def __post_init__(self):
        d = len(self.f)
        if d == 0 or d % 2:
            raise DimensionError("a diffeomorphism of R^{2n} needs 2n components")
        if any(p.nvars != d for p in self.f):
            raise DimensionError(f"components must be polynomials in {d} variables")
        object.__setattr__(self, "f", tuple(self.f))
        if self.f_inv is not None:
            g = tuple(self.f_inv)
            if len(g) != d or any(p.nvars != d for p in g):
                raise DimensionError("inverse has the wrong shape")
            object.__setattr__(self, "f_inv", g)
            xs = Polynomial.variables(d)
            for label, comp in (("f∘f_inv", _compose(self.f, g)), ("f_inv∘f", _compose(g, self.f))):
                if list(comp) != xs:
                    raise ValueError(f"{label} is not the identity")

    @classmethod
    def _trusted(cls, f: tuple, f_inv: tuple | None) -> "PolyDiffeo":
        # inverse pair already known to be correct, e.g. swapped or composed pairs
        obj = object.__new__(cls)
        object.__setattr__(obj, "f", tuple(f))
        object.__setattr__(obj, "f_inv", None if f_inv is None else tuple(f_inv))
        return obj

    @classmethod
    def from_strings(cls, n: int, f: Sequence, f_inv: Sequence | None = None) -> "PolyDiffeo":
        d = 2 * n
        if len(f) != d or (f_inv is not None and len(f_inv) != d):
            raise DimensionError(f"need {d} components")
        return cls(tuple(polynomials(f, d)), None if f_inv is None else tuple(polynomials(f_inv, d)))

    @classmethod
    def identity(cls, n: int) -> "PolyDiffeo":
        xs = tuple(Polynomial.variables(2 * n))
        return cls(xs, xs)

    @property
    def dim(self) -> int:
        return len(self.f)

    @property
    def n(self) -> int:
        return self.dim // 2

    def inverse(self) -> "PolyDiffeo":
        if self.f_inv is None:
            raise MissingInverseError("diffeomorphism has no polynomial inverse")
        return PolyDiffeo._trusted(self.f_inv, self.f)

    def __call__(self, p: Sequence) -> tuple:
        return tuple(c.evaluate(p) for c in self.f)

    def then(self, other: "PolyDiffeo") -> "PolyDiffeo":
        """``other ∘ self``."""
        f = _compose(other.f, self.f)
        g = None
        if self.f_inv is not None and other.f_inv is not None:
            g = _compose(self.f_inv, other.f_inv)
        return PolyDiffeo._trusted(f, g)

    def jacobian(self) -> tuple:
        d = self.dim
        return tuple(tuple(self.f[i].diff(r) for r in range(d)) for i in range(d))


def _compose(outer: Sequence[Polynomial], inner: Sequence[Polynomial]) -> tuple:
    return compose_many(outer, inner)


@dataclass(frozen=True)
class Diffeo2Jet:
    """2-jet of a map at ``p``: image ``q``, Jacobian ``F``, second derivatives ``F2[i][r][s]``."""

    p: tuple
    q: tuple
    F: tuple
    F2: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", vector(self.p))
        object.__setattr__(self, "q", vector(self.q))
        object.__setattr__(self, "F", matrix(self.F))
        object.__setattr__(self, "F2", tuple(matrix(m) for m in self.F2))
        d = len(self.p)
        if len(self.q) != d or len(self.F) != d or len(self.F2) != d:
            raise DimensionError("inconsistent 2-jet shapes")
        for m in self.F2:
            for r in range(d):
                for s in range(r):
                    if m[r][s] != m[s][r]:
                        raise ValueError("second derivatives must be symmetric")

    @property
    def dim(self) -> int:
        return len(self.p)

    def F_partial(self, r: int) -> tuple:
        """The matrix ``∂_r F``, entries ``F^i_{a r}``."""
        d = self.dim
        return tuple(tuple(self.F2[i][a][r] for a in range(d)) for i in range(d))


def identity_2jet(p: Sequence) -> Diffeo2Jet:
    d = len(p)
    z = tuple(tuple((ZERO,) * d for _ in range(d)) for _ in range(d))
    return Diffeo2Jet(p, p, identity(d), z)


def diffeo_2jet(f: PolyDiffeo, p: Sequence) -> Diffeo2Jet:
    d = f.dim
    if len(p) != d:
        raise DimensionError(f"point has {len(p)} coordinates, expected {d}")
    p = vector(p)
    first = [[f.f[i].diff(r) for r in range(d)] for i in range(d)]
    F = tuple(tuple(first[i][r].evaluate(p) for r in range(d)) for i in range(d))
    try:
        mat_inv(F)
    except SingularMatrixError:
        raise SingularMatrixError(f"Jacobian is singular at {[str(x) for x in p]}") from None
    F2 = tuple(
        tuple(tuple(first[i][r].diff(s).evaluate(p) for s in range(d)) for r in range(d))
        for i in range(d)
    )
    return Diffeo2Jet(p, f(p), F, F2)


def invert_2jet(j: Diffeo2Jet) -> Diffeo2Jet:
    """2-jet at ``q`` of the local inverse.

    Differentiating ``g(f(x)) = x`` twice gives
    ``G^a_{ij} = -G^a_b F^b_{rs} G^r_i G^s_j`` with ``G = F^-1``.
    """
    d = j.dim
    G = mat_inv(j.F)
    # T^a_{rs} = G^a_b F^b_{rs}
    T = [[[sum((G[a][b] * j.F2[b][r][s] for b in range(d) if G[a][b]), ZERO) for s in range(d)]
          for r in range(d)] for a in range(d)]
    G2 = []
    for a in range(d):
        Ta = T[a]
        # (G^T Ta G)[i][j]
        m = mat_mul(mat_mul(tuple(zip(*G)), Ta), G)
        G2.append(tuple(tuple(-x for x in row) for row in m))
    return Diffeo2Jet(j.q, j.p, G, tuple(G2))


def compose_2jets(inner: Diffeo2Jet, outer: Diffeo2Jet) -> Diffeo2Jet:
    """2-jet of ``outer ∘ inner`` at ``inner.p``; requires ``outer.p == inner.q``."""
    if outer.p != inner.q:
        raise ValueError("outer jet is not based at the image of the inner jet")
    d = inner.dim
    H = mat_mul(outer.F, inner.F)
    H2 = []
    for a in range(d):
        # F^a_{ij} G^i_r G^j_s + F^a_i G^i_{rs}
        quad = mat_mul(mat_mul(tuple(zip(*inner.F)), outer.F2[a]), inner.F)
        lin = [[sum((outer.F[a][i] * inner.F2[i][r][s] for i in range(d) if outer.F[a][i]), ZERO)
                 for s in range(d)] for r in range(d)]
        H2.append(mat_add(quad, lin))
    return Diffeo2Jet(inner.p, outer.q, H, tuple(H2))


# -- truncated first-order jets of matrix-valued functions ---------------


@dataclass(frozen=True)
class MatJet1:
    """Value and first partials of a matrix-valued function at a point."""

    value: tuple
    partials: tuple

    def __mul__(self, other: "MatJet1") -> "MatJet1":
        v = mat_mul(self.value, other.value)
        parts = tuple(
            mat_add(mat_mul(da, other.value), mat_mul(self.value, db))
            for da, db in zip(self.partials, other.partials)
        )
        return MatJet1(v, parts)

    def inverse(self) -> "MatJet1":
        inv = mat_inv(self.value)
        parts = tuple(
            tuple(tuple(-x for x in row) for row in mat_mul(mat_mul(inv, da), inv))
            for da in self.partials
        )
        return MatJet1(inv, parts)

    def reparametrize(self, J) -> "MatJet1":
        """Partials after the change of variables with Jacobian ``J = ∂x/∂y``."""
        d = len(J)
        parts = []
        for k in range(d):
            acc = None
            for r in range(d):
                c = J[r][k]
                if not c:
                    continue
                term = tuple(tuple(x * c for x in row) for row in self.partials[r])
                acc = term if acc is None else mat_add(acc, term)
            if acc is None:
                acc = tuple(tuple(ZERO for _ in row) for row in self.value)
            parts.append(acc)
        return MatJet1(self.value, tuple(parts))


def lift0(F, u) -> tuple:
    """``F u F^-1``: the lifted action on a (1,1)-tensor at a point."""
    F = matrix(F)
    return mat_mul(mat_mul(F, matrix(u)), mat_inv(F))


def lift1(j2f: Diffeo2Jet, theta1: Jet1) -> Jet1:
    """Image of a 1-jet under the lifted diffeomorphism.

    The section ``x~ -> F(g(x~)) u(g(x~)) F(g(x~))^-1`` is differentiated by
    truncated jet arithmetic: first-order jets of ``F`` and ``u`` in ``x`` are
    multiplied, then reparametrised through ``Dg = F^-1``.
    """
    if theta1.p != j2f.p:
        raise ValueError("jet and diffeomorphism are based at different points")
    d = j2f.dim
    Fjet = MatJet1(j2f.F, tuple(j2f.F_partial(r) for r in range(d)))
    ujet = MatJet1(theta1.u, theta1.du)
    out = (Fjet * ujet * Fjet.inverse()).reparametrize(mat_inv(j2f.F))
    return Jet1(j2f.q, out.value, out.partials)


@dataclass(frozen=True)
class VFJet1:
    """1-jet of a vector field: components ``X^i`` and partials ``dX[i][j] = X^i_j``."""

    p: tuple
    X: tuple
    dX: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", vector(self.p))
        object.__setattr__(self, "X", vector(self.X))
        object.__setattr__(self, "dX", matrix(self.dX))
        d = len(self.p)
        if len(self.X) != d or len(self.dX) != d or any(len(r) != d for r in self.dX):
            raise DimensionError("vector field jet has inconsistent shapes")

    @classmethod
    def from_field(cls, components: Sequence[Polynomial], p: Sequence) -> "VFJet1":
        d = len(components)
        p = vector(p)
        return cls(
            p,
            tuple(c.evaluate(p) for c in components),
            tuple(tuple(components[i].diff(j).evaluate(p) for j in range(d)) for i in range(d)),
        )

    def vector(self) -> tuple:
        """Coordinates ``(X, dX)`` flattened as in the isotropy-space system."""
        return self.X + tuple(x for row in self.dX for x in row)

    @classmethod
    def from_vector(cls, p: Sequence, v: Sequence) -> "VFJet1":
        d = len(p)
        return cls(p, v[:d], tuple(tuple(v[d + i * d + j] for j in range(d)) for i in range(d)))


def lift0_vf(X: VFJet1, u) -> tuple:
    """Horizontal and vertical parts of the lifted field at ``(p, u)``."""
    u = matrix(u)
    if len(u) != len(X.X):
        raise DimensionError("vector field and tensor dimensions differ")
    return X.X, mat_sub(mat_mul(X.dX, u), mat_mul(u, X.dX))


def lift0_tangent(j2f: Diffeo2Jet, u, horizontal: Sequence, vertical) -> tuple:
    """Tangent map of the lifted diffeomorphism at ``(p, u)``.

    Returns the image ``(F X, dF[X] u F^-1 + F V F^-1 - F u F^-1 dF[X] F^-1)``.
    """
    d = j2f.dim
    u = matrix(u)
    G = mat_inv(j2f.F)
    dF = tuple(
        tuple(sum((j2f.F2[i][a][r] * horizontal[r] for r in range(d)), ZERO) for a in range(d))
        for i in range(d)
    )
    FuG = mat_mul(mat_mul(j2f.F, u), G)
    vert = mat_add(
        mat_mul(mat_mul(dF, u), G),
        mat_sub(mat_mul(mat_mul(j2f.F, matrix(vertical)), G), mat_mul(mat_mul(FuG, dF), G)),
    )
    return mat_vec(j2f.F, horizontal), vert


def pushforward_vfjet(j2f: Diffeo2Jet, X: VFJet1) -> VFJet1:
    """1-jet at ``f(p)`` of ``f_* X``.

    ``Y(x~) = F(g(x~)) X(g(x~))`` so ``∂_k Y^i = (F^i_{ar} X^a + F^i_a X^a_r) G^r_k``.
    """
    if X.p != j2f.p:
        raise ValueError("vector field jet and diffeomorphism are based at different points")
    d = j2f.dim
    G = mat_inv(j2f.F)
    M = tuple(
        tuple(
            sum((j2f.F2[i][a][r] * X.X[a] for a in range(d)), ZERO)
            + sum((j2f.F[i][a] * X.dX[a][r] for a in range(d)), ZERO)
            for r in range(d)
        )
        for i in range(d)
    )
    return VFJet1(j2f.q, mat_vec(j2f.F, X.X), mat_mul(M, G))


def pullback_acs(f: PolyDiffeo, S: TensorField) -> TensorField:
    """The transformed field ``x~ -> Df(g(x~)) S(g(x~)) Dg(x~)``.

    Returns an :class:`ACS` when ``S`` is one.
    """
    if f.f_inv is None:
        raise MissingInverseError("pullback of a field needs a polynomial inverse")
    if S.dim != f.dim:
        raise DimensionError("field and diffeomorphism dimensions differ")
    g = f.f_inv
    d = f.dim
    Df_g = tuple(zip(*[iter(compose_many([e for row in f.jacobian() for e in row], g))] * d))
    S_g = tuple(zip(*[iter(compose_many([e for row in S.S for e in row], g))] * d))
    Dg = PolyDiffeo._trusted(g, None).jacobian()
    out = poly_mat_mul(poly_mat_mul(Df_g, S_g), Dg)
    if isinstance(S, ACS):
        # Dg = Df(g)^-1 identically, so the square stays -I
        return ACS.unchecked(S.chart, out)
    return TensorField(S.chart, out)
