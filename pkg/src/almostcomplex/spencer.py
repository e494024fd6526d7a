"""Pointwise algebra at an almost-complex point theta0.

Coordinates used throughout:

* endomorphisms ``X`` of T_p flatten to ``X[i][j] -> i*d + j``;
* ``Hom1`` elements ``h^i_{j|k}`` (endomorphism-valued covectors, ``k`` the
  covector slot) flatten to ``(i*d + j)*d + k``;
* 2-forms keep the full antisymmetric array ``w^i_{jk}`` but flatten to the
  independent components ``j < k``.

The alternation map takes ``h`` to ``w^i_{jk} = h^i_{j|k} - h^i_{k|j}``,
which is the coefficient array of the bracket of horizontal lifts.  As a
bilinear map it evaluates to ``w(X, Y) = h(Y)X - h(X)Y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .jets import require_complex_point
from .linalg import (
    DimensionError,
    SubspaceBasis,
    complement_in,
    mat_add,
    mat_inv,
    mat_mul,
    mat_scale,
    mat_sub,
    matrix,
    kernel_basis,
    solve_linear,
    span,
    subspace_intersect,
    subspace_sum,
    transpose,
)

__all__ = [
    "Hom1",
    "TwoForm",
    "Splitting",
    "hat_map",
    "isotropy_algebra",
    "anticommutant",
    "split_endo",
    "tensor_covectors",
    "symmetric_hom1",
    "prolongation",
    "spencer_delta",
    "delta_image",
    "delta_rank_full",
    "h02_dimension",
    "build_splitting",
    "project_two_form",
    "conjugate_subspace",
    "spencer_dimensions",
    "SpencerDimensions",
    "hom1_split",
    "hom1_in",
    "two_form_dim",
]

ZERO = Fraction(0)


def _endo_vec(X) -> tuple:
    return tuple(x for row in X for x in row)


def _endo_mat(v, d) -> tuple:
    return tuple(tuple(v[i * d + j] for j in range(d)) for i in range(d))


def _pairs(d):
    return list(combinations(range(d), 2))


# -- value types ---------------------------------------------------------


@dataclass(frozen=True)
class Hom1:
    """Coefficients ``h[i][j][k] = h^i_{j|k}``; ``h(X)^i_j = sum_k h^i_{j|k} X^k``."""

    h: tuple

    def __post_init__(self):
        d = len(self.h)
        arr = tuple(
            tuple(tuple(Fraction(x) for x in row) for row in plane) for plane in self.h
        )
        if any(len(plane) != d or any(len(r) != d for r in plane) for plane in arr):
            raise DimensionError("Hom1 coefficients must be a d x d x d array")
        object.__setattr__(self, "h", arr)

    @property
    def dim(self) -> int:
        return len(self.h)

    @classmethod
    def zero(cls, d: int) -> "Hom1":
        return cls(tuple(tuple((ZERO,) * d for _ in range(d)) for _ in range(d)))

    @classmethod
    def from_slots(cls, mats: Sequence) -> "Hom1":
        """Build from the matrices ``h_k`` with ``h_k[i][j] = h^i_{j|k}``."""
        d = len(mats)
        return cls(
            tuple(
                tuple(tuple(mats[k][i][j] for k in range(d)) for j in range(d))
                for i in range(d)
            )
        )

    def slot(self, k: int) -> tuple:
        d = self.dim
        return tuple(tuple(self.h[i][j][k] for j in range(d)) for i in range(d))

    def slots(self) -> tuple:
        return tuple(self.slot(k) for k in range(self.dim))

    def apply(self, X: Sequence) -> tuple:
        """The endomorphism ``h(X)``."""
        d = self.dim
        return tuple(
            tuple(sum((self.h[i][j][k] * X[k] for k in range(d)), ZERO) for j in range(d))
            for i in range(d)
        )

    def vector(self) -> tuple:
        return tuple(x for plane in self.h for row in plane for x in row)

    @classmethod
    def from_vector(cls, v: Sequence, d: int) -> "Hom1":
        if len(v) != d ** 3:
            raise DimensionError(f"expected {d ** 3} coordinates, got {len(v)}")
        return cls(
            tuple(
                tuple(tuple(v[(i * d + j) * d + k] for k in range(d)) for j in range(d))
                for i in range(d)
            )
        )

    def __add__(self, other: "Hom1") -> "Hom1":
        return Hom1.from_vector([a + b for a, b in zip(self.vector(), other.vector())], self.dim)

    def __sub__(self, other: "Hom1") -> "Hom1":
        return Hom1.from_vector([a - b for a, b in zip(self.vector(), other.vector())], self.dim)

    def is_symmetric(self) -> bool:
        d = self.dim
        return all(
            self.h[i][j][k] == self.h[i][k][j] for i in range(d) for j in range(d) for k in range(j)
        )

    def is_zero(self) -> bool:
        return not any(self.vector())


@dataclass(frozen=True)
class TwoForm:
    """Tangent-valued 2-form; ``w(X, Y)^i = sum_{j,k} w^i_{jk} X^j Y^k``."""

    w: tuple

    def __post_init__(self):
        d = len(self.w)
        arr = tuple(
            tuple(tuple(Fraction(x) for x in row) for row in plane) for plane in self.w
        )
        if any(len(plane) != d or any(len(r) != d for r in plane) for plane in arr):
            raise DimensionError("2-form coefficients must be a d x d x d array")
        for i in range(d):
            for j in range(d):
                for k in range(j, d):
                    if arr[i][j][k] != -arr[i][k][j]:
                        raise ValueError(
                            f"coefficients not antisymmetric at ({i + 1},{j + 1},{k + 1})"
                        )
        object.__setattr__(self, "w", arr)

    @property
    def dim(self) -> int:
        return len(self.w)

    @classmethod
    def zero(cls, d: int) -> "TwoForm":
        return cls(tuple(tuple((ZERO,) * d for _ in range(d)) for _ in range(d)))

    def vector(self) -> tuple:
        d = self.dim
        return tuple(self.w[i][j][k] for i in range(d) for j, k in _pairs(d))

    @classmethod
    def from_vector(cls, v: Sequence, d: int) -> "TwoForm":
        pairs = _pairs(d)
        if len(v) != d * len(pairs):
            raise DimensionError(f"expected {d * len(pairs)} coordinates, got {len(v)}")
        arr = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
        it = iter(v)
        for i in range(d):
            for j, k in pairs:
                x = Fraction(next(it))
                arr[i][j][k] = x
                arr[i][k][j] = -x
        return cls(arr)

    def evaluate(self, X: Sequence, Y: Sequence) -> tuple:
        d = self.dim
        return tuple(
            sum((self.w[i][j][k] * X[j] * Y[k] for j in range(d) for k in range(d)), ZERO)
            for i in range(d)
        )

    def transport(self, F) -> "TwoForm":
        """Push forward by the linear isomorphism ``F``: ``F w(F^-1 ., F^-1 .)``."""
        d = self.dim
        G = mat_inv(F)
        # contract lower slots with G, then the upper slot with F
        tmp = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
        for a in range(d):
            wa = self.w[a]
            # (G^T wa G)[j][k] = sum_bc G[b][j] wa[b][c] G[c][k]
            m = mat_mul(mat_mul(transpose(G), wa), G)
            for j in range(d):
                for k in range(d):
                    tmp[a][j][k] = m[j][k]
        out = [
            [[sum((F[i][a] * tmp[a][j][k] for a in range(d) if F[i][a]), ZERO) for k in range(d)]
             for j in range(d)]
            for i in range(d)
        ]
        return TwoForm(out)

    def __add__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm.from_vector([a + b for a, b in zip(self.vector(), other.vector())], self.dim)

    def __sub__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm.from_vector([a - b for a, b in zip(self.vector(), other.vector())], self.dim)

    def __neg__(self) -> "TwoForm":
        return TwoForm.from_vector([-a for a in self.vector()], self.dim)

    def is_zero(self) -> bool:
        return not any(self.vector())

    def components(self) -> dict:
        """Nonzero independent components keyed ``"i,j,k"`` (1-based, ``j < k``)."""
        d = self.dim
        return {
            f"{i + 1},{j + 1},{k + 1}": str(self.w[i][j][k])
            for i in range(d)
            for j, k in _pairs(d)
            if self.w[i][j][k]
        }


# -- the hat map and the decomposition of endomorphisms ------------------


def hat_map(theta0) -> tuple:
    """Matrix of ``X -> X theta0 - theta0 X`` on flattened endomorphisms."""
    theta0 = matrix(theta0)
    require_complex_point(theta0)
    d = len(theta0)
    rows = []
    for i in range(d):
        for j in range(d):
            row = [ZERO] * (d * d)
            for r in range(d):
                # (X theta0)^i_j = X^i_r theta0^r_j
                row[i * d + r] += theta0[r][j]
                # (theta0 X)^i_j = theta0^i_r X^r_j
                row[r * d + j] -= theta0[i][r]
            rows.append(tuple(row))
    return tuple(rows)


def isotropy_algebra(theta0) -> SubspaceBasis:
    """Commutant of theta0: the kernel of the hat map."""
    return kernel_basis(hat_map(theta0))


def anticommutant(theta0) -> SubspaceBasis:
    """Image of the hat map, i.e. the endomorphisms anticommuting with theta0."""
    H = hat_map(theta0)
    return span(transpose(H), len(H))


def split_endo(theta0, X):
    """``X = (X - t X t)/2 + (X + t X t)/2`` with ``t = theta0``.

    The first part commutes with theta0, the second anticommutes.
    """
    theta0 = matrix(theta0)
    require_complex_point(theta0)
    X = matrix(X)
    tXt = mat_mul(mat_mul(theta0, X), theta0)
    half = Fraction(1, 2)
    return mat_scale(mat_sub(X, tXt), half), mat_scale(mat_add(X, tXt), half)


def conjugate_subspace(W: SubspaceBasis, F) -> SubspaceBasis:
    """``{F X F^-1 : X in W}`` for a subspace of endomorphisms."""
    d = len(F)
    if W.ambient != d * d:
        raise DimensionError("subspace is not in the endomorphism space of F")
    G = mat_inv(F)
    vecs = [_endo_vec(mat_mul(mat_mul(F, _endo_mat(v, d)), G)) for v in W.vectors]
    return span(vecs, d * d)


# -- Hom1-level subspaces ------------------------------------------------


def tensor_covectors(W: SubspaceBasis) -> SubspaceBasis:
    """``W (x) T*`` inside Hom1 coordinates."""
    d2 = W.ambient
    d = _side(d2)
    vecs = []
    for v in W.vectors:
        for k in range(d):
            h = [ZERO] * (d ** 3)
            for idx, x in enumerate(v):
                if x:
                    h[idx * d + k] = x
            vecs.append(h)
    return span(vecs, d ** 3)


@lru_cache(maxsize=None)
def symmetric_hom1(d: int) -> SubspaceBasis:
    """``T (x) Sym^2 T*``: all ``h`` with ``h^i_{j|k} = h^i_{k|j}``."""
    vecs = []
    for i in range(d):
        for j in range(d):
            for k in range(j, d):
                h = [ZERO] * (d ** 3)
                h[(i * d + j) * d + k] = Fraction(1)
                h[(i * d + k) * d + j] = Fraction(1)
                vecs.append(h)
    return span(vecs, d ** 3)


def _side(d2: int) -> int:
    d = int(round(d2 ** 0.5))
    if d * d != d2:
        raise DimensionError(f"{d2} is not the dimension of an endomorphism space")
    return d


def prolongation(W: SubspaceBasis) -> SubspaceBasis:
    """First prolongation ``(W (x) T*) ∩ (T (x) Sym^2 T*)``."""
    d = _side(W.ambient)
    return subspace_intersect(tensor_covectors(W), symmetric_hom1(d))


def _delta_vec(hv: Sequence, d: int) -> tuple:
    out = []
    for i in range(d):
        base = i * d * d
        for j, k in _pairs(d):
            out.append(hv[base + j * d + k] - hv[base + k * d + j])
    return tuple(out)


def spencer_delta(h: Hom1) -> TwoForm:
    """Alternation ``w^i_{jk} = h^i_{j|k} - h^i_{k|j}``."""
    d = h.dim
    arr = [
        [[h.h[i][j][k] - h.h[i][k][j] for k in range(d)] for j in range(d)] for i in range(d)
    ]
    return TwoForm(arr)


def delta_image(sub: SubspaceBasis) -> SubspaceBasis:
    """Image of a Hom1 subspace under the alternation map, in 2-form coordinates."""
    d = round(sub.ambient ** (1 / 3))
    if d ** 3 != sub.ambient:
        raise DimensionError("not a Hom1 subspace")
    return span([_delta_vec(v, d) for v in sub.vectors], d * len(_pairs(d)))


def delta_rank_full(d: int) -> int:
    """Rank of the alternation map on all of Hom1."""
    return delta_image(SubspaceBasis.full(d ** 3)).dim


def two_form_dim(d: int) -> int:
    return d * len(_pairs(d))


def h02_dimension(theta0) -> int:
    g = isotropy_algebra(theta0)
    d = len(theta0)
    return two_form_dim(d) - delta_image(tensor_covectors(g)).dim


@dataclass(frozen=True)
class SpencerDimensions:
    n: int
    g: int
    g1: int
    delta_g: int
    h02: int
    delta_im: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dim_g": self.g,
            "dim_g1": self.g1,
            "dim_delta_g": self.delta_g,
            "dim_H02": self.h02,
            "dim_delta_im": self.delta_im,
        }


def spencer_dimensions(theta0) -> SpencerDimensions:
    theta0 = matrix(theta0)
    d = len(theta0)
    g = isotropy_algebra(theta0)
    im = anticommutant(theta0)
    dg = delta_image(tensor_covectors(g)).dim
    return SpencerDimensions(
        n=d // 2,
        g=g.dim,
        g1=prolongation(g).dim,
        delta_g=dg,
        h02=two_form_dim(d) - dg,
        delta_im=delta_image(tensor_covectors(im)).dim,
    )


# -- the splitting of 2-forms -------------------------------------------


@dataclass(frozen=True)
class Splitting:
    """Images of ``g (x) T*`` and ``Im hat (x) T*`` under the alternation map.

    ``intersection`` is their common part.  Projection is taken along
    ``complement``, a canonical complement of ``intersection`` inside the
    ``g``-image, so it is unique even when the two images overlap; when the
    overlap is zero the complement is the whole ``g``-image.
    """

    theta0: tuple
    g: SubspaceBasis
    im: SubspaceBasis
    delta_g: SubspaceBasis
    delta_im: SubspaceBasis
    intersection: SubspaceBasis
    complement: SubspaceBasis

    @property
    def dim(self) -> int:
        return len(self.theta0)

    @property
    def is_direct(self) -> bool:
        return self.intersection.dim == 0

    @property
    def total(self) -> SubspaceBasis:
        return subspace_sum(self.delta_g, self.delta_im)


def build_splitting(theta0) -> Splitting:
    theta0 = matrix(theta0)
    require_complex_point(theta0)
    g = isotropy_algebra(theta0)
    im = anticommutant(theta0)
    dg = delta_image(tensor_covectors(g))
    di = delta_image(tensor_covectors(im))
    inter = subspace_intersect(dg, di)
    comp = complement_in(inter, dg)
    return Splitting(theta0, g, im, dg, di, inter, comp)


def project_two_form(s: Splitting, w: TwoForm):
    """Split ``w`` into a part in the ``g``-image and a part in the ``Im``-image.

    Returns ``(first, second)`` with ``first + second == w``.
    """
    if w.dim != s.dim:
        raise DimensionError(f"2-form on R^{w.dim} against splitting on R^{s.dim}")
    basis = list(s.complement.vectors) + list(s.delta_im.vectors)
    target = w.vector()
    # columns are basis vectors
    system = transpose(basis) if basis else ()
    sol = solve_linear(system, target, len(basis))
    if sol is None:
        raise ValueError("2-form is outside the span of the splitting")
    coeffs = sol.particular
    nc = s.complement.dim
    first = s.complement.combination(coeffs[:nc]) if nc else (ZERO,) * len(target)
    second = s.delta_im.combination(coeffs[nc:])
    return TwoForm.from_vector(first, s.dim), TwoForm.from_vector(second, s.dim)


def hom1_split(theta0, h: Hom1):
    """Slotwise split of ``h`` into ``g (x) T*`` and ``Im hat (x) T*`` parts."""
    firsts, seconds = [], []
    for m in h.slots():
        a, b = split_endo(theta0, m)
        firsts.append(a)
        seconds.append(b)
    return Hom1.from_slots(firsts), Hom1.from_slots(seconds)


def hom1_in(W: SubspaceBasis, h: Hom1) -> bool:
    """Whether every slot ``h_k`` of ``h`` lies in the endomorphism subspace ``W``."""
    return all(W.contains(_endo_vec(m)) for m in h.slots())

