"""The structure function chi, the invariant 2-form omega and the Nijenhuis tensor.

A 1-jet ``theta1 = (p, u, du)`` of an almost-complex structure determines the
space of vector-field 1-jets whose lift is tangent to the jet's horizontal
plane.  A horizontal subspace of it is encoded by ``h`` with slots ``h_k``
solving ``h_k u - u h_k = du_k``; brackets of its elements give ``omega_H``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .diffeo import (
    Diffeo2Jet,
    PolyDiffeo,
    VFJet1,
    diffeo_2jet,
    lift1,
    pullback_acs,
    pushforward_vfjet,
)
from .jets import (
    ACS,
    InvalidStructureError,
    Jet1,
    TensorField,
    jet1_at,
    poly_mat_mul,
    require_J1pi,
)
from .linalg import (
    DimensionError,
    SubspaceBasis,
    kernel_basis,
    mat_inv,
    mat_mul,
    mat_scale,
    mat_sub,
    solve_linear,
    span,
    vector,
)
from .polynomial import Polynomial
from .spencer import (
    Hom1,
    TwoForm,
    delta_image,
    hat_map,
    hom1_in,
    hom1_split,
    isotropy_algebra,
    spencer_delta,
    tensor_covectors,
)

__all__ = [
    "IsotropySpace",
    "HorizontalSolutions",
    "ChiClass",
    "NijTensor",
    "IntegrabilityReport",
    "isotropy_space",
    "horizontal_subspace",
    "horizontal_solutions",
    "horizontal_residual",
    "horizontal_difference",
    "bracket_1jets",
    "horizontal_lift",
    "omega_H",
    "chi",
    "omega_point",
    "omega_pipeline",
    "omega_field",
    "omega_symbolic",
    "nijenhuis_point",
    "nijenhuis",
    "nijenhuis_symbolic",
    "naturality_check",
    "chi_transport_check",
    "pushforward_horizontal",
    "omega_H_transport_check",
    "isotropy_transport_check",
    "integrability_report",
    "is_identically_zero",
]

ZERO = Fraction(0)
HALF = Fraction(1, 2)


# -- the spaces A_theta1 -------------------------------------------------


def _isotropy_system(theta1: Jet1) -> tuple:
    """Rows of ``-u^i_{j,r} X^r + X^i_r u^r_j - u^i_r X^r_j = 0`` in ``(X, dX)`` coordinates."""
    d = theta1.dim
    H = hat_map(theta1.u)
    rows = []
    for i in range(d):
        for j in range(d):
            rows.append(tuple(-theta1.du[r][i][j] for r in range(d)) + H[i * d + j])
    return tuple(rows)


@dataclass(frozen=True)
class IsotropySpace:
    theta1: Jet1
    basis: SubspaceBasis
    horizontal: Hom1

    @property
    def dim(self) -> int:
        return self.basis.dim

    def contains(self, X: VFJet1) -> bool:
        return self.basis.contains(X.vector())

    def x_projection(self) -> SubspaceBasis:
        d = self.theta1.dim
        return span([v[:d] for v in self.basis.vectors], d)

    def g_slice(self) -> SubspaceBasis:
        """Elements with ``X = 0``, as endomorphisms."""
        d = self.theta1.dim
        sub = self.basis
        # kernel of the X-projection restricted to the basis
        proj = tuple(zip(*[v[:d] for v in sub.vectors])) if sub.dim else ()
        ker = kernel_basis(proj, sub.dim) if sub.dim else SubspaceBasis.zero(0)
        return span([sub.combination(c)[d:] for c in ker.vectors], d * d)

    def elements(self) -> list:
        return [VFJet1.from_vector(self.theta1.p, v) for v in self.basis.vectors]


def isotropy_space(theta1: Jet1) -> IsotropySpace:
    require_J1pi(theta1)
    d = theta1.dim
    basis = kernel_basis(_isotropy_system(theta1), d + d * d)
    return IsotropySpace(theta1, basis, horizontal_subspace(theta1))


# -- horizontal subspaces ------------------------------------------------


def horizontal_residual(theta1: Jet1, h: Hom1) -> tuple:
    """``h_k u - u h_k - du_k`` for each slot ``k``."""
    u = theta1.u
    return tuple(
        mat_sub(mat_sub(mat_mul(hk, u), mat_mul(u, hk)), duk)
        for hk, duk in zip(h.slots(), theta1.du)
    )


def _is_horizontal(theta1: Jet1, h: Hom1) -> bool:
    if h.dim != theta1.dim:
        return False
    return all(not x for m in horizontal_residual(theta1, h) for row in m for x in row)


def horizontal_subspace(theta1: Jet1) -> Hom1:
    """The distinguished solution ``h_k = -du_k u / 2``."""
    require_J1pi(theta1)
    h = Hom1.from_slots([mat_scale(mat_mul(duk, theta1.u), -HALF) for duk in theta1.du])
    if not _is_horizontal(theta1, h):
        raise InvalidStructureError("horizontal equations are inconsistent for this jet")
    return h


@dataclass(frozen=True)
class HorizontalSolutions:
    """All solutions ``h = particular + sum_k (g-element in slot k)``."""

    theta1: Jet1
    particular: Hom1
    g: SubspaceBasis

    def with_shift(self, coeffs: Sequence[Sequence]) -> Hom1:
        """Add ``sum_a coeffs[k][a] * g_a`` to slot ``k``."""
        d = self.theta1.dim
        slots = []
        for k, hk in enumerate(self.particular.slots()):
            v = self.g.combination(coeffs[k])
            shift = tuple(tuple(v[i * d + j] for j in range(d)) for i in range(d))
            slots.append(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(hk, shift)))
        return Hom1.from_slots(slots)


def horizontal_solutions(theta1: Jet1) -> HorizontalSolutions:
    """Solve the horizontal equations slot by slot with the generic linear solver."""
    if not theta1.dim:
        raise DimensionError("empty jet")
    d = theta1.dim
    H = hat_map(theta1.u)
    slots = []
    g = None
    for duk in theta1.du:
        sol = solve_linear(H, [x for row in duk for x in row], d * d)
        if sol is None:
            raise InvalidStructureError("horizontal equations are inconsistent for this jet")
        slots.append(tuple(tuple(sol.particular[i * d + j] for j in range(d)) for i in range(d)))
        g = sol.kernel
    return HorizontalSolutions(theta1, Hom1.from_slots(slots), g)


def horizontal_difference(h1: Hom1, h2: Hom1, theta0) -> Hom1:
    """``h1 - h2``, certified to take values in the isotropy algebra of ``theta0``."""
    diff = h1 - h2
    if not hom1_in(isotropy_algebra(theta0), diff):
        raise ValueError("difference of the two solutions is not in g (x) T*")
    return diff


# -- brackets and omega_H -------------------------------------------------


def bracket_1jets(a: VFJet1, b: VFJet1) -> tuple:
    """``[X, Y]^i = X^r Y^i_r - Y^r X^i_r`` at the common base point."""
    if a.p != b.p:
        raise ValueError("jets are based at different points")
    d = len(a.X)
    return tuple(
        sum((a.X[r] * b.dX[i][r] - b.X[r] * a.dX[i][r] for r in range(d)), ZERO)
        for i in range(d)
    )


def horizontal_lift(theta1: Jet1, h: Hom1, X: Sequence) -> VFJet1:
    """The element of the horizontal subspace over the tangent vector ``X``."""
    return VFJet1(theta1.p, X, h.apply(vector(X)))


def omega_H(theta1: Jet1, h: Hom1) -> TwoForm:
    """Brackets of horizontal lifts of the coordinate vectors."""
    if not _is_horizontal(theta1, h):
        raise ValueError("h does not solve the horizontal equations for this jet")
    d = theta1.dim
    basis = [tuple(Fraction(int(i == j)) for i in range(d)) for j in range(d)]
    lifts = [horizontal_lift(theta1, h, e) for e in basis]
    arr = [[[ZERO] * d for _ in range(d)] for _ in range(d)]
    for j in range(d):
        for k in range(j + 1, d):
            br = bracket_1jets(lifts[j], lifts[k])
            for i in range(d):
                arr[i][j][k] = br[i]
                arr[i][k][j] = -br[i]
    return TwoForm(arr)


@dataclass(frozen=True)
class ChiClass:
    """A class in ``T (x) Λ²T* / δ(g (x) T*)``: representative plus denominator."""

    representative: TwoForm
    denominator: SubspaceBasis

    def contains(self, w: TwoForm) -> bool:
        return self.denominator.contains((w - self.representative).vector())

    def same_class(self, other: "ChiClass") -> bool:
        if self.denominator != other.denominator:
            return False
        return self.contains(other.representative)

    def is_zero(self) -> bool:
        return self.denominator.contains(self.representative.vector())


def _delta_g(theta0) -> SubspaceBasis:
    return delta_image(tensor_covectors(isotropy_algebra(theta0)))


def chi(theta1: Jet1, h: Hom1 | None = None) -> ChiClass:
    require_J1pi(theta1)
    if h is None:
        h = horizontal_subspace(theta1)
    return ChiClass(omega_H(theta1, h), _delta_g(theta1.u))


# -- omega ----------------------------------------------------------------


def omega_point(theta1: Jet1) -> TwoForm:
    """``w^i_{jk} = (u^i_{r,j} u^r_k - u^i_{r,k} u^r_j) / 2``."""
    require_J1pi(theta1)
    d = theta1.dim
    P = [mat_mul(theta1.du[j], theta1.u) for j in range(d)]
    arr = [[[HALF * (P[j][i][k] - P[k][i][j]) for k in range(d)] for j in range(d)]
           for i in range(d)]
    return TwoForm(arr)


def omega_pipeline(theta1: Jet1, h: Hom1 | None = None) -> TwoForm:
    """omega by the three-step route: horizontal solution, endomorphism split, alternation."""
    require_J1pi(theta1)
    if h is None:
        h = horizontal_solutions(theta1).particular
    elif not _is_horizontal(theta1, h):
        raise ValueError("h does not solve the horizontal equations for this jet")
    _, h_im = hom1_split(theta1.u, h)
    return spencer_delta(h_im)


def _field_jet(S: TensorField, p: Sequence) -> Jet1:
    S = ACS.from_field(S)
    return jet1_at(S, p)


def omega_field(S: TensorField, p: Sequence) -> TwoForm:
    return omega_point(_field_jet(S, p))


def _symbolic_array(S: TensorField, build) -> tuple:
    S = ACS.from_field(S)
    return build(S)


def omega_symbolic(S: TensorField) -> tuple:
    """Polynomial coefficients ``w^i_{jk}(x)`` of omega along the section."""

    def build(S):
        d = S.dim
        P = [poly_mat_mul(S.partial(j), S.S) for j in range(d)]
        return tuple(
            tuple(tuple((P[j][i][k] - P[k][i][j]).scale(HALF) for k in range(d)) for j in range(d))
            for i in range(d)
        )

    return _symbolic_array(S, build)


# -- Nijenhuis tensor ----------------------------------------------------


class NijTensor(TwoForm):
    """Coefficients ``N^i_{jk}``, antisymmetric in ``j, k``."""


def nijenhuis_point(theta1: Jet1) -> NijTensor:
    """``2(S^i_{k,r}S^r_j - S^i_{j,r}S^r_k - S^r_{k,j}S^i_r + S^r_{j,k}S^i_r)`` from jet data."""
    require_J1pi(theta1)
    d = theta1.dim
    u, du = theta1.u, theta1.du
    # A[i][k][j] = sum_r du[r][i][k] u[r][j]
    A = [[[sum((du[r][i][k] * u[r][j] for r in range(d)), ZERO) for j in range(d)]
          for k in range(d)] for i in range(d)]
    Q = [mat_mul(u, du[j]) for j in range(d)]
    arr = [[[2 * (A[i][k][j] - A[i][j][k] - Q[j][i][k] + Q[k][i][j]) for k in range(d)]
            for j in range(d)] for i in range(d)]
    return NijTensor(arr)


def nijenhuis(S: TensorField, p: Sequence) -> NijTensor:
    return nijenhuis_point(_field_jet(S, p))


def nijenhuis_symbolic(S: TensorField) -> tuple:
    def build(S):
        d = S.dim
        nv = d
        dS = [S.partial(r) for r in range(d)]
        A = [[[sum((dS[r][i][k] * S.S[r][j] for r in range(d)), Polynomial.zero(nv))
               for j in range(d)] for k in range(d)] for i in range(d)]
        Q = [poly_mat_mul(S.S, dS[j]) for j in range(d)]
        return tuple(
            tuple(
                tuple((A[i][k][j] - A[i][j][k] - Q[j][i][k] + Q[k][i][j]).scale(2) for k in range(d))
                for j in range(d)
            )
            for i in range(d)
        )

    return _symbolic_array(S, build)


def is_identically_zero(arr) -> bool:
    return all(p.is_zero() for plane in arr for row in plane for p in row)


def evaluate_array(arr, p: Sequence) -> tuple:
    return tuple(tuple(tuple(e.evaluate(p) for e in row) for row in plane) for plane in arr)


# -- naturality ------------------------------------------------------------


def naturality_check(S: TensorField, f: PolyDiffeo, p: Sequence) -> bool:
    """Whether omega of the transformed field at ``f(p)`` is the push-forward of omega at ``p``."""
    j2 = diffeo_2jet(f, p)
    lhs = omega_field(pullback_acs(f, ACS.from_field(S)), j2.q)
    rhs = omega_field(S, p).transport(j2.F)
    return lhs == rhs


def chi_transport_check(theta1: Jet1, j2f: Diffeo2Jet) -> bool:
    """Whether the push-forward of chi at ``theta1`` is chi at the lifted jet."""
    image = lift1(j2f, theta1)
    moved = chi(theta1).representative.transport(j2f.F)
    return chi(image).contains(moved)


def pushforward_horizontal(theta1: Jet1, h: Hom1, j2f: Diffeo2Jet) -> Hom1:
    """The horizontal subspace ``j^2f(H)`` at the lifted jet, in slot form."""
    d = theta1.dim
    G = mat_inv(j2f.F)
    lifts = []
    for a in range(d):
        e = tuple(Fraction(int(t == a)) for t in range(d))
        lifts.append(pushforward_vfjet(j2f, horizontal_lift(theta1, h, e)))
    # the image of H over F e_a is lifts[a]; over e_k it is sum_a G[a][k] lifts[a]
    slots = [
        tuple(
            tuple(sum((G[a][k] * lifts[a].dX[r][c] for a in range(d) if G[a][k]), ZERO) for c in range(d))
            for r in range(d)
        )
        for k in range(d)
    ]
    return Hom1.from_slots(slots)


def omega_H_transport_check(theta1: Jet1, j2f: Diffeo2Jet, h: Hom1 | None = None) -> bool:
    """Whether ``f_* omega_H = omega_{j^2f(H)}`` with the transformed horizontal subspace."""
    if h is None:
        h = horizontal_subspace(theta1)
    image = lift1(j2f, theta1)
    moved_h = pushforward_horizontal(theta1, h, j2f)
    if not _is_horizontal(image, moved_h):
        return False
    return omega_H(image, moved_h) == omega_H(theta1, h).transport(j2f.F)


def isotropy_transport_check(theta1: Jet1, j2f: Diffeo2Jet) -> bool:
    """Whether ``j^2f`` maps the space ``A`` at ``theta1`` onto ``A`` at the lifted jet."""
    source = isotropy_space(theta1)
    target = isotropy_space(lift1(j2f, theta1))
    pushed = [pushforward_vfjet(j2f, X).vector() for X in source.elements()]
    return span(pushed, target.basis.ambient) == target.basis


# -- integrability report -----------------------------------------------


@dataclass
class PointValues:
    p: tuple
    omega: TwoForm
    nijenhuis: NijTensor
    chi_zero: bool

    def to_json(self) -> dict:
        return {
            "p": [str(x) for x in self.p],
            "omega": self.omega.components(),
            "nijenhuis": self.nijenhuis.components(),
            "chi_zero": self.chi_zero,
        }


@dataclass
class IntegrabilityReport:
    omega_identically_zero: bool
    nijenhuis_identically_zero: bool
    points: list = field(default_factory=list)

    @property
    def pointwise_ok(self) -> bool:
        """At each sampled point, omega(p) = 0 forces N(p) = 0."""
        return all(pt.nijenhuis.is_zero() for pt in self.points if pt.omega.is_zero())

    @property
    def consistent(self) -> bool:
        return self.omega_identically_zero == self.nijenhuis_identically_zero and self.pointwise_ok

    def witness(self):
        """First sampled point where both omega and N are nonzero."""
        for pt in self.points:
            if not pt.omega.is_zero() and not pt.nijenhuis.is_zero():
                return pt
        return None

    def to_json(self) -> dict:
        return {
            "omega_identically_zero": self.omega_identically_zero,
            "nijenhuis_identically_zero": self.nijenhuis_identically_zero,
            "consistent": self.consistent,
            "points": [pt.to_json() for pt in self.points],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)


def integrability_report(S: TensorField, points: Sequence[Sequence]) -> IntegrabilityReport:
    S = ACS.from_field(S)
    report = IntegrabilityReport(
        omega_identically_zero=is_identically_zero(omega_symbolic(S)),
        nijenhuis_identically_zero=is_identically_zero(nijenhuis_symbolic(S)),
    )
    for p in points:
        j = jet1_at(S, p)
        report.points.append(PointValues(j.p, omega_point(j), nijenhuis_point(j), chi(j).is_zero()))
    return report
