import random
from fractions import Fraction

import pytest

from almostcomplex import corpus
from almostcomplex.diffeo import PolyDiffeo, VFJet1, diffeo_2jet, lift1, pullback_acs, pushforward_vfjet
from almostcomplex.invariants import (
    bracket_1jets,
    chi,
    chi_transport_check,
    evaluate_array,
    horizontal_difference,
    horizontal_lift,
    horizontal_solutions,
    horizontal_subspace,
    integrability_report,
    is_identically_zero,
    isotropy_space,
    isotropy_transport_check,
    naturality_check,
    nijenhuis,
    nijenhuis_point,
    nijenhuis_symbolic,
    omega_field,
    omega_H,
    omega_H_transport_check,
    pushforward_horizontal,
    omega_pipeline,
    omega_point,
    omega_symbolic,
)
from almostcomplex.jets import InvalidStructureError, Jet1, jet1_at, standard_complex_matrix, standard_structure
from almostcomplex.linalg import identity, kernel_basis, mat_inv, mat_scale, span, transpose, zeros
from almostcomplex.polynomial import Polynomial
from almostcomplex.spencer import (
    Hom1,
    TwoForm,
    anticommutant,
    build_splitting,
    delta_image,
    isotropy_algebra,
    project_two_form,
    spencer_delta,
    symmetric_hom1,
    tensor_covectors,
)
from almostcomplex.invariants import _isotropy_system
from oracles import bareiss_rank, matmul, nijenhuis_by_brackets, poly_bracket

# ratio of the coordinate Nijenhuis formula to the bracket definition, frozen after the first run
NIJENHUIS_C = 2


def zero_jet(n):
    d = 2 * n
    return Jet1((0,) * d, standard_complex_matrix(n), (zeros(d, d),) * d)


def test_isotropy_space_dimension():
    rng = random.Random(1)
    for n in (1, 2):
        jets = [zero_jet(n)] + [corpus.random_J1pi_jet(n, rng) for _ in range(4)]
        for j in jets:
            A = isotropy_space(j)
            d = 2 * n
            assert A.dim == 2 * n * n + 2 * n
            assert A.x_projection().dim == d
            assert A.g_slice() == isotropy_algebra(j.u)
            # oracle: nullity of the defining system via Bareiss rank
            assert d + d * d - bareiss_rank(_isotropy_system(j)) == A.dim


def test_isotropy_space_constant_jet():
    A = isotropy_space(zero_jet(1))
    for v in A.basis.vectors:
        X = VFJet1.from_vector((0, 0), v)
        if any(X.X):
            continue
        J = standard_complex_matrix(1)
        assert matmul(X.dX, J) == matmul(J, X.dX)


def test_isotropy_transport():
    rng = random.Random(2)
    for n in (1, 2):
        for _ in range(3):
            j = corpus.random_J1pi_jet(n, rng)
            f = corpus.random_shear(n, 2, rng)
            assert isotropy_transport_check(j, diffeo_2jet(f, j.p))


def test_horizontal_solutions():
    rng = random.Random(3)
    assert horizontal_subspace(zero_jet(2)).is_zero()
    for n in (1, 2):
        for _ in range(4):
            j = corpus.random_J1pi_jet(n, rng)
            h = horizontal_subspace(j)
            sols = horizontal_solutions(j)
            # the closed-form candidate h_k = -du_k u / 2 satisfies the equations
            for hk, duk in zip(h.slots(), j.du):
                assert hk == mat_scale(tuple(map(tuple, matmul(duk, j.u))), Fraction(-1, 2))
                lhs = matmul(hk, j.u)
                rhs = matmul(j.u, hk)
                assert all(lhs[a][b] - rhs[a][b] == duk[a][b] for a in range(2 * n) for b in range(2 * n))
            diff = horizontal_difference(sols.particular, h, j.u)
            assert tensor_covectors(isotropy_algebra(j.u)).contains(diff.vector())
            assert sols.g == isotropy_algebra(j.u)


def test_horizontal_difference_examples():
    rng = random.Random(4)
    j = corpus.random_J1pi_jet(2, rng)
    h = horizontal_subspace(j)
    assert horizontal_difference(h, h, j.u).is_zero()
    g = isotropy_algebra(j.u)
    sols = horizontal_solutions(j)
    coeffs = [[0] * g.dim for _ in range(4)]
    coeffs[2][1] = 1
    shifted = sols.with_shift(coeffs)
    back = horizontal_difference(shifted, sols.particular, j.u)
    e = g.vectors[1]
    assert back.slot(2) == tuple(tuple(e[a * 4 + b] for b in range(4)) for a in range(4))
    assert not any(x for k in (0, 1, 3) for r in back.slot(k) for x in r)
    with pytest.raises(ValueError):
        horizontal_difference(h, Hom1.zero(4), j.u)


def test_horizontal_rejects_bad_jet():
    J = standard_complex_matrix(1)
    with pytest.raises(InvalidStructureError):
        horizontal_subspace(Jet1((0, 0), J, (identity(2), zeros(2, 2))))


def test_bracket_examples():
    p = (1, 2)
    a = VFJet1(p, (1, 3), ((1, 2), (0, 4)))
    assert bracket_1jets(a, a) == (0, 0)
    c1, c2 = VFJet1(p, (1, 0), zeros(2, 2)), VFJet1(p, (0, 5), zeros(2, 2))
    assert bracket_1jets(c1, c2) == (0, 0)
    xs = Polynomial.variables(2)
    X = [xs[0] * xs[1], xs[1] ** 2 - xs[0]]
    Y = [xs[0] ** 2, xs[0] + 3 * xs[1]]
    br = poly_bracket(X, Y)
    assert bracket_1jets(VFJet1.from_field(X, p), VFJet1.from_field(Y, p)) == tuple(b.evaluate(p) for b in br)
    with pytest.raises(ValueError):
        bracket_1jets(VFJet1((0, 0), (1, 0), zeros(2, 2)), c1)


def test_omega_H_examples():
    rng = random.Random(5)
    assert omega_H(zero_jet(1), Hom1.zero(2)).is_zero()
    for n in (1, 2):
        for _ in range(4):
            j = corpus.random_J1pi_jet(n, rng)
            h = horizontal_solutions(j).particular
            w = omega_H(j, h)
            assert w == spencer_delta(h)
            d = 2 * n
            for a in range(d):
                for b in range(d):
                    X = [Fraction(int(t == a)) for t in range(d)]
                    Y = [Fraction(int(t == b)) for t in range(d)]
                    br = bracket_1jets(horizontal_lift(j, h, X), horizontal_lift(j, h, Y))
                    assert w.evaluate(X, Y) == br
    # symmetric part of h drops out: shifting by a symmetric g-valued map keeps omega_H
    j = zero_jet(1)
    sym = symmetric_hom1(2)
    h = Hom1.from_vector(sym.vectors[0], 2)
    assert spencer_delta(h).is_zero()
    with pytest.raises(ValueError):
        omega_H(corpus.random_J1pi_jet(1, rng), Hom1.zero(2))


def test_chi_well_defined():
    rng = random.Random(6)
    assert chi(zero_jet(2)).is_zero()
    for n in (1, 2):
        for _ in range(4):
            j = corpus.random_J1pi_jet(n, rng)
            sols = horizontal_solutions(j)
            g = sols.g
            d = 2 * n
            shift = [[rng.randint(-2, 2) for _ in range(g.dim)] for _ in range(d)]
            h2 = sols.with_shift(shift)
            c1, c2 = chi(j, sols.particular), chi(j, h2)
            assert c1.same_class(c2)
            diff = (c1.representative - c2.representative).vector()
            dg = delta_image(tensor_covectors(isotropy_algebra(j.u)))
            assert dg.contains(diff)
            if n == 1:
                assert c1.is_zero()


def test_chi_nonzero_somewhere_in_dimension_four():
    rng = random.Random(7)
    assert any(not chi(corpus.random_J1pi_jet(2, rng)).is_zero() for _ in range(5))


def test_chi_transport():
    rng = random.Random(8)
    for n in (1, 2):
        for _ in range(3):
            j = corpus.random_J1pi_jet(n, rng)
            f = corpus.random_shear(n, 2, rng)
            assert chi_transport_check(j, diffeo_2jet(f, j.p))


def test_omega_H_transport():
    rng = random.Random(9)
    for _ in range(4):
        j = corpus.random_J1pi_jet(2, rng)
        j2 = diffeo_2jet(corpus.random_shear(2, 2, rng), j.p)
        image = lift1(j2, j)
        h = horizontal_subspace(j)
        moved = omega_H(j, h).transport(j2.F)
        # the image of H is horizontal for the lifted jet and its omega_H is the transported form
        d = 4
        lifts = [pushforward_vfjet(j2, horizontal_lift(j, h, [Fraction(int(t == a)) for t in range(d)]))
                 for a in range(d)]
        assert all(isotropy_space(image).contains(L) for L in lifts)
        G = mat_inv(j2.F)
        slots = []
        for k in range(d):
            # h~ slot k = sum_a G[a][k] * dY_a where Y_a = pushforward of the lift of e_a
            slots.append(tuple(tuple(sum((G[a][k] * lifts[a].dX[r][c] for a in range(d)), Fraction(0))
                                     for c in range(d)) for r in range(d)))
        h_img = Hom1.from_slots(slots)
        assert omega_H(image, h_img) == moved
        assert pushforward_horizontal(j, h, j2) == h_img
        assert omega_H_transport_check(j, j2)
        sols = horizontal_solutions(j)
        other = sols.with_shift([[1] * sols.g.dim for _ in range(4)])
        assert omega_H_transport_check(j, j2, other)


def test_omega_closed_form_matches_pipeline():
    rng = random.Random(10)
    assert omega_point(zero_jet(2)).is_zero()
    for n in (1, 2, 3):
        for _ in range(3 if n < 3 else 1):
            j = corpus.random_J1pi_jet(n, rng)
            w = omega_point(j)
            assert w == omega_pipeline(j)
            assert w == omega_pipeline(j, horizontal_subspace(j))
            assert delta_image(tensor_covectors(anticommutant(j.u))).contains(w.vector())
            assert chi(j).contains(w)


def test_omega_pipeline_independent_of_h():
    rng = random.Random(11)
    j = corpus.random_J1pi_jet(2, rng)
    sols = horizontal_solutions(j)
    h2 = sols.with_shift([[rng.randint(-2, 2) for _ in range(sols.g.dim)] for _ in range(4)])
    assert omega_pipeline(j, h2) == omega_pipeline(j)


def test_project_two_form_of_omega_H():
    rng = random.Random(12)
    j = corpus.random_J1pi_jet(2, rng)
    s = build_splitting(j.u)
    a, b = project_two_form(s, omega_H(j, horizontal_subspace(j)))
    assert a + b == omega_H(j, horizontal_subspace(j))
    assert s.delta_im.contains(b.vector())


def test_omega_field_examples():
    J = standard_structure(2)
    assert omega_field(J, (1, 2, 3, 4)).is_zero()
    assert is_identically_zero(omega_symbolic(J))
    S, _ = corpus.generate("gauge", 2, 2, 0)
    sym = omega_symbolic(S)
    assert not is_identically_zero(sym)
    p = (Fraction(1), Fraction(-1, 2), Fraction(2), Fraction(1, 3))
    assert TwoForm(evaluate_array(sym, p)) == omega_field(S, p)
    assert omega_field(S, p) == omega_point(jet1_at(S, p))


def test_omega_of_a_planar_shear_pullback():
    # S = f_* J0 for f = (x1, x2 + x1^2); computed by hand: S = [[2x1, -1], [4x1^2 + 1, -2x1]]
    f = PolyDiffeo.from_strings(1, ["x1", "x2 + x1^2"], ["x1", "x2 - x1^2"])
    S = pullback_acs(f, standard_structure(1))
    sym = omega_symbolic(S)
    assert str(sym[0][0][1]) == "-1"
    assert str(sym[1][0][1]) == "-2*x1"
    assert is_identically_zero(nijenhuis_symbolic(S))


def test_nijenhuis_examples():
    J = standard_structure(2)
    assert nijenhuis(J, (0, 1, 2, 3)).is_zero()
    rng = random.Random(13)
    for _ in range(3):
        S, _ = corpus.generate("pullback", 2, 3, rng.randint(0, 10 ** 6))
        assert is_identically_zero(nijenhuis_symbolic(S))


@pytest.mark.parametrize("n", [1, 2])
def test_nijenhuis_constant(n):
    rng = random.Random(20 + n)
    for _ in range(3):
        S = corpus.gauge_structure(n, 2, rng)
        ours = nijenhuis_symbolic(S)
        ref = nijenhuis_by_brackets(S.S)
        d = 2 * n
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    assert ours[i][j][k] == ref[i][j][k].scale(NIJENHUIS_C)
        p = corpus.random_point(d, rng)
        assert nijenhuis(S, p).w == TwoForm(evaluate_array(ours, p)).w
        assert nijenhuis_point(jet1_at(S, p)) == nijenhuis(S, p)


def test_kernel_of_omega_inside_kernel_of_N():
    # as linear maps of du (with u fixed), every jet with omega = 0 also has N = 0
    for n in (1, 2):
        d = 2 * n
        u = standard_complex_matrix(n)
        # parametrise du_k = (M_k + u M_k u) / 2 by the entries of the M_k
        rows_w, rows_n = [], []
        basis = []
        for k in range(d):
            for a in range(d):
                for b in range(d):
                    M = [[Fraction(int((r, c) == (a, b))) for c in range(d)] for r in range(d)]
                    uMu = matmul(matmul(u, M), u)
                    du = [zeros(d, d)] * d
                    du[k] = tuple(tuple((M[r][c] + uMu[r][c]) / 2 for c in range(d)) for r in range(d))
                    basis.append(Jet1((0,) * d, u, tuple(du)))
        rows_w = [omega_point(j).vector() for j in basis]
        rows_n = [nijenhuis_point(j).vector() for j in basis]
        ker = kernel_basis(transpose(rows_w), len(basis))
        for v in ker.vectors:
            combo = [sum((c * rows_n[m][t] for m, c in enumerate(v)), Fraction(0)) for t in range(len(rows_n[0]))]
            assert not any(combo)


def _basis_jets(n):
    # du_k = (M + u M u) / 2 over the matrix units M, one slot at a time
    d = 2 * n
    u = standard_complex_matrix(n)
    jets = []
    for k in range(d):
        for a in range(d):
            for b in range(d):
                M = [[Fraction(int((r, c) == (a, b))) for c in range(d)] for r in range(d)]
                uMu = matmul(matmul(u, M), u)
                du = [zeros(d, d)] * d
                du[k] = tuple(tuple((M[r][c] + uMu[r][c]) / 2 for c in range(d)) for r in range(d))
                jets.append(Jet1((0,) * d, u, tuple(du)))
    return jets


@pytest.mark.parametrize("n", [1, 2])
def test_chi_vanishes_exactly_where_N_does(n):
    jets = _basis_jets(n)
    dg = delta_image(tensor_covectors(isotropy_algebra(jets[0].u)))
    W = [omega_point(j).vector() for j in jets]
    cols = W + list(dg.vectors)
    ker = kernel_basis(transpose(cols), len(cols))
    chi_kernel = span([v[: len(W)] for v in ker.vectors], len(W))
    N_kernel = kernel_basis(transpose([nijenhuis_point(j).vector() for j in jets]), len(jets))
    assert chi_kernel == N_kernel
    for kind in ("pullback", "gauge"):
        S, _ = corpus.generate(kind, n, 2, 3)
        j = jet1_at(S, corpus.random_point(2 * n, random.Random(n)))
        assert chi(j).is_zero() == nijenhuis_point(j).is_zero()


def test_naturality_examples():
    rng = random.Random(14)
    J = standard_structure(2)
    assert naturality_check(J, PolyDiffeo.identity(2), (1, 0, 2, -1))
    S, _ = corpus.generate("gauge", 2, 1, 3)
    assert naturality_check(S, PolyDiffeo.identity(2), (1, 2, 0, 1))
    # linear maps preserve the closed form
    f = corpus._linear_diffeo(corpus.random_sparse_unimodular(4, rng))
    assert naturality_check(S, f, (1, 0, 0, 2))


def test_naturality_fails_for_quadratic_shear():
    # omega of f_* J0 is nonzero at every point while omega of J0 vanishes
    f = PolyDiffeo.from_strings(1, ["x1", "x2 + x1^2"], ["x1", "x2 - x1^2"])
    assert naturality_check(standard_structure(1), f, (0, 0)) is False


def test_integrability_report():
    J = standard_structure(2)
    r = integrability_report(J, [(0, 0, 0, 0), (1, 2, 3, 4)])
    assert r.omega_identically_zero and r.nijenhuis_identically_zero and r.consistent
    S, _ = corpus.generate("gauge", 2, 2, 1)
    rng = random.Random(0)
    r = integrability_report(S, [corpus.random_point(4, rng) for _ in range(5)])
    assert not r.omega_identically_zero and not r.nijenhuis_identically_zero
    assert r.consistent and r.witness() is not None
    data = r.to_json()
    assert set(data) == {"omega_identically_zero", "nijenhuis_identically_zero", "consistent", "points"}
