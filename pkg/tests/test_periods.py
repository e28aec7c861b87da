import random

import mpmath
import numpy as np
import pytest
from mpmath import mp

from jacsquare.errors import ConsistencyError, SingularInputError
from jacsquare.periods import (
    analytic_continue,
    discriminant_points,
    fiber_roots,
    make_curve,
    monodromy,
    period_matrix,
    symplectic_basis,
    tau_of,
)
from jacsquare.periods.curve import AffineCurve, choose_transform
from jacsquare.periods.homology import (
    compose,
    cycle_count,
    inverse,
    is_transitive,
    mat_congruence,
    riemann_hurwitz_genus,
    standard_J,
)
from jacsquare.periods.quadrature import gauss_legendre, plan
from jacsquare.periods.report import format_period_report, parse_omega1, parse_period_report
from jacsquare.quartic import fermat_quartic, form_from_terms, klein_quartic

from _corpus import random_fixture


@pytest.fixture(scope="module")
def fermat_pd():
    return period_matrix(make_curve(fermat_quartic()), 30)


def test_fermat_branch_points():
    curve = make_curve(fermat_quartic(), transform=((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert len(curve.branch_polynomial) - 1 == 12
    pts = discriminant_points(curve, 40)
    assert len(pts) == 4
    with mp.workdps(50):
        for x in pts:
            assert abs(x**4 + 1) < mpmath.mpf(10) ** -38


def test_fermat_fiber_at_zero():
    curve = AffineCurve(fermat_quartic())
    ys = fiber_roots(curve, 0, 40)
    with mp.workdps(50):
        for y in ys:
            assert abs(y**4 + 1) < mpmath.mpf(10) ** -38
        assert min(abs(a - b) for i, a in enumerate(ys) for b in ys[i + 1:]) > 1


def test_fiber_roots_residual_and_doubling():
    curve = make_curve(fermat_quartic())
    r30 = fiber_roots(curve, mpmath.mpc("0.25", "0.125"), 30)
    r60 = fiber_roots(curve, mpmath.mpc("0.25", "0.125"), 60)
    with mp.workdps(70):
        for y in r60:
            assert abs(curve.f(mpmath.mpc("0.25", "0.125"), y)) < mpmath.mpf(10) ** -58
        for a, b in zip(r30, r60):
            assert abs(a - b) < mpmath.mpf(10) ** -29


def test_y_discriminant_degree_and_klein_transform():
    klein = klein_quartic()
    T = choose_transform(klein)
    curve = make_curve(klein)
    assert curve.transform == T
    assert curve.is_admissible()
    assert len(curve.branch_squarefree) - 1 == 12
    # y^3 z + ... : the identity model of Klein has y-degree 3, so a change of coordinates is needed
    assert not AffineCurve(klein).is_admissible()


def test_singular_input_rejected():
    with pytest.raises(SingularInputError):
        make_curve(form_from_terms(4, [((4, 0, 0), 1), ((0, 4, 0), 1)]))


def test_constant_and_reverse_paths():
    curve = make_curve(fermat_quartic())
    x0 = mpmath.mpc("0.1", "0.05")
    start = fiber_roots(curve, x0, 30)
    end, perm = analytic_continue(curve, [x0, x0], start, 30)
    assert perm == (0, 1, 2, 3)
    path = [x0, mpmath.mpc("0.6", "0.3"), mpmath.mpc("-0.2", "0.5")]
    mid, perm = analytic_continue(curve, path, start, 30)
    assert perm is None
    back, _ = analytic_continue(curve, path[::-1], mid, 30)
    with mp.workdps(40):
        for a, b in zip(start, back):
            assert abs(a - b) < mpmath.mpf(10) ** -28


def test_puiseux_four_cycle():
    # y^4 = x: one turn around x = 0 permutes the sheets cyclically
    curve = AffineCurve(form_from_terms(4, [((0, 4, 0), 1), ((1, 0, 3), -1)]))
    x0 = mpmath.mpf(1)
    start = fiber_roots(curve, x0, 20)
    circle = [mpmath.expjpi(mpmath.mpf(2 * k) / 12) for k in range(13)]
    circle[-1] = circle[0]
    _, perm = analytic_continue(curve, circle, start, 20)
    assert cycle_count(perm) == 1


def test_permutation_helpers():
    a, b = (1, 0, 2, 3), (0, 2, 1, 3)
    assert compose(a, inverse(a)) == (0, 1, 2, 3)
    assert compose(a, b) == tuple(a[b[i]] for i in range(4))
    assert is_transitive([a, b, (0, 1, 3, 2)], 4)
    assert not is_transitive([a, (0, 1, 3, 2)], 4)
    # twelve transpositions on 4 sheets, unramified infinity: 2g - 2 = -8 + 12
    assert riemann_hurwitz_genus([a] * 12, (0, 1, 2, 3), 4) == 3


def test_symplectic_basis_random_conjugate():
    rng = random.Random(3)
    J = standard_J(3)
    for _ in range(5):
        P = [[int(i == j) for j in range(6)] for i in range(6)]
        for _ in range(12):
            i, j = rng.sample(range(6), 2)
            q = rng.randint(-2, 2)
            for r in range(6):
                P[r][i] += q * P[r][j]
        M = mat_congruence(P, J)
        for rev in (False, True):
            U = symplectic_basis(M, reverse=rev)
            assert mat_congruence(U, M) == J
    with pytest.raises(ValueError):
        symplectic_basis([[0, 2], [-2, 0]])


def test_gauss_legendre_and_plan():
    nodes, weights = gauss_legendre(20, 40)
    with mp.workdps(40):
        assert abs(sum(weights) - 2) < mpmath.mpf(10) ** -35
        assert abs(sum(w * x**10 for x, w in zip(nodes, weights)) - mpmath.mpf(2) / 11) < mpmath.mpf(10) ** -35
    pieces = plan(0j, 1 + 0j, [0.5 + 0.01j], 30)
    assert pieces[0][0] == 0 and pieces[-1][1] == 1
    assert all(a[1] == b[0] for a, b in zip(pieces, pieces[1:]))
    assert len(pieces) > 2


def test_fermat_monodromy(fermat_pd):
    m = fermat_pd.monodromy
    assert m.sphere_relation_holds()
    assert is_transitive(m.permutations, 4)
    assert m.genus == 3
    assert len(m.permutations) == len(m.discriminant_points) == 4
    # Y^4 = -1 - x^4 is totally ramified over each root of x^4 = -1
    assert all(cycle_count(p) == 1 for p in m.permutations)


def test_fermat_riemann_relations(fermat_pd):
    with mp.workdps(40):
        assert fermat_pd.symmetry_error < 1e-20
        assert fermat_pd.tau.det_imag() > 0
    assert fermat_pd.homology.intersection == standard_J(3)


def test_tau_of_rejects_asymmetric(fermat_pd):
    O1 = [[v.value for v in r] for r in fermat_pd.Omega1]
    O2 = [[v.value for v in r] for r in fermat_pd.Omega2]
    O2[0][1] += mpmath.mpf("1e-5")
    with pytest.raises(ConsistencyError):
        tau_of(O1, O2, 30)


def test_period_report_round_trip(fermat_pd):
    text = format_period_report(fermat_pd)
    parsed = parse_period_report(text)
    assert parsed["precision"] == 30
    O1 = parse_omega1(text)
    with mp.workdps(40):
        for r, s in zip(O1, fermat_pd.Omega1):
            for a, b in zip(r, s):
                assert abs(a.value - b.value) < mpmath.mpf(10) ** -28
    with pytest.raises(ValueError):
        parse_omega1("(1,0)@10 (0,0)@10\n")


def test_random_fixture_monodromy():
    curve = make_curve(random_fixture())
    m = monodromy(curve, 20)
    assert m.sphere_relation_holds()
    assert m.genus == 3
    assert len(m.discriminant_points) == 12
