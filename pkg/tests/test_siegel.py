import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from jacsquare.errors import PrecisionError
from jacsquare.lattice import lll_gram
from jacsquare.siegel import (
    InvalidTauError,
    SiegelPoint,
    SymplecticMatrix,
    act,
    cocycle,
    format_symplectic,
    format_tau,
    parse_symplectic,
    parse_tau,
    random_reduced_tau,
    random_symplectic,
    reduce,
    scalar_tau,
)


def _close(a, b, p):
    return all(abs(a.tau[i][j] - b.tau[i][j]) < mpmath.mpf(10) ** -p for i in range(3) for j in range(3))


def test_lll_unimodular_and_reducing():
    G = [[1, 0.9, 0.8], [0.9, 1, 0.85], [0.8, 0.85, 1]]
    U = lll_gram(G)
    with mp.workdps(30):
        assert abs(mpmath.det(mpmath.matrix(U))) == 1
        Gm = mpmath.matrix(G)
        R = mpmath.matrix(U).T * Gm * mpmath.matrix(U)
        assert R[0, 0] <= Gm[0, 0]


def test_siegel_point_rejects_indefinite():
    with pytest.raises(InvalidTauError):
        SiegelPoint.from_matrix([[1j, 0, 0], [0, -1j, 0], [0, 0, 1j]], 30)


def test_symplectic_validation():
    with pytest.raises(ValueError):
        SymplecticMatrix.from_grid([[2 if i == j else 0 for j in range(6)] for i in range(6)])
    J = SymplecticMatrix.J()
    assert (J @ J @ J @ J).is_identity()
    assert (J @ J.inverse()).is_identity()


def test_J_on_iI_cocycle_sign():
    """J = [[0, I], [-I, 0]] maps iI to iI with det(C tau + D) = det(-iI) = i; J^-1 gives -i."""
    tau = scalar_tau(1j, 40)
    t2, c = act(SymplecticMatrix.J(), tau)
    assert _close(t2, tau, 35)
    with mp.workdps(50):
        assert abs(c.value - 1j) < mpmath.mpf(10) ** -35
        _, ci = act(SymplecticMatrix.J().inverse(), tau)
        assert abs(ci.value + 1j) < mpmath.mpf(10) ** -35


def test_act_singular_raises():
    g = SymplecticMatrix.from_grid([[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0],
                                    [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]])
    assert act(g, scalar_tau(1j, 20))[1].value == 1
    shift = SymplecticMatrix.shift([[0, 0, 0], [0, 0, 0], [0, 0, 0]])
    assert shift.is_identity()
    # tau with a real part making C tau + D singular for the quasi-inversion
    tau = SiegelPoint.from_matrix([[1e-30j, 0, 0], [0, 1j, 0], [0, 0, 1j]], 30)
    with pytest.raises(PrecisionError):
        act(SymplecticMatrix.quasi_inversion(0), tau)


def test_text_round_trips():
    tau = random_reduced_tau(3, 40)
    t2 = parse_tau(format_tau(tau))
    assert _close(t2, tau, 38)
    g = random_symplectic(5, 11)
    assert parse_symplectic(format_symplectic(g)).grid() == g.grid()


def test_reduce_identity_cases():
    assert reduce(scalar_tau(1j, 40)).gamma.is_identity()
    tau = SiegelPoint.from_matrix([[2 + 1j, 0, 0], [0, 1j, 0], [0, 0, 1j]], 40)
    red = reduce(tau)
    assert red.gamma.grid() == SymplecticMatrix.shift([[-2, 0, 0], [0, 0, 0], [0, 0, 0]]).grid()


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_reduce_round_trip(seed, length):
    tau = random_reduced_tau(seed % 50, 50)
    g = random_symplectic(length, seed)
    moved, _ = act(g, tau)
    red = reduce(moved)
    # the reduced point is again reduced, with the same det Im up to rounding
    again = reduce(red.tau_reduced)
    assert again.gamma.is_identity() or abs(again.tau_reduced.det_imag() - red.tau_reduced.det_imag()) < 1e-30
    with mp.workdps(60):
        assert red.tau_reduced.det_imag() >= moved.det_imag() * (1 - mpmath.mpf(10) ** -30)
        # the returned gamma maps the input to the returned point
        check, c = act(red.gamma, moved)
        assert _close(check, red.tau_reduced, 40)
        assert abs(c.value - cocycle(red.gamma, moved).value) < mpmath.mpf(10) ** -40


def test_reduced_point_has_large_diagonal():
    red = reduce(SiegelPoint.from_matrix([[0.1 + 0.05j, 0, 0], [0, 0.2 + 0.1j, 0], [0, 0, 1j]], 40))
    with mp.workdps(30):
        for k in range(3):
            assert abs(red.tau_reduced.tau[k][k]) >= 1 - 1e-9
