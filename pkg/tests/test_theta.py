import itertools
import math

import mpmath
import pytest
from mpmath import mp

from jacsquare.siegel import SiegelPoint, act, random_reduced_tau, random_symplectic, scalar_tau
from jacsquare.theta import (
    ThetaCharacteristic,
    all_characteristics,
    chi18_an,
    chi18_paper_literal,
    convention_factor,
    ellipsoid_radius_sq,
    enumerate_even_characteristics,
    theta_constant,
    theta_constant_1d,
    theta_nulls,
    truncation_radius,
    zero_threshold,
)


def test_characteristic_counts():
    chars = all_characteristics()
    assert len(chars) == 64 and len(set(chars)) == 64
    assert len(enumerate_even_characteristics()) == 36
    assert sum(1 for c in chars if not c.is_even) == 28
    with pytest.raises(ValueError):
        ThetaCharacteristic((0, 0, 1), (0, 0, 0))


def test_odd_nulls_are_exact_zero():
    tau = random_reduced_tau(2, 30)
    for c in all_characteristics():
        if not c.is_even:
            assert theta_constant(c, tau, 30).value == 0


@pytest.mark.parametrize("m,mp_,fn", [(0, 0, 3), (1, 0, 4), (0, 1, 2)])
def test_one_dimensional_kernel_vs_jtheta(m, mp_, fn):
    """theta[0;0] = theta3, theta[1/2;0] = theta4, theta[0;1/2] = theta2 at q = exp(pi i tau)."""
    t = mpmath.mpc("0.3", "1.1")
    with mp.workdps(60):
        q = mpmath.exp(1j * mpmath.pi * t)
        ref = mpmath.jtheta(fn, 0, q)
        assert abs(theta_constant_1d(t, m, mp_, 50).value - ref) < mpmath.mpf(10) ** -48


def test_diagonal_factorisation():
    diag = [mpmath.mpc("0.1", "1.2"), mpmath.mpc("-0.2", "1.0"), mpmath.mpc("0.4", "1.5")]
    tau = SiegelPoint.from_matrix([[diag[0], 0, 0], [0, diag[1], 0], [0, 0, diag[2]]], 40)
    with mp.workdps(50):
        for c in enumerate_even_characteristics():
            ref = mpmath.mpc(1)
            for k in range(3):
                ref *= theta_constant_1d(diag[k], c.m_bits[k], c.mp_bits[k], 40).value
            assert abs(theta_constant(c, tau, 40).value - ref) < mpmath.mpf(10) ** -38


def test_chi18_vanishes_on_products():
    # on diagonal tau, characteristics odd x odd x even vanish: 3 positions x 3 even factors
    assert abs(chi18_an(scalar_tau(1j, 40)).value) < zero_threshold(40)
    tn = theta_nulls(scalar_tau(1j, 40))
    mags = tn.magnitudes()
    assert sum(1 for v in mags if v < zero_threshold(40)) == 9
    assert mags[9] > mpmath.mpf("0.1")


def test_truncation_radius_brute_force():
    for lam in (0.5, 1.0, 2.0):
        p = 12
        R = truncation_radius(lam, p)
        c = math.pi * lam
        # worst one-dimensional shifted tail beyond R, times the other two full sums
        full = sum(math.exp(-c * (n + 0.5) ** 2) for n in range(-50, 51))
        tail = sum(math.exp(-c * (n + 0.5) ** 2) for n in range(-50, 51) if abs(n) > R)
        assert 3 * tail * full * full < 10 ** -(p + 5)


def test_ellipsoid_radius_brute_force():
    Y = [[1.0, 0.3, 0.1], [0.3, 0.9, 0.2], [0.1, 0.2, 0.8]]
    with mp.workdps(20):
        lam = float(min(mpmath.eigsy(mpmath.matrix(Y))[0]))
    p = 6
    r2 = ellipsoid_radius_sq(lam, p)
    with mp.workdps(30):
        tail = mpmath.mpf(0)
        for v in itertools.product(range(-9, 10), repeat=3):
            Q = sum(v[i] * Y[i][j] * v[j] for i in range(3) for j in range(3))
            if Q > r2:
                tail += mpmath.exp(-mpmath.pi * Q)
        assert tail < mpmath.mpf(10) ** -(p + 5)


def test_reduced_and_raw_agree():
    tau = random_reduced_tau(4, 40)
    a = chi18_an(tau, 40, reduce_first=True).value
    b = chi18_an(tau, 40, reduce_first=False).value
    with mp.workdps(50):
        assert abs(a - b) <= mpmath.mpf(10) ** -35 * max(1, abs(a))


def test_modularity_one_word():
    tau = random_reduced_tau(7, 60)
    g = random_symplectic(3, 17)
    moved, c = act(g, tau)
    with mp.workdps(80):
        lhs = chi18_an(moved, 60).value
        rhs = c.value**18 * chi18_an(tau, 60).value
        assert abs(lhs - rhs) <= mpmath.mpf(10) ** -45 * abs(rhs)


def test_paper_literal_convention_factor():
    tau = random_reduced_tau(5, 30)
    with mp.workdps(40):
        prod = mpmath.mpc(1)
        for c in enumerate_even_characteristics():
            prod *= convention_factor(c, tau)
        lit = chi18_paper_literal(tau, 30).value
        cla = chi18_an(tau, 30, reduce_first=False).value
        assert abs(prod * lit - cla) <= mpmath.mpf(10) ** -22 * abs(cla)
