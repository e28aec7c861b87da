import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from jacsquare.arith import (
    BigComplex,
    format_complex,
    format_rational,
    mpf_to_fraction,
    parse_complex,
    parse_rational,
    perfect_square,
    power_of_two_ratio,
    rational_reconstruct,
)


def test_bigcomplex_precision_is_minimum_of_operands():
    a = BigComplex.of(1, 50)
    b = BigComplex.of(2, 80)
    assert (a + b).prec == 50
    assert (a * b).value == 2


def test_bigcomplex_of_fraction_is_accurate():
    z = BigComplex.of(Fraction(1, 3), 60)
    with mp.workdps(70):
        assert abs(z.value - mpmath.mpf(1) / 3) < mpmath.mpf(10) ** -65


def test_complex_text_round_trip():
    with mp.workdps(60):
        z = BigComplex(mpmath.mpc(mpmath.pi, -mpmath.e), 50)
    w = parse_complex(format_complex(z))
    assert w.prec == 50
    with mp.workdps(60):
        assert abs(w.value - z.value) < mpmath.mpf(10) ** -48


def test_parse_complex_rejects_garbage():
    with pytest.raises(ValueError):
        parse_complex("1+2i")


def test_rational_text_round_trip():
    assert parse_rational(format_rational(Fraction(-22, 7))) == Fraction(-22, 7)
    assert parse_rational("5") == 5
    with pytest.raises(ValueError):
        parse_rational("1.5")


@given(st.integers(-10**30, 10**30), st.integers(1, 10**30))
def test_rational_round_trip_property(n, d):
    q = Fraction(n, d)
    assert parse_rational(format_rational(q)) == q


def test_perfect_square_examples():
    assert perfect_square(Fraction(4, 9)) == Fraction(2, 3)
    assert perfect_square(Fraction(3)) is None
    assert perfect_square(Fraction(-4)) is None
    assert perfect_square(Fraction(0)) == 0


@given(st.integers(0, 10**20), st.integers(1, 10**20))
def test_perfect_square_of_squares(n, d):
    r = perfect_square(Fraction(n, d) ** 2)
    assert r == Fraction(n, d)


def test_reconstruct_simple_fraction():
    with mp.workdps(220):
        z = BigComplex(mpmath.mpc(mpmath.mpf(22) / 7), 200)
        half = BigComplex(mpmath.mpc(0.5), 200)
    assert rational_reconstruct(z, height_bound=100) == Fraction(22, 7)
    assert rational_reconstruct(half, height_bound=10**6) == Fraction(1, 2)
    assert rational_reconstruct(z) == Fraction(22, 7)


def test_reconstruct_rejects_nonreal():
    with mp.workdps(120):
        z = BigComplex(mpmath.mpc(1, 1e-10), 100)
    assert rational_reconstruct(z) is None


def test_sqrt2_has_no_small_reconstruction():
    """Brute-force oracle: no p/q with q <= 1000 is within 1e-100 of sqrt 2."""
    with mp.workdps(220):
        s = mpmath.sqrt(2)
        z = BigComplex(mpmath.mpc(s), 200)
        brute = [q for q in range(1, 1001) if abs(s - mpmath.nint(s * q) / q) < mpmath.mpf(10) ** -100]
    assert brute == []
    assert rational_reconstruct(z, height_bound=1000) is None
    assert rational_reconstruct(z) is None


@settings(max_examples=50)
@given(st.integers(-10**12, 10**12), st.integers(1, 10**12))
def test_reconstruct_property(n, d):
    q = Fraction(n, d)
    with mp.workdps(120):
        z = BigComplex(mpmath.mpc(mpmath.mpf(q.numerator) / q.denominator), 100)
    assert rational_reconstruct(z) == q


def test_power_of_two_ratio():
    assert power_of_two_ratio(Fraction(1), Fraction(2**108)) == (1, -108)
    assert power_of_two_ratio(Fraction(-12), Fraction(3)) == (-1, 2)
    assert power_of_two_ratio(Fraction(3), Fraction(1)) is None
    assert power_of_two_ratio(Fraction(0), Fraction(1)) is None
    with pytest.raises(ZeroDivisionError):
        power_of_two_ratio(Fraction(1), Fraction(0))


def test_mpf_to_fraction_exact():
    with mp.workdps(30):
        x = mpmath.mpf(0.375)
    assert mpf_to_fraction(x) == Fraction(3, 8)
    assert math.isclose(float(mpf_to_fraction(mpmath.mpf("0.1"))), 0.1)
