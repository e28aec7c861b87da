import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _corpus import random_quartic, singular_corpus
from jacsquare.quartic import (
    X,
    Y,
    Z,
    DegreeError,
    TernaryForm,
    covariance_exponent,
    det3,
    discriminant,
    discriminant_modular,
    fermat_quartic,
    form_from_terms,
    format_form,
    is_smooth,
    klein_quartic,
    macaulay_matrix,
    monomials,
    parse_form,
    partial_derivatives,
    resultant,
    resultant_modular,
    substitute_linear,
)


def test_monomial_counts_and_order():
    assert len(monomials(4)) == 15
    assert len(monomials(3)) == 10
    assert monomials(4)[0] == (4, 0, 0)
    assert monomials(4)[-1] == (0, 0, 4)


def test_form_text_round_trip():
    F = klein_quartic() + Fraction(1, 3) * X**2 * Y * Z
    assert parse_form(format_form(F)) == F


def test_parse_form_rejects_wrong_degree():
    with pytest.raises(DegreeError):
        parse_form("4 0 0 1\n3 0 0 1\n")


def test_form_arithmetic_and_evaluation():
    F = (X + Y) ** 2
    assert F == X**2 + 2 * X * Y + Y**2
    assert F(1, 2, 5) == 9
    assert F.derivative(0) == 2 * X + 2 * Y


def test_macaulay_matrix_shape():
    M = macaulay_matrix(*partial_derivatives(fermat_quartic()))
    assert M.shape == (45, 36)


def test_resultant_normalisation():
    assert resultant(X**3, Y**3, Z**3) == 1
    assert resultant(Y**3, X**3, Z**3) == -1


def test_resultant_of_common_zero_vanishes():
    # all three cubics vanish at (0:0:1)
    assert resultant(X**3 + X * Z**2, Y**3 + Y * Z**2, X * Y * Z) == 0


def test_resultant_degree_three_in_each_argument():
    g = (X**3 + Y**2 * Z, Y**3 - X * Z**2, Z**3 + X * Y * Z)
    r0 = resultant(*g)
    assert r0 != 0
    for i in range(3):
        scaled = list(g)
        scaled[i] = g[i] * 2
        assert resultant(*scaled) == 2**9 * r0


def test_fermat_discriminant_exact():
    # each partial is 4 x_i^3; Res is homogeneous of degree 9 in each, so 4^27 = 2^54
    assert discriminant(fermat_quartic()) == 2**54


def test_klein_discriminant_exact():
    assert discriminant(klein_quartic()) == 2**14 * 7**7


def test_klein_modular_agrees():
    assert discriminant_modular(klein_quartic()) == discriminant(klein_quartic())


@pytest.mark.parametrize("name", sorted(singular_corpus()))
def test_singular_corpus_vanishes(name):
    F = singular_corpus()[name]
    assert discriminant(F) == 0
    assert not is_smooth(F)


@pytest.mark.parametrize("seed", range(100, 110))
def test_random_smooth_discriminant_cross_validated(seed):
    F = random_quartic(seed, bound=5)
    D = discriminant(F)
    assert D != 0
    assert discriminant_modular(F) == D


def _singular_fp_point(F: TernaryForm, p: int):
    """Brute-force search for a projective F_p point where all partials vanish."""
    G = [g for g in partial_derivatives(F)]
    pts = [(1, a, b) for a in range(p) for b in range(p)] + [(0, 1, b) for b in range(p)] + [(0, 0, 1)]
    for v in pts:
        if all(int(g(*v)) % p == 0 for g in G) and int(F(*v)) % p == 0:
            return v
    return None


def test_fp_point_search_oracle():
    """A singular point over F_p forces p | Discr; a smooth reduction forces the converse."""
    hits = 0
    for seed in range(40):
        F = random_quartic(1000 + seed, bound=2)
        D = discriminant(F)
        if D == 0:
            continue
        for p in (3, 5, 7):
            if _singular_fp_point(F, p) is not None:
                hits += 1
                assert D.numerator % p == 0
    assert hits > 0


def test_sl3_invariance():
    rng = random.Random(7)
    F = random_quartic(42)
    D = discriminant(F)
    done = 0
    while done < 5:
        B = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        if det3(B) != 1:
            continue
        assert discriminant(substitute_linear(F, B)) == D
        done += 1


def test_general_covariance_exponent_is_36():
    F = random_quartic(43)
    assert covariance_exponent(F, [[2, 0, 0], [0, 1, 0], [0, 0, 1]]) == 36
    assert covariance_exponent(F, [[1, 1, 0], [0, 3, 0], [1, 0, 1]]) == 36


def test_scalar_multiple_scales_by_27():
    # Discr(cF) = c^27 Discr(F): three cubic arguments, degree 9 each
    F = klein_quartic()
    assert discriminant(F * 2) == 2**27 * discriminant(F)


@settings(max_examples=10, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=15, max_size=15))
def test_modular_path_matches_exact(coeffs):
    F = form_from_terms(4, zip(monomials(4), coeffs))
    assert discriminant_modular(F) == discriminant(F)


def test_resultant_modular_rejects_nothing_on_units():
    assert resultant_modular(X**3, Y**3, Z**3) == 1
