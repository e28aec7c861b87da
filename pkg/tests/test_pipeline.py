from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from jacsquare.arith import BigComplex
from jacsquare.cli import main
from jacsquare.errors import SingularInputError
from jacsquare.pipeline import (
    HYPERELLIPTIC,
    JACOBIAN,
    TWISTED,
    UNDETERMINED,
    delta_from_tau_omega,
    delta_of_quartic,
    degeneration_scan,
    format_delta_report,
    hyperelliptic_probe,
    is_jacobian,
    parse_delta_report,
    reconstruct,
    twist_delta,
)
from jacsquare.quartic import discriminant, fermat_quartic, form_from_terms, format_form
from jacsquare.siegel import random_reduced_tau, scalar_tau

from _corpus import singular_corpus


@pytest.fixture(scope="module")
def fermat40():
    return delta_of_quartic(fermat_quartic(), 40)


@pytest.mark.parametrize(
    "delta,verdict",
    [(Fraction(1), JACOBIAN), (Fraction(9, 4), JACOBIAN), (Fraction(-1), TWISTED),
     (Fraction(2), TWISTED), (Fraction(0), HYPERELLIPTIC), (Fraction(1, 8), TWISTED)],
)
def test_is_jacobian(delta, verdict):
    assert is_jacobian(delta) == verdict


def test_reconstruct_relative():
    with mp.workdps(170):
        v = BigComplex(mpmath.mpf(2) ** -108, 150)
        assert reconstruct(v, 150) == Fraction(1, 2**108)
        # a 33-digit denominator is out of reach at 60 digits
        assert reconstruct(BigComplex(v.value, 60), 60) is None
        assert reconstruct(BigComplex(mpmath.sqrt(2), 150), 150) is None


def test_fermat_delta(fermat40):
    assert fermat40.delta_rational == 1
    assert fermat40.verdict == JACOBIAN
    assert fermat40.square_root in (1, -1)
    assert fermat40.exponent_vs_discr == (1, -108)
    assert fermat40.discriminant == 2**54


def test_twist(fermat40):
    tw = twist_delta(fermat40, Fraction(-1))
    assert tw.delta_rational == -1 and tw.verdict == TWISTED
    tw2 = twist_delta(fermat40, Fraction(2))
    assert tw2.delta_rational == Fraction(1, 2**27) and tw2.verdict == TWISTED
    # twisting back by a square class that is the same gives a square again
    tw3 = twist_delta(tw2, Fraction(2))
    assert tw3.delta_rational == Fraction(1, 2**54) and tw3.verdict == JACOBIAN
    with pytest.raises(ValueError):
        twist_delta(fermat40, Fraction(9))


def test_report_round_trip(fermat40):
    back = parse_delta_report(format_delta_report(fermat40))
    assert back.delta_rational == fermat40.delta_rational
    assert back.verdict == fermat40.verdict
    assert back.prec == fermat40.prec
    with mp.workdps(50):
        assert abs(back.delta_numeric.value - fermat40.delta_numeric.value) < mpmath.mpf(10) ** -35


def test_scaling_omega1(fermat40):
    pd = fermat40.periods
    t = mpmath.mpf(3) / 2
    with mp.workdps(60):
        O = [[v.value * t for v in r] for r in pd.Omega1]
        scaled = delta_from_tau_omega(pd.tau, O, 40, nulls=fermat40.nulls)
        expect = fermat40.delta_numeric.value * t**-54
        assert abs(scaled.delta_numeric.value - expect) < abs(expect) * mpmath.mpf(10) ** -30


def test_singular_input():
    with pytest.raises(SingularInputError):
        delta_of_quartic(singular_corpus()["node"], 30)


def test_hyperelliptic_probe_at_product_point():
    count, smallest = hyperelliptic_probe(scalar_tau(1j, 40), 40)
    assert count >= 1 and smallest < mpmath.mpf(10) ** -13
    count, smallest = hyperelliptic_probe(random_reduced_tau(1, 40), 40)
    assert count == 0


def test_zero_delta_is_hyperelliptic():
    tau = scalar_tau(1j, 40)
    O = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    rep = delta_from_tau_omega(tau, O, 40)
    assert rep.delta_rational == 0 and rep.verdict == HYPERELLIPTIC


def test_scan_rejects_t_zero():
    Q = form_from_terms(2, [((2, 0, 0), 1), ((0, 2, 0), 1), ((0, 0, 2), 1)])
    H = fermat_quartic()
    with pytest.raises(SingularInputError):
        degeneration_scan(Q, H, [Fraction(0)], 30)


def test_cli_discr_and_delta(tmp_path, capsys):
    f = tmp_path / "fermat.txt"
    f.write_text(format_form(fermat_quartic()))
    assert main(["discr", str(f), "--check"]) == 0
    out = capsys.readouterr().out
    assert f"discriminant: {2**54}" in out and "modular_check: agree" in out
    s = tmp_path / "node.txt"
    s.write_text(format_form(singular_corpus()["node"]))
    assert main(["discr", str(s)]) == 2
    capsys.readouterr()
    assert main(["delta", "--quartic", str(f), "--prec", "40"]) == 0
    rep = tmp_path / "rep.txt"
    rep.write_text(capsys.readouterr().out)
    assert parse_delta_report(rep.read_text()).verdict == JACOBIAN
    assert main(["twist", "--report", str(rep), "-D", "-3"]) == 0
    assert parse_delta_report(capsys.readouterr().out).verdict == TWISTED
    assert main(["twist", "--report", str(rep), "-D", "4"]) == 1
    assert main(["discr", str(tmp_path / "missing.txt")]) == 1


def test_cli_chi18(tmp_path, capsys):
    from jacsquare.siegel import format_tau

    t = tmp_path / "tau.txt"
    t.write_text(format_tau(scalar_tau(1j, 30)))
    assert main(["chi18", "--tau", str(t), "--prec", "30"]) == 0
    out = capsys.readouterr().out
    assert "vanishing_even_nulls: 9" in out


def test_undetermined_is_a_verdict():
    assert UNDETERMINED != JACOBIAN
