"""Delta of a genus-3 period point, the Jacobian square criterion and related end-to-end runs.

For a smooth plane quartic ``F`` with period matrix ``(Omega1, Omega2)`` of the
differentials ``(x, y, 1) dx / f_y``,

    Delta = (pi/2)^54 * chi18(tau) / det(Omega1)^18,   tau = Omega1^-1 Omega2,

is rational, and it is a square exactly when the polarised Jacobian is a
Jacobian over Q (it always is for a quartic over Q).  Measured over several
curves, ``Delta = 2^-108 * Discr(F)^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import mp

from . import __version__
from .arith import (
    GUARD_DIGITS,
    BigComplex,
    format_complex,
    format_rational,
    parse_complex,
    parse_rational,
    perfect_square,
    power_of_two_ratio,
    rational_reconstruct,
)
from .errors import ConsistencyError, PrecisionError, SingularInputError
from .periods import make_curve, period_matrix
from .quartic import TernaryForm, discriminant
from .siegel import SiegelPoint
from .theta import ThetaNulls, theta_nulls, zero_threshold

JACOBIAN = "jacobian"
TWISTED = "twisted_non_jacobian"
HYPERELLIPTIC = "hyperelliptic_or_decomposable"
UNDETERMINED = "undetermined"
VERDICTS = (JACOBIAN, TWISTED, HYPERELLIPTIC, UNDETERMINED)

C_CONSTANT = -(2**108)          # (2 pi i)^54 / c == (pi/2)^54
DISCR_EXPONENT = (1, -108)      # measured: Delta = +2^-108 Discr^2
ZERO_MARGIN = mpmath.mpf(10) ** 20
RECON_LOSS = 15                 # digits lost between the periods and Delta
CONVENTION = "classical-theta; Delta=(pi/2)^54*chi18/det(Omega1)^18; xi=(x,y,1)dx/f_y"


@dataclass
class DeltaReport:
    delta_numeric: BigComplex
    delta_rational: Optional[Fraction]
    square_root: Optional[Fraction]
    verdict: str
    chi18_value: BigComplex
    det_omega1_18: BigComplex
    exponent_vs_discr: Optional[tuple[int, int]]
    prec: int
    discriminant: Optional[Fraction] = None
    transform: Optional[tuple] = None
    min_even_null: Optional[mpmath.mpf] = None
    second_even_null: Optional[mpmath.mpf] = None
    reconstruction: str = "none"
    periods: object = field(default=None, repr=False, compare=False)
    nulls: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")


def is_jacobian(delta: Fraction) -> str:
    """Square-class verdict for a rational Delta."""
    delta = Fraction(delta)
    if delta == 0:
        return HYPERELLIPTIC
    return JACOBIAN if perfect_square(delta) is not None else TWISTED


def reconstruct(value: BigComplex, p: int) -> Optional[Fraction]:
    """Rational reconstruction of a value known to relative accuracy ``10^-(p-15)``.

    A candidate ``a/b`` must match to that accuracy and satisfy
    ``b^2 * err <= 10^(-p/5)``, which keeps a margin of ``10^(p/5)`` against
    accidental matches.
    """
    with mp.workdps(p + GUARD_DIGITS):
        mag = abs(value.value)
        if not mag:
            return Fraction(0)
        e = float(mpmath.log10(mag))
    tol = p - RECON_LOSS - e                      # absolute tolerance 10^-tol
    qexp = (tol - p / 5) / 2
    if qexp < 1:
        return None
    qbound = 10 ** int(qexp)
    nbound = 10 ** int(qexp + max(e, 0) + 1)
    return rational_reconstruct(value, height_bound=nbound, tol_digits=tol, den_bound=qbound)


def zero_margin(p: int):
    """Required gap between zero and nonzero nulls: ``10^20``, or ``10^(p/6)`` below p = 120."""
    return min(ZERO_MARGIN, mpmath.mpf(10) ** (mpmath.mpf(p) / 6))


def _classify_nulls(mags: Sequence, p: int) -> int:
    """Number of numerically vanishing nulls, enforcing a 10^20 gap to the nonzero ones."""
    thr = zero_threshold(p)
    margin = zero_margin(p)
    zeros = [m for m in mags if m < thr]
    rest = [m for m in mags if m >= thr]
    if zeros and rest and min(rest) < margin * max(zeros):
        raise ConsistencyError("no clear gap between vanishing and nonvanishing theta nulls")
    if not zeros and rest and min(rest) < margin * thr:
        raise PrecisionError("smallest theta null is too close to the zero threshold; raise the precision")
    return len(zeros)


def delta_from_tau_omega(
    tau: SiegelPoint,
    omega1: Sequence[Sequence],
    p: int,
    nulls: Optional[ThetaNulls] = None,
) -> DeltaReport:
    """Delta from a period point and the matrix of a-periods."""
    with mp.workdps(p + GUARD_DIGITS):
        O = mpmath.matrix([[v.value if isinstance(v, BigComplex) else mpmath.mpc(v) for v in r] for r in omega1])
        det = mpmath.det(O)
        scale = max(abs(v) for v in O) ** 3
        if abs(det) <= scale * mpmath.mpf(10) ** (-(p // 2)):
            raise PrecisionError("Omega1 is not invertible at this precision")
        tn = nulls if nulls is not None else theta_nulls(tau, p)
        mags = tn.magnitudes()
        n_zero = _classify_nulls(mags, p)
        det18 = det**18
        chi = tn.chi18.value
        if n_zero:
            delta = mpmath.mpc(0)
        else:
            delta = (mpmath.pi / 2) ** 54 * chi / det18
            alt = (2j * mpmath.pi) ** 54 * chi / (C_CONSTANT * det18)
            if abs(delta - alt) > abs(delta) * mpmath.mpf(10) ** (-(p - 20)):
                raise ConsistencyError("the two normalizations of Delta disagree")
        dnum = BigComplex(delta, p)
        if n_zero:
            rat, how = Fraction(0), "zero"
        else:
            rat = reconstruct(dnum, p)
            how = "direct" if rat is not None else "none"
        report = DeltaReport(
            delta_numeric=dnum,
            delta_rational=rat,
            square_root=None,
            verdict=UNDETERMINED,
            chi18_value=BigComplex(chi, p),
            det_omega1_18=BigComplex(det18, p),
            exponent_vs_discr=None,
            prec=p,
            min_even_null=mags[0],
            second_even_null=mags[1],
            reconstruction=how,
            nulls=tn,
        )
    return _finish(report)


def _finish(report: DeltaReport) -> DeltaReport:
    rat = report.delta_rational
    if rat is None:
        return replace(report, square_root=None, verdict=UNDETERMINED)
    with mp.workdps(report.prec + GUARD_DIGITS):
        approx = mpmath.mpf(rat.numerator) / rat.denominator
        err = abs(report.delta_numeric.value - approx)
        if rat and err > abs(approx) * mpmath.mpf(10) ** (-(report.prec // 2)):
            raise ConsistencyError("reconstructed Delta does not match its numerical value")
    return replace(report, square_root=perfect_square(rat) if rat else None, verdict=is_jacobian(rat))


def delta_of_quartic(
    F: TernaryForm,
    p: int,
    transform=None,
    base_point=None,
    variant: int = 0,
) -> DeltaReport:
    """Periods, tau, chi18 and Delta of a smooth quartic, with the exact discriminant."""
    D = discriminant(F)
    if D == 0:
        raise SingularInputError("quartic is singular: discriminant is 0", discriminant=D)
    curve = make_curve(F, transform=transform, check_smooth=False)
    pd = period_matrix(curve, p, base_point=base_point, variant=variant)
    report = delta_from_tau_omega(pd.tau, pd.Omega1, p)
    report = replace(report, discriminant=D, transform=curve.transform, periods=pd)
    if report.delta_rational is None and report.verdict != HYPERELLIPTIC:
        # Delta can be too tall to read off directly; Delta / Discr^2 is small.
        with mp.workdps(p + GUARD_DIGITS):
            ratio = BigComplex(report.delta_numeric.value / (mpmath.mpf(D.numerator) / D.denominator) ** 2, p)
        r = reconstruct(ratio, p)
        if r is not None:
            report = _finish(replace(report, delta_rational=r * D * D, reconstruction="via-discriminant"))
    if report.delta_rational:
        report = replace(report, exponent_vs_discr=power_of_two_ratio(report.delta_rational, D * D))
    return report


def twist_delta(report: DeltaReport, D: Fraction) -> DeltaReport:
    """Report of the quadratic twist by ``D``: Delta is divided by ``D^27``."""
    D = Fraction(D)
    if D == 0 or perfect_square(D) is not None:
        raise ValueError(f"{D} is a square; the twist is trivial")
    if not report.delta_rational:
        raise ValueError("twisting needs a nonzero rational Delta")
    f = D**27
    p = report.prec
    with mp.workdps(p + GUARD_DIGITS):
        fm = mpmath.mpf(f.numerator) / f.denominator
        num = BigComplex(report.delta_numeric.value / fm, p)
        det18 = BigComplex(report.det_omega1_18.value * fm, p)
    out = replace(
        report,
        delta_numeric=num,
        delta_rational=report.delta_rational / f,
        det_omega1_18=det18,
        exponent_vs_discr=None,
        discriminant=None,
        reconstruction="twist",
        periods=None,
    )
    return _finish(out)


def hyperelliptic_probe(tau: SiegelPoint, p: int) -> tuple[int, mpmath.mpf]:
    """Number of even theta nulls below ``10^(-p/3)`` and the smallest even null."""
    mags = theta_nulls(tau, p).magnitudes()
    thr = zero_threshold(p)
    return sum(1 for m in mags if m < thr), mags[0]


# degeneration towards the hyperelliptic locus --------------------------------------------


@dataclass
class ScanRow:
    t: Fraction
    discriminant: Fraction
    report: Optional[DeltaReport]
    nulls: list          # sorted magnitudes of the 36 even nulls
    error: Optional[str] = None

    @property
    def min_null(self):
        return self.nulls[0]

    @property
    def second_null(self):
        return self.nulls[1]


@dataclass
class ScanResult:
    rows: list
    monotone: bool
    separation: list           # second / smallest null per row
    slopes: list               # d log|theta| / d log t for the smallest and second-smallest nulls
    vanishing_in_limit: int    # nulls whose log-log slope exceeds 1
    exponents: list            # exponent_vs_discr per row


def degeneration_scan(Q: TernaryForm, H: TernaryForm, t_values: Sequence[Fraction], p: int) -> ScanResult:
    """Run ``Q^2 + t^2 H`` for decreasing ``t`` and watch the even theta nulls."""
    if Q.degree != 2 or H.degree != 4:
        raise ValueError("expected a conic and a quartic")
    rows = []
    for t in t_values:
        t = Fraction(t)
        if t == 0:
            raise SingularInputError("t = 0 gives the double conic Q^2", discriminant=Fraction(0))
        F = Q * Q + H * (t * t)
        D = discriminant(F)
        if D == 0:
            rows.append(ScanRow(t, D, None, [], error="singular member"))
            continue
        rep = delta_of_quartic(F, p)
        rows.append(ScanRow(t, D, rep, rep.nulls.magnitudes()))
    good = sorted((r for r in rows if r.report is not None), key=lambda r: -r.t)
    monotone = all(b.min_null < a.min_null for a, b in zip(good, good[1:]))
    separation = [r.second_null / r.min_null for r in good]
    slopes, vanishing = [], 0
    if len(good) >= 2:
        lt = [math.log(float(r.t)) for r in good[-2:]]
        for idx in range(36):
            lv = [float(mpmath.log(r.nulls[idx])) for r in good[-2:]]
            s = (lv[1] - lv[0]) / (lt[1] - lt[0])
            if idx < 2:
                slopes.append(s)
            if s > 1:
                vanishing += 1
    return ScanResult(
        rows=rows,
        monotone=monotone,
        separation=separation,
        slopes=slopes,
        vanishing_in_limit=vanishing,
        exponents=[r.report.exponent_vs_discr for r in good],
    )


# report text format --------------------------------------------------------------------------


def _opt_rational(q: Optional[Fraction]) -> str:
    return "none" if q is None else format_rational(q)


def format_delta_report(r: DeltaReport) -> str:
    lines = [
        "# jacsquare delta report",
        f"version: {__version__}",
        f"convention: {CONVENTION}",
        f"precision: {r.prec}",
        f"verdict: {r.verdict}",
        f"delta_numeric: {format_complex(r.delta_numeric)}",
        f"delta_rational: {_opt_rational(r.delta_rational)}",
        f"square_root: {_opt_rational(r.square_root)}",
        f"reconstruction: {r.reconstruction}",
        f"chi18: {format_complex(r.chi18_value)}",
        f"det_omega1_18: {format_complex(r.det_omega1_18)}",
        "exponent_vs_discr: " + ("none" if r.exponent_vs_discr is None else "%d %d" % r.exponent_vs_discr),
        f"discriminant: {_opt_rational(r.discriminant)}",
        "transform: " + ("none" if r.transform is None else "; ".join(" ".join(map(str, row)) for row in r.transform)),
        "min_even_null: " + ("none" if r.min_even_null is None else mpmath.nstr(r.min_even_null, 20)),
        "second_even_null: " + ("none" if r.second_even_null is None else mpmath.nstr(r.second_even_null, 20)),
    ]
    return "\n".join(lines) + "\n"


def parse_delta_report(text: str) -> DeltaReport:
    kv = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#") or ":" not in line:
            continue
        k, v = line.split(":", 1)
        kv[k.strip()] = v.strip()
    try:
        p = int(kv["precision"])

        def opt(key, conv):
            v = kv.get(key, "none")
            return None if v == "none" else conv(v)

        exp = opt("exponent_vs_discr", lambda s: tuple(int(x) for x in s.split()))
        transform = opt("transform", lambda s: tuple(tuple(int(x) for x in r.split()) for r in s.split(";")))
        with mp.workdps(p + GUARD_DIGITS):
            mn = opt("min_even_null", mpmath.mpf)
            sn = opt("second_even_null", mpmath.mpf)
        return DeltaReport(
            delta_numeric=parse_complex(kv["delta_numeric"]),
            delta_rational=opt("delta_rational", parse_rational),
            square_root=opt("square_root", parse_rational),
            verdict=kv["verdict"],
            chi18_value=parse_complex(kv["chi18"]),
            det_omega1_18=parse_complex(kv["det_omega1_18"]),
            exponent_vs_discr=exp,
            prec=p,
            discriminant=opt("discriminant", parse_rational),
            transform=transform,
            min_even_null=mn,
            second_even_null=sn,
            reconstruction=kv.get("reconstruction", "none"),
        )
    except KeyError as exc:
        raise ValueError(f"delta report is missing field {exc}") from exc
