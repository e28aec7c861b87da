"""Genus-3 theta constants with half-integer characteristics, and chi18.

Classical convention (normative)::

    theta[m; m'](tau) = sum_{n in Z^3} exp(pi i (n+m')^T tau (n+m') + 2 pi i (n+m').m)

Paper-literal convention (comparison only): the plain series
``theta(z; tau) = sum_n exp(pi i n^T tau n + 2 pi i n.z)`` evaluated at
``z = m + tau m'``.  The two differ by ``exp(pi i m'^T tau m' + 2 pi i m'.m)``.

Summation runs over the lattice points of an ellipsoid ``(n+m')^T Im(tau) (n+m') <= r^2``
enumerated in lexicographic order ``(n3, n2, n1)``; ``r`` comes from a rigorous
tail bound (see :func:`ellipsoid_radius_sq`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Sequence

import mpmath
from mpmath import mp

from .arith import GUARD_DIGITS, BigComplex
from .siegel import SiegelPoint, act, reduce

Convention = Literal["classical", "paper_literal"]
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ThetaCharacteristic:
    m: tuple[Fraction, Fraction, Fraction]
    m_prime: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        for v in self.m + self.m_prime:
            if v not in (0, HALF):
                raise ValueError("characteristic entries must be 0 or 1/2")
        object.__setattr__(self, "m", tuple(Fraction(v) for v in self.m))
        object.__setattr__(self, "m_prime", tuple(Fraction(v) for v in self.m_prime))

    @classmethod
    def from_bits(cls, m_bits: Sequence[int], mp_bits: Sequence[int]) -> "ThetaCharacteristic":
        return cls(tuple(HALF * b for b in m_bits), tuple(HALF * b for b in mp_bits))

    @property
    def m_bits(self) -> tuple[int, ...]:
        return tuple(int(2 * v) for v in self.m)

    @property
    def mp_bits(self) -> tuple[int, ...]:
        return tuple(int(2 * v) for v in self.m_prime)

    @property
    def parity(self) -> int:
        """``4 m.m' mod 2``: 0 for even, 1 for odd."""
        return sum(a * b for a, b in zip(self.m_bits, self.mp_bits)) % 2

    @property
    def is_even(self) -> bool:
        return self.parity == 0

    def __str__(self):
        return "[" + "".join(map(str, self.m_bits)) + ";" + "".join(map(str, self.mp_bits)) + "]"


def all_characteristics() -> list[ThetaCharacteristic]:
    """All 64, ordered lexicographically in ``(m', m)``."""
    bits = list(itertools.product((0, 1), repeat=3))
    return [ThetaCharacteristic.from_bits(mb, mpb) for mpb in bits for mb in bits]


def enumerate_even_characteristics() -> list[ThetaCharacteristic]:
    return [c for c in all_characteristics() if c.is_even]


# truncation bounds -----------------------------------------------------------------


def _ln_shifted_gauss_sum_bound(c: float) -> float:
    # sum_{k in Z+a} exp(-c k^2) <= 2 + sqrt(pi/c) for any shift a
    return math.log(2 + math.sqrt(math.pi / c))


def truncation_radius(lambda_min: float, p: int) -> int:
    """Box radius ``R`` with ``sum_{|n|_inf > R} exp(-pi lambda |n+m'|^2) < 10^-(p+5)``.

    Bound: for ``T = R + 1/2`` and ``c = pi*lambda``, the terms with some
    ``|n_j| > R`` sum to at most
    ``3 * 2 exp(-c T^2)/(1 - exp(-2cT)) * (2 + lambda^-1/2)^2``.
    """
    lam = float(lambda_min)
    if not lam > 0:
        raise ValueError("lambda_min must be positive")
    c = math.pi * lam
    target = -(p + 5) * math.log(10)
    other = 2 * _ln_shifted_gauss_sum_bound(c)
    R = 0
    while True:
        T = R + 0.5
        tail = math.log(6) - c * T * T - math.log1p(-math.exp(-2 * c * T)) + other
        if tail < target:
            return R
        R += 1


ELLIPSOID_EPS = 0.1


def ellipsoid_radius_sq(lambda_min: float, p: int) -> float:
    """``r^2`` with ``sum_{Q(v) > r^2} exp(-pi Q(v)) < 10^-(p+5)`` over ``v in Z^3 + m'``.

    ``exp(-pi Q) <= exp(-pi (1-eps) r^2) exp(-pi eps Q)`` for ``Q > r^2`` and
    ``sum_v exp(-pi eps Q(v)) <= (2 + (eps lambda)^-1/2)^3`` since
    ``Q(v) >= lambda |v|^2``.
    """
    lam = float(lambda_min)
    if not lam > 0:
        raise ValueError("lambda_min must be positive")
    eps = ELLIPSOID_EPS
    ln_sum = 3 * _ln_shifted_gauss_sum_bound(math.pi * eps * lam)
    target = (p + 5) * math.log(10)
    return (target + ln_sum) / (math.pi * (1 - eps))


# enumeration ----------------------------------------------------------------------


def _cholesky_float(Y):
    """Q(v) = q00 (v0 + q01 v1 + q02 v2)^2 + q11 (v1 + q12 v2)^2 + q22 v2^2."""
    y = [[float(Y[i][j]) for j in range(3)] for i in range(3)]
    q00 = y[0][0]
    q01 = y[0][1] / q00
    q02 = y[0][2] / q00
    q11 = y[1][1] - q00 * q01 * q01
    q12 = (y[1][2] - q00 * q01 * q02) / q11
    q22 = y[2][2] - q00 * q02 * q02 - q11 * q12 * q12
    return q00, q01, q02, q11, q12, q22


def _ellipsoid_rows(Y, shift: Sequence[float], r2: float):
    """Yield ``(n2, n1, n0_lo, n0_hi)`` covering all ``n`` with ``Q(n + shift) <= r2``.

    Float bounds are widened by a relative margin so rounding never drops a point.
    """
    q00, q01, q02, q11, q12, q22 = _cholesky_float(Y)
    r2 = r2 * (1 + 1e-9) + 1e-9
    s0, s1, s2 = (float(v) for v in shift)
    h2 = math.sqrt(r2 / q22)
    for n2 in range(math.ceil(-h2 - s2 - 1e-9), math.floor(h2 - s2 + 1e-9) + 1):
        v2 = n2 + s2
        rem2 = r2 - q22 * v2 * v2
        if rem2 < 0:
            continue
        c1 = -q12 * v2
        h1 = math.sqrt(rem2 / q11)
        for n1 in range(math.ceil(c1 - h1 - s1 - 1e-9), math.floor(c1 + h1 - s1 + 1e-9) + 1):
            v1 = n1 + s1
            rem1 = rem2 - q11 * (v1 + q12 * v2) ** 2
            if rem1 < 0:
                continue
            c0 = -(q01 * v1 + q02 * v2)
            h0 = math.sqrt(rem1 / q00)
            lo = math.ceil(c0 - h0 - s0 - 1e-9)
            hi = math.floor(c0 + h0 - s0 + 1e-9)
            if lo <= hi:
                yield n2, n1, lo, hi


def _row_terms(t00, lin, const, v0_start, count, pi_i):
    """exp(pi i (t00 v^2 + 2 v lin + const)) for v = v0_start, v0_start+1, ... (count terms)."""
    v = v0_start
    f = mpmath.exp(pi_i * (t00 * v * v + 2 * v * lin + const))
    ratio = mpmath.exp(pi_i * (t00 * (2 * v + 1) + 2 * lin))
    w = mpmath.exp(2 * pi_i * t00)
    out = [f]
    for _ in range(count - 1):
        f = f * ratio
        ratio = ratio * w
        out.append(f)
    return out


def _working_dps(p: int) -> int:
    return p + GUARD_DIGITS + 5


def _bucket_sums(tau: SiegelPoint, mp_bits: Sequence[int], p: int):
    """``S[c] = sum_{n = c mod 2} exp(pi i v^T tau v)``, ``v = n + m'``, for the 8 parity classes ``c``."""
    Y = tau.imag()
    r2 = ellipsoid_radius_sq(float(tau.lambda_min()), p)
    shift = [Fraction(b, 2) for b in mp_bits]
    t = tau.tau
    buckets = {c: mpmath.mpc(0) for c in itertools.product((0, 1), repeat=3)}
    pi_i = mpmath.mpc(0, mpmath.pi)
    count = 0
    for n2, n1, lo, hi in _ellipsoid_rows(Y, [float(s) for s in shift], r2):
        v2 = mpmath.mpf(n2) + shift[2].numerator / mpmath.mpf(shift[2].denominator)
        v1 = mpmath.mpf(n1) + shift[1].numerator / mpmath.mpf(shift[1].denominator)
        s0 = shift[0].numerator / mpmath.mpf(shift[0].denominator)
        lin = t[0][1] * v1 + t[0][2] * v2
        const = t[1][1] * v1 * v1 + 2 * t[1][2] * v1 * v2 + t[2][2] * v2 * v2
        terms = _row_terms(t[0][0], lin, const, lo + s0, hi - lo + 1, pi_i)
        count += len(terms)
        for k, term in enumerate(terms):
            n0 = lo + k
            key = (n0 & 1, n1 & 1, n2 & 1)
            buckets[key] += term
    return buckets, count


def _classical_from_buckets(c: ThetaCharacteristic, buckets) -> mpmath.mpc:
    total = mpmath.mpc(0)
    for cls, s in buckets.items():
        sign = (-1) ** sum(a * b for a, b in zip(cls, c.m_bits))
        total += s if sign > 0 else -s
    # exp(2 pi i m'.m) = (-1)^(4 m.m') ... generally i^(m_bits . mp_bits)
    k = sum(a * b for a, b in zip(c.m_bits, c.mp_bits)) % 4
    return total * (1, 1j, -1, -1j)[k]


def _plain_series(tau: SiegelPoint, z, center_shift: Sequence[Fraction], p: int, extra_ln: float) -> mpmath.mpc:
    """``sum_n exp(pi i n^T tau n + 2 pi i n.z)`` over an ellipsoid centred at ``-center_shift``."""
    Y = tau.imag()
    r2 = ellipsoid_radius_sq(float(tau.lambda_min()), p) + extra_ln / math.pi
    t = tau.tau
    pi_i = mpmath.mpc(0, mpmath.pi)
    total = mpmath.mpc(0)
    for n2, n1, lo, hi in _ellipsoid_rows(Y, [float(s) for s in center_shift], r2):
        lin = t[0][1] * n1 + t[0][2] * n2 + z[0]
        const = t[1][1] * n1 * n1 + 2 * t[1][2] * n1 * n2 + t[2][2] * n2 * n2 + 2 * (n1 * z[1] + n2 * z[2])
        for term in _row_terms(t[0][0], lin, const, mpmath.mpf(lo), hi - lo + 1, pi_i):
            total += term
    return total


def convention_factor(c: ThetaCharacteristic, tau: SiegelPoint) -> mpmath.mpc:
    """``exp(pi i m'^T tau m' + 2 pi i m'.m)``: classical = factor * paper-literal."""
    mpv = [mpmath.mpf(v.numerator) / v.denominator for v in c.m_prime]
    mv = [mpmath.mpf(v.numerator) / v.denominator for v in c.m]
    q = sum(mpv[i] * tau.tau[i][j] * mpv[j] for i in range(3) for j in range(3))
    return mpmath.exp(mpmath.mpc(0, mpmath.pi) * q + 2j * mpmath.pi * sum(a * b for a, b in zip(mpv, mv)))


def theta_constant(
    c: ThetaCharacteristic,
    tau: SiegelPoint,
    p: Optional[int] = None,
    convention: Convention = "classical",
) -> BigComplex:
    """Theta null with characteristic ``c`` at ``tau`` to absolute error ``10^-p``.

    Odd characteristics return an exact zero without summation.  ``tau`` is
    used as given; pass a reduced point (see :mod:`jacsquare.siegel`) for speed.
    """
    p = tau.prec if p is None else p
    if p < 10:
        raise ValueError("precision must be at least 10 digits")
    if not c.is_even:
        return BigComplex(mpmath.mpc(0), p)
    with mp.workdps(_working_dps(p)):
        if convention == "classical":
            buckets, _ = _bucket_sums(tau, c.mp_bits, p)
            return BigComplex(_classical_from_buckets(c, buckets), p)
        if convention == "paper_literal":
            mpv = [mpmath.mpf(v.numerator) / v.denominator for v in c.m_prime]
            z = [mpmath.mpf(c.m[i].numerator) / c.m[i].denominator + sum(tau.tau[i][j] * mpv[j] for j in range(3)) for i in range(3)]
            # terms are |exp(pi i m' tau m')|^-1 times the classical ones; widen the ellipsoid to match
            extra = math.pi * sum(float(mpv[i] * tau.tau[i][j].imag * mpv[j]) for i in range(3) for j in range(3))
            return BigComplex(_plain_series(tau, z, c.m_prime, p, extra), p)
    raise ValueError(f"unknown convention {convention!r}")


def theta_constant_1d(tau1, m: int, m_prime: int, p: int) -> BigComplex:
    """One-dimensional classical theta null, used to check factorisation over diagonal tau."""
    with mp.workdps(_working_dps(p)):
        t = mpmath.mpc(tau1)
        y = float(t.imag)
        r = math.sqrt(ellipsoid_radius_sq(y, p) / y) + 1
        a = Fraction(m_prime, 2)
        av = mpmath.mpf(a.numerator) / a.denominator
        mv = mpmath.mpf(m) / 2
        total = mpmath.mpc(0)
        pi_i = mpmath.mpc(0, mpmath.pi)
        for n in range(-math.ceil(r) - 1, math.ceil(r) + 2):
            v = n + av
            total += mpmath.exp(pi_i * t * v * v + 2 * pi_i * v * mv)
        return BigComplex(total, p)


# chi18 ------------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaNulls:
    """The 36 even theta nulls at ``tau``, computed at a reduced point."""

    tau: SiegelPoint
    tau_reduced: SiegelPoint
    cocycle: BigComplex  # det(C tau + D) for the reducing gamma
    values_reduced: tuple[BigComplex, ...]  # theta[c](tau_reduced), c in enumerate_even_characteristics() order
    chi18: BigComplex  # chi18 at the original tau
    prec: int
    terms: int

    def magnitudes(self) -> list[mpmath.mpf]:
        """``|theta|`` of the 36 even nulls at the original ``tau`` (as a multiset).

        Under ``tau -> gamma tau`` the even nulls are permuted and scaled by
        ``|det(C tau + D)|^(1/2)`` in absolute value.
        """
        with mp.workdps(self.prec + GUARD_DIGITS):
            s = mpmath.sqrt(abs(self.cocycle.value))
            return sorted(abs(v.value) / s for v in self.values_reduced)


def theta_nulls(tau: SiegelPoint, p: Optional[int] = None, reduce_first: bool = True) -> ThetaNulls:
    p = tau.prec if p is None else p
    if reduce_first:
        red = reduce(tau, p)
        tau_r, cyc = red.tau_reduced, red.cocycle
    else:
        tau_r = tau.with_prec(p)
        with mp.workdps(p + GUARD_DIGITS):
            cyc = BigComplex(mpmath.mpc(1), p)
    # a product of 36 values: spend a few extra digits on each factor
    pp = p + 5
    tau_w = tau_r.with_prec(pp)
    vals = []
    total_terms = 0
    with mp.workdps(_working_dps(pp)):
        by_mp = {}
        for c in enumerate_even_characteristics():
            if c.mp_bits not in by_mp:
                by_mp[c.mp_bits] = _bucket_sums(tau_w, c.mp_bits, pp)
                total_terms += by_mp[c.mp_bits][1]
            vals.append(_classical_from_buckets(c, by_mp[c.mp_bits][0]))
        prod = mpmath.mpc(1)
        for v in vals:
            prod *= v
        chi = prod / cyc.value**18
    return ThetaNulls(
        tau=tau,
        tau_reduced=tau_r,
        cocycle=cyc,
        values_reduced=tuple(BigComplex(v, p) for v in vals),
        chi18=BigComplex(chi, p),
        prec=p,
        terms=total_terms,
    )


def chi18_an(tau: SiegelPoint, p: Optional[int] = None, reduce_first: bool = True) -> BigComplex:
    """Product of the 36 even classical theta nulls at ``tau``.

    With ``reduce_first`` (default) the product is evaluated at a reduced
    point ``gamma tau`` and pulled back by ``det(C tau + D)^-18``.
    """
    return theta_nulls(tau, p, reduce_first).chi18


def chi18_paper_literal(tau: SiegelPoint, p: Optional[int] = None) -> BigComplex:
    """Product of the 36 paper-literal nulls ``theta(m + tau m'; tau)`` at ``tau`` as given."""
    p = tau.prec if p is None else p
    with mp.workdps(_working_dps(p)):
        prod = mpmath.mpc(1)
        for c in enumerate_even_characteristics():
            prod *= theta_constant(c, tau, p + 5, "paper_literal").value
        return BigComplex(prod, p)


def zero_threshold(p: int):
    """``10^(-p/3)``: theta values below this are reported as numerically zero."""
    return mpmath.mpf(10) ** (-mpmath.mpf(p) / 3)
