"""Exact rationals, precision-tagged complex floats, and the exact tests built on them.

Rationals are plain :class:`fractions.Fraction` values.  Complex floats are
:class:`BigComplex`: an mpmath ``mpc`` together with the number of decimal
digits it is claimed to be good to.  Combining two values keeps the smaller
claim.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

import mpmath
from mpmath import mp

BigRational = Fraction

DEFAULT_PREC = 300
GUARD_DIGITS = 15

Number = Union[int, Fraction, float, complex, "BigComplex"]


def mpf_to_fraction(x) -> Fraction:
    """Exact binary value of an mpmath ``mpf``."""
    sign, man, exp, _ = x._mpf_
    if not man:
        if exp:  # inf/nan
            raise ValueError("cannot convert non-finite value to a rational")
        return Fraction(0)
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


@dataclass(frozen=True, eq=False)
class BigComplex:
    """Complex number with an explicit decimal precision contract."""

    value: mpmath.mpc
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        if not isinstance(self.value, mpmath.mpc):
            with mp.workdps(self.prec + GUARD_DIGITS):
                object.__setattr__(self, "value", mpmath.mpc(self.value))

    @classmethod
    def of(cls, x, prec: int = DEFAULT_PREC) -> "BigComplex":
        if isinstance(x, BigComplex):
            return cls(x.value, min(prec, x.prec))
        with mp.workdps(prec + GUARD_DIGITS):
            if isinstance(x, Fraction):
                v = mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
            else:
                v = mpmath.mpc(x)
        return cls(v, prec)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "BigComplex":
        if isinstance(other, BigComplex):
            return other
        return BigComplex.of(other, self.prec)

    def _binop(self, other, op) -> "BigComplex":
        o = self._coerce(other)
        p = min(self.prec, o.prec)
        with mp.workdps(p + GUARD_DIGITS):
            return BigComplex(op(self.value, o.value), p)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __neg__(self):
        return BigComplex(-self.value, self.prec)

    def __pow__(self, k: int):
        with mp.workdps(self.prec + GUARD_DIGITS):
            return BigComplex(self.value**k, self.prec)

    def __abs__(self):
        with mp.workdps(self.prec + GUARD_DIGITS):
            return abs(self.value)

    def conjugate(self) -> "BigComplex":
        return BigComplex(mpmath.conj(self.value), self.prec)

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag

    def with_prec(self, prec: int) -> "BigComplex":
        return BigComplex(self.value, prec)

    def is_exact_zero(self) -> bool:
        return not self.value

    def __complex__(self):
        return complex(self.value)

    def __repr__(self):
        return f"BigComplex({mpmath.nstr(self.value, 20)}, prec={self.prec})"

    def __str__(self):
        return format_complex(self)


# serialization --------------------------------------------------------------

_COMPLEX_RE = re.compile(r"^\s*\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)\s*@\s*(\d+)\s*$")


def _fmt_real(x, digits: int) -> str:
    if not x:
        return "0"
    return mpmath.nstr(x, digits)


def format_complex(z: BigComplex) -> str:
    """``(re,im)@p`` with ``p`` significant decimal digits in each part."""
    with mp.workdps(z.prec + GUARD_DIGITS):
        return f"({_fmt_real(z.value.real, z.prec)},{_fmt_real(z.value.imag, z.prec)})@{z.prec}"


def parse_complex(text: str) -> BigComplex:
    m = _COMPLEX_RE.match(text)
    if not m:
        raise ValueError(f"not a complex literal of the form (re,im)@p: {text!r}")
    prec = int(m.group(3))
    with mp.workdps(prec + GUARD_DIGITS):
        return BigComplex(mpmath.mpc(mpmath.mpf(m.group(1)), mpmath.mpf(m.group(2))), prec)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ValueError(f"not a rational literal p/q: {text!r}")
    q = Fraction(text)
    return q


# exact tests ------------------------------------------------------------------


def perfect_square(q: Fraction) -> Optional[Fraction]:
    """Return the non-negative rational square root of ``q``, or ``None``."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _convergents(x: Fraction) -> Iterator[Fraction]:
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while True:
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield Fraction(h1, k1)
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def rational_reconstruct(
    x: BigComplex,
    height_bound: Optional[int] = None,
    tol_digits: Optional[float] = None,
    den_bound: Optional[int] = None,
) -> Optional[Fraction]:
    """Recover a rational ``p/q`` from a high-precision approximation.

    The candidate must satisfy ``|p|, q <= height_bound`` and lie within
    ``10**-tol_digits`` of ``x`` (default ``tol_digits = prec/2``,
    ``height_bound = 10**(prec//5)``, which keeps ``q^2 * tol`` below
    ``10^(-prec/10)`` so accidental matches are unlikely).  Candidates are the continued-fraction
    convergents of the real part, smallest first.  ``den_bound`` optionally
    bounds the denominator separately from the numerator.
    """
    prec = x.prec
    if height_bound is None:
        height_bound = 10 ** (prec // 5)
    if tol_digits is None:
        tol_digits = prec / 2
    with mp.workdps(prec + GUARD_DIGITS):
        eps = mpmath.mpf(10) ** (-tol_digits)
        if abs(x.value.imag) >= eps:
            return None
        re_part = x.value.real
        exact = mpf_to_fraction(re_part)
        qmax = height_bound if den_bound is None else den_bound
        for c in _convergents(exact):
            if c.denominator > qmax:
                return None
            if abs(c.numerator) > height_bound:
                continue
            if abs(mpmath.mpf(c.numerator) / c.denominator - re_part) < eps:
                return c
    return None


def power_of_two_ratio(a: Fraction, b: Fraction) -> Optional[tuple[int, int]]:
    """Return ``(s, k)`` with ``a == s * 2**k * b`` when ``a/b`` is a signed power of two."""
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        raise ZeroDivisionError("power_of_two_ratio: b must be non-zero")
    r = a / b
    if r == 0:
        return None
    s = 1 if r > 0 else -1
    n, d = abs(r.numerator), r.denominator
    if n & (n - 1) or d & (d - 1):
        return None
    return s, n.bit_length() - d.bit_length()
