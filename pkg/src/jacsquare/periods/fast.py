"""gmpy2 kernels for the quadrature hot loop (root refinement and integrand evaluation)."""

from __future__ import annotations

import math

import gmpy2
import mpmath
from gmpy2 import mpc, mpfr

from ..errors import PrecisionError


def digits_to_bits(p: int) -> int:
    return int(math.ceil(p * math.log2(10))) + 16


def to_gmp(x):
    """mpmath mpf/mpc (or Python number) -> gmpy2 value at the current gmpy2 precision."""
    if isinstance(x, mpmath.mpc):
        return mpc(_mpf_to_gmp(x.real), _mpf_to_gmp(x.imag))
    if isinstance(x, mpmath.mpf):
        return _mpf_to_gmp(x)
    if isinstance(x, complex):
        return mpc(x)
    return mpfr(x)


def _mpf_to_gmp(x):
    sign, man, exp, _ = x._mpf_
    if not man:
        return mpfr(0)
    v = gmpy2.mul_2exp(mpfr(gmpy2.mpz(man)), exp)
    return -v if sign else v


def _gmp_to_mpf(v):
    if not v:
        return mpmath.mpf(0)
    m, e = v.as_mantissa_exp()
    return mpmath.mpf((int(m), int(e)))


def from_gmp(v):
    if isinstance(v, type(mpc(0))):
        return mpmath.mpc(_gmp_to_mpf(v.real), _gmp_to_mpf(v.imag))
    return _gmp_to_mpf(v)


class FastPoly:
    """Rows ``c[j](x)`` of ``f = sum_j c[j](x) y^j`` as gmpy2 numbers at ``bits`` precision."""

    def __init__(self, y_coeffs, bits: int):
        self.bits = bits
        with gmpy2.context(gmpy2.get_context(), precision=bits):
            self.rows = [[mpfr(v.numerator) / v.denominator for v in row] for row in y_coeffs]
        self.deg = len(self.rows) - 1

    def coeffs(self, x):
        out = []
        for row in self.rows:
            acc = mpc(0)
            for v in reversed(row):
                acc = acc * x + v
            out.append(acc)
        return out

    def refine(self, c, y0: complex, p: int):
        """Newton with precision doubling from a double-precision seed.

        Returns ``(y, f_y(y))``; raises when the iteration does not settle.
        """
        ctx = gmpy2.get_context()
        full = self.bits
        y = mpc(y0)
        prec = 106
        tol_exp = -(digits_to_bits(p) // 2 + 40)  # |dy| threshold for quadratic convergence
        for it in range(60):
            prec = min(2 * prec, full) if it else min(prec, full)
            ctx.precision = prec
            f = mpc(0)
            df = mpc(0)
            for cj in reversed(c):
                df = df * y + f
                f = f * y + cj
            if df == 0:
                raise PrecisionError("vanishing derivative in root refinement")
            dy = f / df
            y = y - dy
            if prec == full:
                scale = max(1, abs(y))
                if dy == 0 or gmpy2.get_exp(abs(dy) / scale) < tol_exp:
                    break
        else:
            ctx.precision = full
            raise PrecisionError("root refinement did not converge")
        ctx.precision = full
        if abs(complex(y) - y0) > 1e-6 * max(1.0, abs(y0)):
            raise PrecisionError("root refinement jumped to another root")
        fy = mpc(0)
        for j in range(self.deg, 0, -1):
            fy = fy * y + j * c[j]
        return y, fy
