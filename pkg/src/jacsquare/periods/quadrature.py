"""Gauss-Legendre rules with a priori order selection from the analyticity ellipse."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import gmpy2

R_SPLIT = 2.5       # bisect a piece while its Bernstein parameter is below this
R_SHRINK = 0.9      # integrate on the ellipse of parameter R**0.9
MARGIN_DIGITS = 8   # allowance for the integrand size and the ellipse constant


@lru_cache(maxsize=None)
def gauss_legendre_gmp(n: int, bits: int):
    """Nodes and weights of the n-point rule on [-1, 1] as gmpy2 numbers, ascending nodes."""
    with gmpy2.context(gmpy2.get_context(), precision=bits + 20):
        pi = gmpy2.const_pi()
        tol = gmpy2.mpfr(2) ** (-(bits + 8))
        half = []
        for k in range(1, n // 2 + 1):
            x = gmpy2.cos(pi * (k - gmpy2.mpfr(0.25)) / (n + gmpy2.mpfr(0.5)))
            for _ in range(100):
                p0, p1 = gmpy2.mpfr(1), x
                for j in range(2, n + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < tol:
                    break
            p0, p1 = gmpy2.mpfr(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            half.append((x, 2 / ((1 - x * x) * dp * dp)))
        pairs = [(-x, w) for x, w in half] + [(x, w) for x, w in half]
        if n % 2:
            p0, p1 = gmpy2.mpfr(1), gmpy2.mpfr(0)
            for j in range(2, n + 1):
                p0, p1 = p1, (-(j - 1) * p0) / j
            pairs.append((gmpy2.mpfr(0), 2 / (n * p0) ** 2))
        pairs.sort(key=lambda t: t[0])
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        return tuple(+x for x, _ in pairs), tuple(+w for _, w in pairs)


def gauss_legendre(n: int, dps: int):
    """Nodes and weights as mpmath numbers at ``dps`` digits."""
    import mpmath

    from .fast import digits_to_bits, from_gmp

    nodes, weights = gauss_legendre_gmp(n, digits_to_bits(dps))
    with mpmath.workdps(dps + 5):
        return tuple(from_gmp(x) for x in nodes), tuple(from_gmp(w) for w in weights)


def bernstein_parameter(u: complex, v: complex, singularities: Sequence[complex]) -> float:
    """Largest ``R`` such that the ellipse with foci ``u, v`` and parameter ``R`` avoids all singularities."""
    mid, half = (u + v) / 2, (v - u) / 2
    best = math.inf
    for s in singularities:
        w = (complex(s) - mid) / half
        r = w + (w - 1) ** 0.5 * (w + 1) ** 0.5
        best = min(best, max(abs(r), 1 / abs(r) if r else math.inf))
    return best


def order_for(R: float, digits: int) -> int:
    """Number of nodes so that ``R_eff^(-2n)`` falls below ``10^-(digits + margin)``."""
    r_eff = R ** R_SHRINK
    n = math.ceil((digits + MARGIN_DIGITS) * math.log(10) / (2 * math.log(r_eff)))
    return max(8, 4 * math.ceil(n / 4))


def plan(u: complex, v: complex, singularities: Sequence[complex], digits: int):
    """Split ``[u, v]`` into pieces ``(t0, t1, n)`` with a priori Gauss-Legendre orders.

    ``t0, t1`` are dyadic parameters in [0, 1] along the segment.
    """
    out = []

    def rec(t0: float, t1: float, depth: int):
        R = bernstein_parameter(u + t0 * (v - u), u + t1 * (v - u), singularities)
        if R < R_SPLIT:
            if depth > 60:
                raise ValueError("segment touches a singularity")
            m = (t0 + t1) / 2
            rec(t0, m, depth + 1)
            rec(m, t1, depth + 1)
        else:
            out.append((t0, t1, order_for(R, digits)))

    rec(0.0, 1.0, 0)
    return out
