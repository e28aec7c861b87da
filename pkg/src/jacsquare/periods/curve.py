"""Affine model ``f(x, y) = F(x, y, 1)`` of a plane quartic and its x-projection data."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import mpmath
import numpy as np
import sympy
from mpmath import mp

from ..arith import GUARD_DIGITS
from ..errors import PrecisionError, SingularInputError
from ..quartic import TernaryForm, det3, discriminant, substitute_linear

IDENTITY = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
DEGREE = 4
EXPECTED_BRANCH_DEGREE = 12  # deg_x disc_y(f) when x = oo is unramified


@dataclass(frozen=True, eq=False)
class AffineCurve:
    """``f(x, y) = (F∘T)(x, y, 1)`` for a unimodular integer change of coordinates ``T``."""

    quartic: TernaryForm
    transform: tuple[tuple[int, ...], ...] = IDENTITY

    @cached_property
    def model(self) -> TernaryForm:
        if self.transform == IDENTITY:
            return self.quartic
        return substitute_linear(self.quartic, self.transform)

    @cached_property
    def y_coeffs(self) -> tuple[tuple[Fraction, ...], ...]:
        """``c[j][i]``: coefficient of ``x^i y^j`` in ``f``; ``f = sum_j (sum_i c[j][i] x^i) y^j``."""
        c = [[Fraction(0)] * (DEGREE + 1) for _ in range(DEGREE + 1)]
        for (i, j, _), v in self.model.coeffs.items():
            c[j][i] += v
        return tuple(tuple(r) for r in c)

    @cached_property
    def y_degree(self) -> int:
        return max((j for j in range(DEGREE + 1) if any(self.y_coeffs[j])), default=-1)

    def sympy_poly(self):
        x, y = sympy.symbols("x y")
        expr = sum(
            sympy.Rational(v.numerator, v.denominator) * x**i * y**j
            for j, row in enumerate(self.y_coeffs)
            for i, v in enumerate(row)
            if v
        )
        return expr, x, y

    @cached_property
    def branch_polynomial(self) -> tuple[Fraction, ...]:
        """Coefficients (constant term first) of ``disc_y f`` as a polynomial in ``x``."""
        expr, x, y = self.sympy_poly()
        D = sympy.Poly(sympy.discriminant(sympy.Poly(expr, y), y), x)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(D.all_coeffs())]
        return tuple(coeffs)

    @cached_property
    def branch_squarefree(self) -> tuple[Fraction, ...]:
        expr, x, y = self.sympy_poly()
        D = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.branch_polynomial)], x)
        sf = sympy.sqf_part(D)
        return tuple(Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(sf, x).all_coeffs()))

    def is_admissible(self) -> bool:
        bp = self.branch_polynomial
        return self.y_degree == DEGREE and len(bp) - 1 == EXPECTED_BRANCH_DEGREE

    # numeric evaluation -------------------------------------------------------

    @cached_property
    def _float_coeffs(self):
        return [np.array([float(v) for v in row], dtype=float) for row in self.y_coeffs]

    def coeffs_at_float(self, x: complex) -> np.ndarray:
        """Coefficients of ``f(x, .)`` highest degree first (numpy convention)."""
        out = np.empty(DEGREE + 1, dtype=complex)
        for j in range(DEGREE + 1):
            row = self._float_coeffs[j]
            acc = 0j
            for v in row[::-1]:
                acc = acc * x + v
            out[DEGREE - j] = acc
        return out

    def _mp_coeffs(self):
        dps = mp.dps
        cache = self.__dict__.setdefault("_mpc_cache", {})
        if dps not in cache:
            cache[dps] = [[mpmath.mpf(v.numerator) / v.denominator for v in row] for row in self.y_coeffs]
        return cache[dps]

    def coeffs_at(self, x) -> list:
        """Coefficients of ``f(x, .)`` constant term first, at the current mpmath precision."""
        out = []
        for row in self._mp_coeffs():
            acc = mpmath.mpc(0)
            for v in reversed(row):
                acc = acc * x + v
            out.append(acc)
        return out

    def f(self, x, y):
        c = self.coeffs_at(x)
        acc = mpmath.mpc(0)
        for v in reversed(c):
            acc = acc * y + v
        return acc


def branch_quality(curve: AffineCurve) -> float:
    """Minimal branch point separation relative to the spread of the branch points."""
    roots = np.roots([float(v) for v in reversed(curve.branch_squarefree)])
    if len(roots) < 2:
        return 0.0
    d = np.abs(roots[:, None] - roots[None, :])
    d[np.diag_indices_from(d)] = np.inf
    spread = float(np.abs(roots - roots.mean()).max())
    return float(d.min()) / max(1.0, spread)


GOOD_QUALITY = 0.05


def choose_transform(F: TernaryForm, seed: int = 0, candidates: int = 24) -> tuple[tuple[int, ...], ...]:
    """Identity if admissible and well conditioned, else the best small unimodular change.

    Candidates come from a seeded sequence of integer matrices with entries in
    [-2, 2]; the score is :func:`branch_quality`.
    """
    ident = AffineCurve(F)
    if ident.is_admissible() and branch_quality(ident) >= GOOD_QUALITY:
        return IDENTITY
    rng = random.Random(seed)
    best, best_q = (IDENTITY if ident.is_admissible() else None), (branch_quality(ident) if ident.is_admissible() else -1.0)
    found = 0
    for _ in range(50 * candidates):
        if found >= candidates:
            break
        T = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        if abs(det3(T)) != 1:
            continue
        T = tuple(tuple(r) for r in T)
        cand = AffineCurve(F, T)
        if not cand.is_admissible():
            continue
        found += 1
        q = branch_quality(cand)
        if q > best_q:
            best, best_q = T, q
    if best is None:
        raise PrecisionError("no admissible coordinate change found")
    return best


def make_curve(F: TernaryForm, transform: Optional[Sequence[Sequence[int]]] = None, check_smooth: bool = True) -> AffineCurve:
    if F.degree != DEGREE:
        raise ValueError("expected a quartic")
    if check_smooth:
        d = discriminant(F)
        if d == 0:
            raise SingularInputError("quartic is singular: discriminant is 0", discriminant=d)
    T = choose_transform(F) if transform is None else tuple(tuple(int(v) for v in r) for r in transform)
    if abs(det3(T)) != 1:
        raise ValueError("coordinate change must be unimodular")
    curve = AffineCurve(F, T)
    if not curve.is_admissible():
        raise ValueError("coordinate change does not give a degree-4 projection unramified at infinity")
    return curve


# polynomial roots ----------------------------------------------------------------


def _newton_poly(coeffs, z, tol, maxit=60):
    """Newton on ``sum coeffs[i] z^i`` (constant first) at the current precision."""
    for _ in range(maxit):
        f = mpmath.mpc(0)
        df = mpmath.mpc(0)
        for c in reversed(coeffs):
            df = df * z + f
            f = f * z + c
        if not df:
            break
        dz = f / df
        z = z - dz
        if abs(dz) <= tol * max(1, abs(z)):
            return z, True
    return z, False


def polish_roots(coeffs: Sequence[Fraction], p: int) -> list:
    """All roots of a squarefree rational polynomial to ``10^-p``; raises if isolation fails."""
    deg = len(coeffs) - 1
    if deg <= 0:
        return []
    approx = np.roots([float(c) for c in reversed(coeffs)])
    with mp.workdps(p + GUARD_DIGITS):
        cf = [mpmath.mpf(c.numerator) / c.denominator for c in coeffs]
        tol = mpmath.mpf(10) ** (-(p + 5))
        roots = []
        for z0 in approx:
            z, ok = _newton_poly(cf, mpmath.mpc(complex(z0)), tol)
            roots.append(z)
        sep = min((abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1:]), default=mpmath.mpf(1))
        if sep < mpmath.mpf("1e-8"):
            # double-precision seeds collided; fall back to simultaneous iteration
            roots = list(mpmath.polyroots(list(reversed(cf)), maxsteps=400, extraprec=4 * p))
            sep = min((abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1:]), default=mpmath.mpf(1))
            if sep < mpmath.mpf(10) ** (-(p // 4)):
                raise PrecisionError("branch points could not be isolated at this precision")
    return roots


BRANCH_SEPARATION = mpmath.mpf(10) ** -6


def discriminant_points(curve: AffineCurve, p: int) -> list:
    """Distinct roots of ``disc_y f`` in ``x`` to ``10^-p``, sorted by (real, imag)."""
    roots = polish_roots(curve.branch_squarefree, p)
    with mp.workdps(p + GUARD_DIGITS):
        for i, a in enumerate(roots):
            for b in roots[i + 1:]:
                if abs(a - b) < BRANCH_SEPARATION:
                    raise PrecisionError("branch points closer than 1e-6")
        return sorted(roots, key=sheet_key)


def sheet_key(z):
    """Sort key: real part rounded to 12 digits, then imaginary part."""
    return (int(mpmath.nint(z.real * 10**12)), float(z.imag))


def refine_fiber(curve: AffineCurve, x, approx: Sequence[complex], p: int) -> list:
    """Newton-polish approximate y-roots of ``f(x, .)`` at precision ``p``."""
    tol = mpmath.mpf(10) ** (-(p + 3))
    c = curve.coeffs_at(x)
    out = []
    for y0 in approx:
        y, ok = _newton_poly(c, mpmath.mpc(complex(y0)), tol)
        if not ok or abs(y - complex(y0)) > 1e-6 * max(1.0, abs(complex(y0))):
            raise PrecisionError("fiber root refinement failed; x too close to the branch locus")
        out.append(y)
    return out


def fiber_roots(curve: AffineCurve, x0, p: int) -> list:
    """The 4 roots of ``f(x0, y)`` to ``10^-p`` in the fixed sheet order."""
    with mp.workdps(p + GUARD_DIGITS):
        x0 = mpmath.mpc(x0)
        approx = np.roots(curve.coeffs_at_float(complex(x0)))
        roots = refine_fiber(curve, x0, approx, p)
        sep = min(abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1:])
        if sep < mpmath.mpf(10) ** (-(p // 2)):
            raise PrecisionError("x0 is too close to the branch locus")
        return sorted(roots, key=sheet_key)
