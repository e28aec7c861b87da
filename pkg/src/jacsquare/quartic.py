"""Exact ternary forms, the Macaulay resultant of three ternary cubics, and quartic discriminants.

Monomials of degree ``m`` are enumerated graded-lexicographically:
``x^m, x^(m-1) y, x^(m-1) z, x^(m-2) y^2, ...``, i.e. descending in the
exponent of ``x``, then of ``y``.  Every coefficient vector and every matrix
in this module uses that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

from .arith import format_rational, parse_rational

Exponent = tuple[int, int, int]


class DegreeError(ValueError):
    """A form of the wrong degree was passed."""


@lru_cache(maxsize=None)
def monomials(m: int) -> tuple[Exponent, ...]:
    """Exponent triples of degree ``m`` in graded-lex order; ``(m+2)(m+1)/2`` of them."""
    return tuple((i, j, m - i - j) for i in range(m, -1, -1) for j in range(m - i, -1, -1))


@lru_cache(maxsize=None)
def _index(m: int) -> dict[Exponent, int]:
    return {e: k for k, e in enumerate(monomials(m))}


@dataclass(frozen=True)
class TernaryForm:
    """Homogeneous polynomial in X, Y, Z with rational coefficients."""

    degree: int
    coeffs: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in self.coeffs.items():
            e = tuple(int(v) for v in e)
            if len(e) != 3 or min(e) < 0 or sum(e) != self.degree:
                raise DegreeError(f"exponent {e} does not have degree {self.degree}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        object.__setattr__(self, "coeffs", {e: c for e, c in clean.items() if c})

    @classmethod
    def from_vector(cls, degree: int, vec: Sequence) -> "TernaryForm":
        mons = monomials(degree)
        if len(vec) != len(mons):
            raise DegreeError(f"expected {len(mons)} coefficients for degree {degree}")
        return cls(degree, {e: Fraction(c) for e, c in zip(mons, vec)})

    @classmethod
    def monomial(cls, e: Exponent, c=1) -> "TernaryForm":
        return cls(sum(e), {tuple(e): Fraction(c)})

    def vector(self) -> list[Fraction]:
        return [self.coeffs.get(e, Fraction(0)) for e in monomials(self.degree)]

    def coefficient(self, e: Exponent) -> Fraction:
        return self.coeffs.get(tuple(e), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "TernaryForm") -> "TernaryForm":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.degree != self.degree:
            raise DegreeError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return TernaryForm(self.degree, out)

    def __neg__(self):
        return TernaryForm(self.degree, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "TernaryForm":
        if not isinstance(other, TernaryForm):
            c = Fraction(other)
            return TernaryForm(self.degree, {e: c * v for e, v in self.coeffs.items()})
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return TernaryForm(self.degree + other.degree, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TernaryForm":
        out = TernaryForm.monomial((0, 0, 0))
        for _ in range(k):
            out = out * self
        return out

    def derivative(self, var: int) -> "TernaryForm":
        if self.degree == 0:
            return TernaryForm(0)
        out = {}
        for e, c in self.coeffs.items():
            if e[var]:
                f = list(e)
                f[var] -= 1
                out[tuple(f)] = c * e[var]
        return TernaryForm(self.degree - 1, out)

    def __call__(self, x, y, z):
        total = 0
        for (i, j, l), c in self.coeffs.items():
            total += c * x**i * y**j * z**l
        return total

    def denominator_lcm(self) -> int:
        d = 1
        for c in self.coeffs.values():
            d = d * c.denominator // math.gcd(d, c.denominator)
        return d

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in monomials(self.degree):
            c = self.coeffs.get(e)
            if c is None:
                continue
            mon = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip("xyz", e) if k)
            parts.append(f"({c})*{mon}" if mon else f"({c})")
        return " + ".join(parts)


TernaryQuartic = TernaryForm

X = TernaryForm.monomial((1, 0, 0))
Y = TernaryForm.monomial((0, 1, 0))
Z = TernaryForm.monomial((0, 0, 1))


# file format ------------------------------------------------------------------


def parse_form(text: str, degree: Optional[int] = 4) -> TernaryForm:
    """Read ``i j l p/q`` lines; blank lines and ``#`` comments are skipped."""
    coeffs: dict[Exponent, Fraction] = {}
    seen_degree = degree
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 'i j l p/q', got {raw!r}")
        e = tuple(int(v) for v in parts[:3])
        if seen_degree is None:
            seen_degree = sum(e)
        if sum(e) != seen_degree:
            raise DegreeError(f"line {lineno}: exponents {e} do not sum to {seen_degree}")
        coeffs[e] = coeffs.get(e, Fraction(0)) + parse_rational(parts[3])
    if seen_degree is None:
        raise ValueError("empty form file and no degree given")
    return TernaryForm(seen_degree, coeffs)


def format_form(F: TernaryForm) -> str:
    return "".join(
        f"{i} {j} {l} {format_rational(F.coeffs[(i, j, l)])}\n"
        for (i, j, l) in monomials(F.degree)
        if (i, j, l) in F.coeffs
    )


# basic operations ---------------------------------------------------------------


def partial_derivatives(F: TernaryForm) -> tuple[TernaryForm, TernaryForm, TernaryForm]:
    if F.degree != 4:
        raise DegreeError(f"expected a quartic, got degree {F.degree}")
    return F.derivative(0), F.derivative(1), F.derivative(2)


def substitute_linear(F: TernaryForm, B: Sequence[Sequence]) -> TernaryForm:
    """``F∘B``: the form ``v -> F(B v)``."""
    if len(B) != 3 or any(len(r) != 3 for r in B):
        raise ValueError("B must be 3x3")
    lin = [
        TernaryForm(1, {(1, 0, 0): B[r][0], (0, 1, 0): B[r][1], (0, 0, 1): B[r][2]})
        for r in range(3)
    ]
    powers = [[TernaryForm.monomial((0, 0, 0))] for _ in range(3)]
    for r in range(3):
        for _ in range(F.degree):
            powers[r].append(powers[r][-1] * lin[r])
    out = TernaryForm(F.degree)
    for (i, j, l), c in F.coeffs.items():
        out = out + powers[0][i] * powers[1][j] * powers[2][l] * c
    return out


# Macaulay matrix ----------------------------------------------------------------


@dataclass(frozen=True)
class MacaulayMatrix:
    """Multiplication map ``I_4^3 -> I_7``: row ``(g, mu)`` is the vector of ``mu * g``."""

    rows: tuple[tuple[Fraction, ...], ...]
    row_labels: tuple[tuple[int, Exponent], ...]
    col_labels: tuple[Exponent, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.col_labels)


def _check_cubics(gs: Sequence[TernaryForm]) -> None:
    if len(gs) != 3:
        raise ValueError("expected three forms")
    for g in gs:
        if g.degree != 3:
            raise DegreeError(f"expected cubics, got degree {g.degree}")


def macaulay_matrix(FX: TernaryForm, FY: TernaryForm, FZ: TernaryForm) -> MacaulayMatrix:
    gs = (FX, FY, FZ)
    _check_cubics(gs)
    cols = monomials(7)
    cidx = _index(7)
    rows, labels = [], []
    for b, g in enumerate(gs):
        for mu in monomials(4):
            row = [Fraction(0)] * len(cols)
            for e, c in g.coeffs.items():
                row[cidx[(e[0] + mu[0], e[1] + mu[1], e[2] + mu[2])]] = c
            rows.append(tuple(row))
            labels.append((b, mu))
    return MacaulayMatrix(tuple(rows), tuple(labels), cols)


# exact determinants ----------------------------------------------------------


def det_int(M: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    a = [list(r) for r in M]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det_mod(M: Sequence[Sequence[int]], p: int) -> int:
    a = [[v % p for v in r] for r in M]
    n = len(a)
    det = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        akk = a[k][k]
        det = det * akk % p
        inv = pow(akk, -1, p)
        rk = a[k]
        for i in range(k + 1, n):
            f = a[i][k] * inv % p
            if f:
                ri = a[i]
                for j in range(k, n):
                    ri[j] = (ri[j] - f * rk[j]) % p
    return det % p


# Macaulay quotient ------------------------------------------------------------


@lru_cache(maxsize=None)
def _macaulay_layout():
    """For each degree-7 monomial: (block, multiplier); plus the non-reduced index set."""
    layout = []
    nonreduced = []
    for k, mu in enumerate(monomials(7)):
        divisible = [i for i in range(3) if mu[i] >= 3]
        b = divisible[0]
        mult = list(mu)
        mult[b] -= 3
        layout.append((b, tuple(mult)))
        if len(divisible) >= 2:
            nonreduced.append(k)
    return tuple(layout), tuple(nonreduced)


def _square_macaulay(gs: Sequence[dict], s: int = 0) -> list[list[int]]:
    """Rows placed at their target monomial's position, ``g_b + s*x_b^3`` in block b."""
    layout, _ = _macaulay_layout()
    cidx = _index(7)
    n = len(layout)
    M = [[0] * n for _ in range(n)]
    for k, (b, mult) in enumerate(layout):
        row = M[k]
        for e, c in gs[b].items():
            row[cidx[(e[0] + mult[0], e[1] + mult[1], e[2] + mult[2])]] += c
        if s:
            cube = [0, 0, 0]
            cube[b] = 3
            row[cidx[(cube[0] + mult[0], cube[1] + mult[1], cube[2] + mult[2])]] += s
    return M


def _minor(M, idx):
    return [[M[r][c] for c in idx] for r in idx]


def _integer_cubics(gs: Sequence[TernaryForm]) -> tuple[list[dict], Fraction]:
    """Clear denominators per form; returns integer coefficient dicts and the correction factor."""
    ints, scale = [], Fraction(1)
    for g in gs:
        L = g.denominator_lcm()
        ints.append({e: int(c * L) for e, c in g.coeffs.items()})
        scale /= Fraction(L) ** 9
    return ints, scale


def _lagrange_at_zero(points: Sequence[tuple[int, Fraction]]) -> Fraction:
    total = Fraction(0)
    for j, (sj, vj) in enumerate(points):
        term = Fraction(vj)
        for k, (sk, _) in enumerate(points):
            if k != j:
                term *= Fraction(-sk, sj - sk)
        total += term
    return total


def _resultant_int(gs: Sequence[dict]) -> int:
    _, nonreduced = _macaulay_layout()
    if any(not g for g in gs):
        return 0
    M = _square_macaulay(gs)
    dprime = det_int(_minor(M, nonreduced))
    if dprime:
        num = det_int(M)
        q, r = divmod(num, dprime)
        if r:
            raise ArithmeticError("Macaulay quotient is not integral")
        return q
    # Perturb g_b -> g_b + s x_b^3; Res(s) has degree <= 27 in s.
    pts: list[tuple[int, Fraction]] = []
    s = 1
    while len(pts) < 28:
        Ms = _square_macaulay(gs, s)
        dp = det_int(_minor(Ms, nonreduced))
        if dp:
            pts.append((s, Fraction(det_int(Ms), dp)))
        s += 1
    value = _lagrange_at_zero(pts)
    if value.denominator != 1:
        raise ArithmeticError("perturbed resultant did not interpolate to an integer")
    return value.numerator


def resultant(FX: TernaryForm, FY: TernaryForm, FZ: TernaryForm) -> Fraction:
    """Macaulay resultant of three ternary cubics, normalised by ``Res(x^3, y^3, z^3) = 1``.

    Computed as ``det(M)/det(M')`` where ``M`` is the 36x36 Macaulay minor and
    ``M'`` its 9x9 extraneous minor.  When ``det(M') = 0`` the forms are
    perturbed by ``s*x_i^3`` and the resultant is interpolated back to ``s = 0``.
    """
    gs = (FX, FY, FZ)
    _check_cubics(gs)
    ints, scale = _integer_cubics(gs)
    return Fraction(_resultant_int(ints)) * scale


# modular verification -----------------------------------------------------------

_PRIMES_CACHE: list[int] = []


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def word_primes(count: int) -> list[int]:
    """Deterministic list of the largest primes below ``2**62``."""
    n = (1 << 62) - 1 if not _PRIMES_CACHE else _PRIMES_CACHE[-1] - 2
    while len(_PRIMES_CACHE) < count:
        if _is_probable_prime(n):
            _PRIMES_CACHE.append(n)
        n -= 2
    return _PRIMES_CACHE[:count]


def _resultant_mod(gs: Sequence[dict], p: int) -> int:
    _, nonreduced = _macaulay_layout()
    M = _square_macaulay(gs)
    dprime = det_mod(_minor(M, nonreduced), p)
    if dprime:
        return det_mod(M, p) * pow(dprime, -1, p) % p
    pts = []
    s = 1
    while len(pts) < 28:
        Ms = _square_macaulay(gs, s)
        dp = det_mod(_minor(Ms, nonreduced), p)
        if dp:
            pts.append((s, det_mod(Ms, p) * pow(dp, -1, p) % p))
        s += 1
    total = 0
    for j, (sj, vj) in enumerate(pts):
        num, den = vj, 1
        for k, (sk, _) in enumerate(pts):
            if k != j:
                num = num * (-sk) % p
                den = den * (sj - sk) % p
        total = (total + num * pow(den, -1, p)) % p
    return total


def _hadamard_bits(M: Sequence[Sequence[int]]) -> int:
    bits = 0.0
    for row in M:
        nrm2 = sum(v * v for v in row)
        if nrm2 == 0:
            return 0
        bits += 0.5 * math.log2(nrm2)
    return int(bits) + 2


def resultant_modular(FX: TernaryForm, FY: TernaryForm, FZ: TernaryForm) -> Fraction:
    """Independent evaluation of :func:`resultant` by CRT over word-size primes.

    Uses the Hadamard bound of the Macaulay minor when the extraneous factor
    is non-zero, and otherwise stops once the symmetric CRT lift is unchanged
    over three further primes.
    """
    gs = (FX, FY, FZ)
    _check_cubics(gs)
    ints, scale = _integer_cubics(gs)
    if any(not g for g in ints):
        return Fraction(0)
    M = _square_macaulay(ints)
    bound_bits = _hadamard_bits(M) + 1
    n_needed = bound_bits // 61 + 1
    value, modulus = 0, 1
    stable, last = 0, None
    k = 0
    while True:
        k += 1
        p = word_primes(k)[-1]
        r = _resultant_mod(ints, p)
        # CRT merge
        t = (r - value) * pow(modulus, -1, p) % p
        value += modulus * t
        modulus *= p
        lifted = value if value <= modulus // 2 else value - modulus
        if k >= n_needed and modulus.bit_length() > bound_bits:
            if bound_bits > 1:
                break
        stable = stable + 1 if lifted == last else 0
        last = lifted
        if stable >= 3:
            break
    return Fraction(lifted) * scale


# discriminant ------------------------------------------------------------------


def discriminant(F: TernaryForm) -> Fraction:
    """``Res(F_X, F_Y, F_Z)``; zero exactly when the quartic is singular."""
    return resultant(*partial_derivatives(F))


def discriminant_modular(F: TernaryForm) -> Fraction:
    return resultant_modular(*partial_derivatives(F))


def is_smooth(F: TernaryForm) -> bool:
    return discriminant(F) != 0


def det3(B: Sequence[Sequence]) -> Fraction:
    B = [[Fraction(v) for v in r] for r in B]
    return (
        B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1])
        - B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0])
        + B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0])
    )


def inverse3(B: Sequence[Sequence]) -> list[list[Fraction]]:
    B = [[Fraction(v) for v in r] for r in B]
    d = det3(B)
    if d == 0:
        raise ZeroDivisionError("singular 3x3 matrix")
    cof = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            m = B[rows[0]][cols[0]] * B[rows[1]][cols[1]] - B[rows[0]][cols[1]] * B[rows[1]][cols[0]]
            cof[i][j] = (-1) ** (i + j) * m
    return [[cof[j][i] / d for j in range(3)] for i in range(3)]


def covariance_exponent(F: TernaryForm, B: Sequence[Sequence]) -> Optional[int]:
    """Integer ``e`` with ``Discr(F∘B) = det(B)^e Discr(F)``, if one exists."""
    d0 = discriminant(F)
    d1 = discriminant(substitute_linear(F, B))
    dB = det3(B)
    if d0 == 0 or dB == 0 or abs(dB) == 1:
        return None
    ratio = d1 / d0
    e = round(math.log(abs(ratio.numerator) / ratio.denominator) / math.log(abs(dB.numerator) / dB.denominator)) if ratio else None
    if e is not None and dB**e == ratio:
        return e
    return None


# a few named quartics used across the package ---------------------------------


def fermat_quartic() -> TernaryForm:
    return X**4 + Y**4 + Z**4


def klein_quartic() -> TernaryForm:
    return X**3 * Y + Y**3 * Z + Z**3 * X


def form_from_terms(degree: int, terms: Iterable[tuple[Exponent, object]]) -> TernaryForm:
    return TernaryForm(degree, {tuple(e): Fraction(c) for e, c in terms})
