"""Siegel points of degree 3, the action of Sp6(Z) on them, and practical reduction.

A symplectic matrix ``g = [[A, B], [C, D]]`` acts by
``tau -> (A tau + B)(C tau + D)^-1`` with cocycle ``det(C tau + D)``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import mp

from .arith import GUARD_DIGITS, BigComplex, format_complex, mpf_to_fraction, parse_complex
from .errors import ConsistencyError, PrecisionError
from .lattice import lll_gram

G = 3
IntMat = tuple[tuple[int, ...], ...]


# matrix helpers (3x3, mpmath scalars) -------------------------------------------


def _mat(rows) -> list[list]:
    return [list(r) for r in rows]


def matmul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return [[sum((a[i][t] * b[t][j] for t in range(1, k)), a[i][0] * b[0][j]) for j in range(m)] for i in range(n)]


def matadd(a, b):
    return [[a[i][j] + b[i][j] for j in range(len(a[0]))] for i in range(len(a))]


def transpose(a):
    return [list(r) for r in zip(*a)]


def det3(a):
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def inv3(a):
    d = det3(a)
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != i]
            c = [x for x in range(3) if x != j]
            m = a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]]
            cof[i][j] = m if (i + j) % 2 == 0 else -m
    return [[cof[j][i] / d for j in range(3)] for i in range(3)], d


def smallest_eigenvalue(Y) -> mpmath.mpf:
    """Smallest eigenvalue of a real symmetric 3x3 matrix."""
    ev = mpmath.eigsy(mpmath.matrix(Y), eigvals_only=True)
    return min(ev)


# Siegel points -------------------------------------------------------------------


class InvalidTauError(ValueError):
    """Matrix is not symmetric with positive definite imaginary part."""


def _exact_positive_definite(Y) -> bool:
    """LDL^T with exact rational pivots on the stored binary values."""
    a = [[mpf_to_fraction(mpmath.mpf(v)) for v in row] for row in Y]
    n = len(a)
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k + 1, n):
                a[i][j] -= f * a[k][j]
    return True


@dataclass(frozen=True, eq=False)
class SiegelPoint:
    """Symmetric complex 3x3 matrix with positive definite imaginary part."""

    tau: tuple[tuple[mpmath.mpc, ...], ...]
    prec: int

    def __post_init__(self):
        with mp.workdps(self.prec + GUARD_DIGITS):
            t = [[mpmath.mpc(self.tau[i][j]) for j in range(G)] for i in range(G)]
        sym = tuple(tuple(t[min(i, j)][max(i, j)] for j in range(G)) for i in range(G))
        object.__setattr__(self, "tau", sym)
        if not _exact_positive_definite(self.imag()):
            raise InvalidTauError("imaginary part of tau is not positive definite")

    @classmethod
    def from_matrix(cls, rows, prec: int) -> "SiegelPoint":
        with mp.workdps(prec + GUARD_DIGITS):
            t = tuple(tuple(mpmath.mpc(v.value if isinstance(v, BigComplex) else v) for v in r) for r in rows)
        return cls(t, prec)

    def matrix(self) -> list[list]:
        return [list(r) for r in self.tau]

    def real(self):
        return [[v.real for v in r] for r in self.tau]

    def imag(self):
        return [[v.imag for v in r] for r in self.tau]

    def lambda_min(self) -> mpmath.mpf:
        with mp.workdps(30):
            return smallest_eigenvalue(self.imag())

    def det_imag(self):
        with mp.workdps(self.prec + GUARD_DIGITS):
            return det3(self.imag())

    def entry(self, i, j) -> BigComplex:
        return BigComplex(self.tau[i][j], self.prec)

    def with_prec(self, prec: int) -> "SiegelPoint":
        return SiegelPoint(self.tau, prec)


def scalar_tau(z, prec: int) -> SiegelPoint:
    """``z * Identity``."""
    return SiegelPoint.from_matrix([[z if i == j else 0 for j in range(G)] for i in range(G)], prec)


def format_tau(tau: SiegelPoint) -> str:
    lines = []
    for i in range(G):
        for j in range(i, G):
            lines.append(f"{i + 1} {j + 1} {format_complex(tau.entry(i, j))}")
    return "\n".join(lines) + "\n"


def parse_tau(text: str) -> SiegelPoint:
    entries = {}
    prec = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^(\d)\s+(\d)\s+(.+)$", line)
        if not m:
            raise ValueError(f"bad tau line: {raw!r}")
        i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
        if not (0 <= i <= j < G):
            raise ValueError(f"tau entries must satisfy 1 <= i <= j <= 3: {raw!r}")
        z = parse_complex(m.group(3))
        prec = z.prec if prec is None else min(prec, z.prec)
        entries[(i, j)] = z
    if len(entries) != 6:
        raise ValueError("tau file must list the 6 upper-triangle entries")
    rows = [[entries[(min(i, j), max(i, j))] for j in range(G)] for i in range(G)]
    return SiegelPoint.from_matrix(rows, prec)


# symplectic matrices ----------------------------------------------------------------


def _imat(m) -> IntMat:
    return tuple(tuple(int(v) for v in r) for r in m)


def _ident(n=G):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _zero(n=G):
    return [[0] * n for _ in range(n)]


@dataclass(frozen=True)
class SymplecticMatrix:
    A: IntMat
    B: IntMat
    C: IntMat
    D: IntMat

    def __post_init__(self):
        for name in "ABCD":
            object.__setattr__(self, name, _imat(getattr(self, name)))
        g = self.grid()
        J = _jmat()
        if matmul(matmul(transpose(g), J), g) != J:
            raise ValueError("matrix is not symplectic")

    @classmethod
    def from_grid(cls, g) -> "SymplecticMatrix":
        g = [list(r) for r in g]
        return cls(
            [r[:G] for r in g[:G]], [r[G:] for r in g[:G]], [r[:G] for r in g[G:]], [r[G:] for r in g[G:]]
        )

    @classmethod
    def identity(cls) -> "SymplecticMatrix":
        return cls(_ident(), _zero(), _zero(), _ident())

    @classmethod
    def J(cls) -> "SymplecticMatrix":
        return cls(_zero(), _ident(), [[-v for v in r] for r in _ident()], _zero())

    @classmethod
    def shift(cls, S) -> "SymplecticMatrix":
        """``tau -> tau + S`` for a symmetric integer ``S``."""
        return cls(_ident(), S, _zero(), _ident())

    @classmethod
    def embed_gl(cls, U) -> "SymplecticMatrix":
        """``tau -> U^T tau U`` for unimodular integer ``U``."""
        Ui = _int_inverse(U)
        return cls(transpose(U), _zero(), _zero(), Ui)

    @classmethod
    def quasi_inversion(cls, k: int) -> "SymplecticMatrix":
        """Inversion in coordinate ``k``: ``tau_kk -> -1/tau_kk`` on the corresponding block."""
        A = _ident()
        A[k][k] = 0
        B = _zero()
        B[k][k] = -1
        C = _zero()
        C[k][k] = 1
        return cls(A, B, C, [r[:] for r in A])

    def grid(self) -> list[list[int]]:
        return [list(a) + list(b) for a, b in zip(self.A, self.B)] + [list(c) + list(d) for c, d in zip(self.C, self.D)]

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix.from_grid(matmul(self.grid(), other.grid()))

    def inverse(self) -> "SymplecticMatrix":
        T = transpose
        return SymplecticMatrix(T(self.D), [[-v for v in r] for r in T(self.B)], [[-v for v in r] for r in T(self.C)], T(self.A))

    def is_identity(self) -> bool:
        return self.grid() == _ident(2 * G)


def _jmat():
    J = [[0] * (2 * G) for _ in range(2 * G)]
    for i in range(G):
        J[i][G + i] = 1
        J[G + i][i] = -1
    return J


def _int_inverse(U) -> list[list[int]]:
    F = [[Fraction(v) for v in r] for r in U]
    inv, d = inv3(F)
    if abs(d) != 1:
        raise ValueError("matrix is not unimodular")
    return [[int(v) for v in r] for r in inv]


def format_symplectic(g: SymplecticMatrix) -> str:
    return "\n".join(" ".join(f"{v:d}" for v in row) for row in g.grid()) + "\n"


def parse_symplectic(text: str) -> SymplecticMatrix:
    rows = [[int(v) for v in line.split()] for line in text.splitlines() if line.strip()]
    if len(rows) != 2 * G or any(len(r) != 2 * G for r in rows):
        raise ValueError("expected a 6x6 integer grid")
    return SymplecticMatrix.from_grid(rows)


# action ------------------------------------------------------------------------------


def act(gamma: SymplecticMatrix, tau: SiegelPoint, prec: Optional[int] = None) -> tuple[SiegelPoint, BigComplex]:
    """Return ``((A tau + B)(C tau + D)^-1, det(C tau + D))``."""
    p = tau.prec if prec is None else prec
    with mp.workdps(p + GUARD_DIGITS):
        t = tau.matrix()
        num = matadd(matmul(gamma.A, t), gamma.B)
        den = matadd(matmul(gamma.C, t), gamma.D)
        d = det3(den)
        scale = max(max(abs(v) for v in r) for r in den)
        if abs(d) < mpmath.mpf(10) ** (-(p // 2)) * max(scale, 1) ** 3:
            raise PrecisionError("C tau + D is numerically singular at this precision")
        dinv, _ = inv3(den)
        new = matmul(num, dinv)
        # symmetrize explicitly: average the two triangles
        sym = [[(new[i][j] + new[j][i]) / 2 for j in range(G)] for i in range(G)]
        return SiegelPoint(tuple(tuple(r) for r in sym), p), BigComplex(d, p)


def cocycle(gamma: SymplecticMatrix, tau: SiegelPoint, prec: Optional[int] = None) -> BigComplex:
    p = tau.prec if prec is None else prec
    with mp.workdps(p + GUARD_DIGITS):
        return BigComplex(det3(matadd(matmul(gamma.C, tau.matrix()), gamma.D)), p)


# reduction ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionResult:
    tau_reduced: SiegelPoint
    gamma: SymplecticMatrix
    cocycle: BigComplex
    iterations: int


REDUCE_TOL = mpmath.mpf("1e-10")


def reduce(tau: SiegelPoint, prec: Optional[int] = None, max_iter: int = 200) -> ReductionResult:
    """Move ``tau`` toward the Siegel fundamental domain.

    Each round applies an LLL reduction of ``Im tau`` (delta 0.99), an integer
    shift of ``Re tau`` into ``[-1/2, 1/2]`` and then the coordinate
    quasi-inversion with the smallest ``|tau_kk| < 1``, which multiplies
    ``det Im tau`` by ``1/|tau_kk|^2``.  Stops when no quasi-inversion gains more
    than ``1e-10`` relative; exceeding ``max_iter`` rounds raises.
    """
    p = tau.prec if prec is None else prec
    gamma = SymplecticMatrix.identity()
    cur = tau.with_prec(p)
    for it in range(1, max_iter + 1):
        U = lll_gram(cur.imag())
        if U != _ident():
            g = SymplecticMatrix.embed_gl(U)
            cur, _ = act(g, cur, p)
            gamma = g @ gamma
        with mp.workdps(p + GUARD_DIGITS):
            S = [[-int(mpmath.nint(cur.tau[i][j].real)) for j in range(G)] for i in range(G)]
        if any(any(r) for r in S):
            g = SymplecticMatrix.shift(S)
            cur, _ = act(g, cur, p)
            gamma = g @ gamma
        with mp.workdps(30):
            mags = [abs(cur.tau[k][k]) for k in range(G)]
        k = min(range(G), key=lambda i: mags[i])
        if mags[k] ** 2 >= 1 / (1 + REDUCE_TOL):
            break
        g = SymplecticMatrix.quasi_inversion(k)
        cur, _ = act(g, cur, p)
        gamma = g @ gamma
    else:
        raise ConsistencyError(f"reduction did not settle within {max_iter} rounds")
    tau_red, cyc = act(gamma, tau.with_prec(p), p)
    return ReductionResult(tau_red, gamma, cyc, it)


# random words ---------------------------------------------------------------------------


def _random_unimodular(rng: random.Random) -> list[list[int]]:
    U = _ident()
    i, j = rng.sample(range(G), 2)
    U[i][j] = rng.choice((-1, 1))
    if rng.random() < 0.3:
        k = rng.randrange(G)
        U[k][k] = -1
    return U


def _random_shift(rng: random.Random) -> list[list[int]]:
    S = _zero()
    for i in range(G):
        for j in range(i, G):
            S[i][j] = S[j][i] = rng.choice((-1, 0, 1))
    if not any(any(r) for r in S):
        S[0][0] = 1
    return S


def random_symplectic(word_length: int, seed: int) -> SymplecticMatrix:
    """Deterministic product of ``word_length`` generators: J, small shifts, GL3(Z) embeddings."""
    if word_length < 0:
        raise ValueError("word_length must be non-negative")
    rng = random.Random(seed)
    g = SymplecticMatrix.identity()
    for _ in range(word_length):
        kind = rng.randrange(3)
        if kind == 0:
            h = SymplecticMatrix.J()
        elif kind == 1:
            h = SymplecticMatrix.shift(_random_shift(rng))
        else:
            h = SymplecticMatrix.embed_gl(_random_unimodular(rng))
        g = h @ g
    return g


def random_reduced_tau(seed: int, prec: int) -> SiegelPoint:
    """A pseudo-random point, already passed through :func:`reduce`."""
    rng = random.Random(seed)
    with mp.workdps(prec + GUARD_DIGITS):
        M = [[mpmath.mpf(rng.uniform(-1, 1)) for _ in range(G)] for _ in range(G)]
        Y = matmul(transpose(M), M)
        for i in range(G):
            Y[i][i] += mpmath.mpf(rng.uniform(0.8, 1.5))
        Xr = [[mpmath.mpf(rng.uniform(-0.5, 0.5)) for _ in range(G)] for _ in range(G)]
        rows = [[mpmath.mpc(Xr[min(i, j)][max(i, j)], Y[i][j]) for j in range(G)] for i in range(G)]
    return reduce(SiegelPoint(tuple(tuple(r) for r in rows), prec)).tau_reduced
