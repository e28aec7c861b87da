"""LLL reduction of a positive definite Gram matrix."""

from __future__ import annotations

import mpmath
from mpmath import mp


def _gram_schmidt(G, U):
    n = len(U)
    # Gram matrix of the current basis b_i = sum_k U[k][i] e_k (columns of U)
    H = [[sum(U[a][i] * G[a][b] * U[b][j] for a in range(n) for b in range(n)) for j in range(n)] for i in range(n)]
    mu = [[mpmath.mpf(0)] * n for _ in range(n)]
    Bn = [mpmath.mpf(0)] * n
    for i in range(n):
        for j in range(i):
            s = H[i][j]
            for k in range(j):
                s -= mu[j][k] * mu[i][k] * Bn[k]
            mu[i][j] = s / Bn[j]
        s = H[i][i]
        for k in range(i):
            s -= mu[i][k] ** 2 * Bn[k]
        Bn[i] = s
    return mu, Bn


def lll_gram(G, delta: float = 0.99, dps: int = 60) -> list[list[int]]:
    """Unimodular integer ``U`` such that ``U^T G U`` is LLL-reduced.

    ``G`` is a symmetric positive definite matrix (any numeric entries mpmath
    accepts).  The reduced basis vectors are the columns of ``U``.
    """
    n = len(G)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    with mp.workdps(dps):
        Gm = [[mpmath.mpf(G[i][j]) for j in range(n)] for i in range(n)]
        d = mpmath.mpf(delta)
        k = 1
        guard = 0
        while k < n:
            guard += 1
            if guard > 10000:
                raise RuntimeError("LLL did not terminate")
            mu, Bn = _gram_schmidt(Gm, U)
            for j in range(k - 1, -1, -1):
                q = int(mpmath.nint(mu[k][j]))
                if q:
                    for r in range(n):
                        U[r][k] -= q * U[r][j]
                    mu, Bn = _gram_schmidt(Gm, U)
            if Bn[k] >= (d - mu[k][k - 1] ** 2) * Bn[k - 1]:
                k += 1
            else:
                for r in range(n):
                    U[r][k], U[r][k - 1] = U[r][k - 1], U[r][k]
                k = max(k - 1, 1)
    return U
