"""Combinatorial homology of the x-projection and integral symplectic reduction.

The curve is cut along rays leaving each branch point away from the base point;
every sheet then becomes a disk containing the base point, and the lifted loop
``(k, s)`` becomes a chord joining the disk of sheet ``s`` to the disk of sheet
``sigma_k(s)``.  Cycles are closed walks in this graph.  Intersection numbers are
read off from how chords of the two cycles interleave on each disk boundary.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

Perm = tuple[int, ...]


def cycle_count(perm: Perm) -> int:
    seen, count = set(), 0
    for s in range(len(perm)):
        if s not in seen:
            count += 1
            while s not in seen:
                seen.add(s)
                s = perm[s]
    return count


def compose(p: Perm, q: Perm) -> Perm:
    """``p ∘ q``: apply ``q`` first."""
    return tuple(p[q[s]] for s in range(len(q)))


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for s, t in enumerate(p):
        out[t] = s
    return tuple(out)


def is_transitive(perms: Sequence[Perm], d: int) -> bool:
    seen, todo = {0}, [0]
    while todo:
        s = todo.pop()
        for p in perms:
            for t in (p[s], inverse(p)[s]):
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
    return len(seen) == d


def riemann_hurwitz_genus(perms: Sequence[Perm], infinity: Perm, d: int) -> int:
    b = sum(d - cycle_count(p) for p in perms) + d - cycle_count(infinity)
    if b % 2:
        raise ValueError("odd total ramification")
    return 1 - d + b // 2


class CoverGraph:
    """Sheets as nodes, lifted loops ``(k, s)`` as edges ``s -> sigma_k(s)``."""

    def __init__(self, perms: Sequence[Perm], ranks: Sequence[int], root: int = 0):
        self.perms = [tuple(p) for p in perms]
        self.ranks = list(ranks)
        self.n = len(perms)
        self.d = len(perms[0])
        self.root = root
        self.edges = [(k, s) for k in range(self.n) for s in range(self.d)]
        self._spanning_tree()

    def edge_index(self, k: int, s: int) -> int:
        return k * self.d + s

    def head(self, e: int) -> int:
        k, s = self.edges[e]
        return self.perms[k][s]

    def tail(self, e: int) -> int:
        return self.edges[e][1]

    def _spanning_tree(self):
        parent = {self.root: None}  # node -> (edge, direction) leading to it from its parent
        queue = deque([self.root])
        while queue:
            u = queue.popleft()
            for e in range(len(self.edges)):
                for a, b, sgn in ((self.tail(e), self.head(e), 1), (self.head(e), self.tail(e), -1)):
                    if a == u and b not in parent:
                        parent[b] = (e, sgn)
                        queue.append(b)
        if len(parent) != self.d:
            raise ValueError("monodromy is not transitive")
        self.parent = parent
        self.tree_edges = {v[0] for v in parent.values() if v is not None}

    def _to_root(self, v: int) -> list[tuple[int, int]]:
        """Walk from ``v`` up to the root as (edge, direction) steps."""
        steps = []
        while self.parent[v] is not None:
            e, sgn = self.parent[v]
            steps.append((e, -sgn))
            v = self.tail(e) if sgn == 1 else self.head(e)
        return steps

    def _from_root(self, v: int) -> list[tuple[int, int]]:
        return [(e, -sgn) for e, sgn in reversed(self._to_root(v))]

    def fundamental_cycles(self) -> list[list[tuple[int, int]]]:
        """One closed walk (based at the root sheet) per non-tree edge."""
        cycles = []
        for e in range(len(self.edges)):
            if e in self.tree_edges:
                continue
            walk = self._from_root(self.tail(e)) + [(e, 1)] + self._to_root(self.head(e))
            cycles.append(walk)
        return cycles

    def walk_vector(self, walk) -> list[int]:
        v = [0] * len(self.edges)
        for e, sgn in walk:
            v[e] += sgn
        return v

    # intersection numbers --------------------------------------------------------

    def _chords(self, walk, r: int):
        """Chords ``(disk, entry, exit)`` of a closed walk; boundary positions are tuples."""
        ends = []  # per step: (exit disk, exit pos, entry disk, entry pos)
        for e, sgn in walk:
            k, s = self.edges[e]
            t = self.perms[k][s]
            minus, plus = (self.ranks[k], 0, -r), (self.ranks[k], 1, r)
            if sgn == 1:
                ends.append((s, minus, t, plus))
            else:
                ends.append((t, plus, s, minus))
        chords = []
        L = len(ends)
        for i in range(L):
            _, _, disk, entry = ends[i]
            disk2, exit_, _, _ = ends[(i + 1) % L]
            if disk != disk2:
                raise ValueError("walk is not closed")
            chords.append((disk, entry, exit_))
        return chords

    def intersection(self, wa, wb) -> int:
        ca, cb = self._chords(wa, 1), self._chords(wb, 2)
        total = 0
        for da, a1, a2 in ca:
            for db, b1, b2 in cb:
                if da == db:
                    total += _chord_sign(a1, a2, b1, b2)
        return total

    def intersection_matrix(self, walks) -> list[list[int]]:
        m = len(walks)
        K = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                v = self.intersection(walks[i], walks[j])
                K[i][j], K[j][i] = v, -v
        return K


def _in_arc(x, a1, a2) -> bool:
    if a1 < a2:
        return a1 < x < a2
    return x > a1 or x < a2


def _chord_sign(a1, a2, b1, b2) -> int:
    """+1 when chord b crosses chord a from its right to its left."""
    i1, i2 = _in_arc(b1, a1, a2), _in_arc(b2, a1, a2)
    if i1 and not i2:
        return 1
    if i2 and not i1:
        return -1
    return 0


# integral skew reduction -------------------------------------------------------


def _col_op(K, U, j, i, q):
    """Column j += q * column i, applied congruently to K and to U."""
    n = len(K)
    for r in range(n):
        K[r][j] += q * K[r][i]
    for c in range(n):
        K[j][c] += q * K[i][c]
    for r in range(len(U)):
        U[r][j] += q * U[r][i]


def _swap(K, U, i, j):
    for row in K:
        row[i], row[j] = row[j], row[i]
    K[i], K[j] = K[j], K[i]
    for row in U:
        row[i], row[j] = row[j], row[i]


def _negate(K, U, i):
    for row in K:
        row[i] = -row[i]
    K[i] = [-v for v in K[i]]
    for row in U:
        row[i] = -row[i]


def skew_reduce(K: Sequence[Sequence[int]], reverse: bool = False):
    """Unimodular ``U`` with ``U^T K U`` block diagonal: pairs ``[[0, d], [-d, 0]]`` then zeros.

    Returns ``(U, divisors)``; ``reverse`` changes the pivot search order, giving
    another valid basis.
    """
    n = len(K)
    K = [list(map(int, r)) for r in K]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    divisors = []
    start = 0
    while start < n:
        cand = [(abs(K[i][j]), i, j) for i in range(start, n) for j in range(start, n) if K[i][j]]
        if not cand:
            break
        cand.sort(key=lambda t: (t[0], -t[1], -t[2]) if reverse else t)
        _, i, j = cand[0]
        if K[i][j] < 0:
            i, j = j, i
        _swap(K, U, start, i)
        if j == start:
            j = i
        _swap(K, U, start + 1, j)
        a, b = start, start + 1
        while True:
            changed = False
            for c in range(start + 2, n):
                for piv_row, other in ((a, b), (b, a)):
                    # clear K[piv_row][c] using column other (K[piv_row][other] = +-d)
                    d = K[piv_row][other]
                    if K[piv_row][c]:
                        q = -(K[piv_row][c] // d)
                        if q:
                            _col_op(K, U, c, other, q)
                        if K[piv_row][c]:
                            # remainder smaller than pivot: move it into the pivot position
                            if piv_row == a:
                                _swap(K, U, b, c)
                            else:
                                _swap(K, U, a, c)
                            if K[a][b] < 0:
                                _negate(K, U, b)
                            changed = True
                            break
                if changed:
                    break
            if not changed:
                break
        if K[a][b] < 0:
            _negate(K, U, b)
        divisors.append(K[a][b])
        start += 2
    return U, divisors, K


def symplectic_basis(M: Sequence[Sequence[int]], reverse: bool = False) -> list[list[int]]:
    """Integral ``U`` with ``U^T M U = J = [[0, I], [-I, 0]]`` for a skew unimodular ``M``."""
    n = len(M)
    if n % 2 or any(M[i][j] != -M[j][i] for i in range(n) for j in range(n)):
        raise ValueError("matrix is not skew-symmetric of even size")
    U, divisors, _ = skew_reduce(M, reverse)
    if len(divisors) != n // 2 or any(d != 1 for d in divisors):
        raise ValueError("intersection matrix is not unimodular")
    g = n // 2
    order = [2 * i for i in range(g)] + [2 * i + 1 for i in range(g)]
    return [[U[r][c] for c in order] for r in range(n)]


def mat_congruence(U, K):
    n, m = len(K), len(U[0])
    KU = [[sum(K[i][k] * U[k][j] for k in range(n)) for j in range(m)] for i in range(n)]
    return [[sum(U[k][i] * KU[k][j] for k in range(n)) for j in range(m)] for i in range(m)]


def standard_J(g: int) -> list[list[int]]:
    n = 2 * g
    J = [[0] * n for _ in range(n)]
    for i in range(g):
        J[i][g + i] = 1
        J[g + i][i] = -1
    return J
