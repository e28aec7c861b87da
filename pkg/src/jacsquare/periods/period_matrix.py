"""Monodromy, homology and the period matrix of a smooth plane quartic."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import gmpy2
import mpmath
import numpy as np
from mpmath import mp

from ..arith import GUARD_DIGITS, BigComplex
from ..errors import ConsistencyError, PrecisionError
from ..siegel import InvalidTauError, SiegelPoint, inv3, matmul
from .continuation import match_permutation, step_roots, track
from .curve import AffineCurve, discriminant_points, fiber_roots
from .homology import (
    CoverGraph,
    Perm,
    compose,
    inverse,
    is_transitive,
    mat_congruence,
    riemann_hurwitz_genus,
    skew_reduce,
    standard_J,
    symplectic_basis,
)
from .fast import FastPoly, digits_to_bits, from_gmp, to_gmp
from .quadrature import gauss_legendre_gmp, plan

CIRCLE_VERTICES = 6
INFINITY_VERTICES = 64
RADIUS_FRACTION = 0.4
XI_LABELS = ("x dx/f_y", "y dx/f_y", "dx/f_y")


# base point and loop geometry ---------------------------------------------------


def _segment_distance(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    t = ((p - a) * ab.conjugate()).real / abs(ab) ** 2
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * ab))


def clearance(b: complex, pts: Sequence[complex]) -> float:
    """Distance from the star of segments ``[b, x_j]`` to the other branch points."""
    best = min(abs(b - x) for x in pts)
    for j, xj in enumerate(pts):
        for k, xk in enumerate(pts):
            if j != k:
                best = min(best, _segment_distance(xk, b, xj))
    return best


def choose_base_point(pts: Sequence[complex], grid: int = 24, rank: int = 0) -> complex:
    """Grid point with maximal clearance; ``rank`` selects the next best candidates.

    The grid spans the bounding box of the branch points (padded by 1) and uses
    dyadic coordinates so the base point is exact in binary.
    """
    re = [z.real for z in pts]
    im = [z.imag for z in pts]
    lo_r, hi_r = min(re) - 1, max(re) + 1
    lo_i, hi_i = min(im) - 1, max(im) + 1
    cands = []
    for a in range(grid + 1):
        for c in range(grid + 1):
            u = round((lo_r + (hi_r - lo_r) * a / grid) * 64) / 64
            v = round((lo_i + (hi_i - lo_i) * c / grid) * 64) / 64
            b = complex(u, v)
            cands.append((-clearance(b, pts), abs(b), u, v))
    cands.sort()
    _, _, u, v = cands[rank]
    return complex(u, v)


@dataclass
class Loop:
    """Loop around ``center``: segment to ``start``, ccw polygon of radius ``radius``, back."""

    center: object
    start: object
    radius: float
    arg: float

    def polygon(self, m: int = CIRCLE_VERTICES) -> list:
        theta0 = cmath.phase(complex(self.start - self.center))
        pts = [self.start]
        for j in range(1, m):
            pts.append(self.center + self.radius * mpmath.expjpi(mpmath.mpf(theta0) / mpmath.pi + mpmath.mpf(2 * j) / m))
        pts.append(self.start)
        return pts


def build_loops(base, pts: Sequence) -> tuple[list[Loop], float]:
    """Loops ordered by argument starting just after the widest angular gap.

    Returns the loops and the direction of the ray to infinity used for the
    independent monodromy at infinity.
    """
    b = complex(base)
    fpts = [complex(x) for x in pts]
    args = [cmath.phase(x - b) for x in fpts]
    order = sorted(range(len(pts)), key=lambda k: args[k])
    sorted_args = [args[k] for k in order]
    gaps = [(sorted_args[(i + 1) % len(order)] - sorted_args[i]) % (2 * math.pi) for i in range(len(order))]
    if len(order) == 1:
        gaps = [2 * math.pi]
    if min(gaps) < 1e-9 and len(order) > 1:
        raise PrecisionError("two branch points are aligned with the base point")
    g = max(range(len(gaps)), key=lambda i: gaps[i])
    theta_inf = sorted_args[g] + gaps[g] / 2
    order = order[g + 1:] + order[: g + 1]
    loops = []
    for k in order:
        x = fpts[k]
        others = [abs(x - y) for j, y in enumerate(fpts) if j != k]
        rho = min([RADIUS_FRACTION * min(others)] if others else [1.0])
        rho = min(rho, 0.5 * abs(x - b))
        rho = round(rho, 6)
        u = (b - x) / abs(b - x)
        start = pts[k] + mpmath.mpf(rho) * mpmath.mpc(u)
        loops.append(Loop(center=pts[k], start=start, radius=rho, arg=args[k]))
    return loops, theta_inf


# monodromy ---------------------------------------------------------------------------


@dataclass
class MonodromyData:
    base_point: BigComplex
    discriminant_points: list          # BigComplex, in loop order
    permutations: list                 # one Perm per loop
    infinity: Perm                     # monodromy of a ccw loop enclosing all branch points
    sheets: list                       # roots at the base point, in sheet order
    loops: list = field(default_factory=list, repr=False)
    theta_inf: float = 0.0
    genus: int = 0

    @property
    def product(self) -> Perm:
        out = tuple(range(len(self.sheets)))
        for p in self.permutations:
            out = compose(p, out)
        return out

    def sphere_relation_holds(self) -> bool:
        return self.product == self.infinity

    @property
    def infinity_inverse(self) -> Perm:
        """Monodromy around x = oo, oriented as a loop around that point."""
        return inverse(self.infinity)


def infinity_monodromy(curve: AffineCurve, base, sheets, pts, theta_inf: float) -> Perm:
    """Double-precision tracking around a circle enclosing every branch point."""
    b = complex(base)
    R = 2 * max(abs(complex(x) - b) for x in pts) + 1
    path = [b] + [b + R * cmath.exp(1j * (theta_inf + 2 * math.pi * j / INFINITY_VERTICES)) for j in range(INFINITY_VERTICES)]
    path += [path[1], b]
    cur = np.array([complex(y) for y in sheets])
    for x0, x1 in zip(path, path[1:]):
        cur = step_roots(curve, x0, cur, x1)
    return match_permutation([complex(y) for y in sheets], list(cur))


@dataclass
class _LoopIntegrals:
    perm: Perm
    integrals: list   # per sheet: [I_x, I_y, I_1]


def _integrate_path(curve, vertices, start_roots, singularities, digits, p):
    """Track roots along a polyline and integrate the xi-basis on every track.

    Runs in gmpy2 at ``p + GUARD_DIGITS`` digits; returns the end roots and, per
    track, the integrals of ``(x, y, 1) dx / f_y`` as mpmath numbers.
    """
    bits = digits_to_bits(p + GUARD_DIGITS)
    fp = _fast_poly(curve, bits)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        verts = [to_gmp(v) for v in vertices]
        cur = np.array([complex(y) for y in start_roots])
        xprev = complex(verts[0])
        d = len(start_roots)
        acc = [[gmpy2.mpc(0)] * 3 for _ in range(d)]
        ys = None
        for u, v in zip(verts, verts[1:]):
            for t0, t1, n in plan(complex(u), complex(v), singularities, digits):
                a = u + (v - u) * t0 if t0 else u
                c = u + (v - u) * t1 if t1 != 1 else v
                nodes, weights = gauss_legendre_gmp(n, bits)
                mid, half = (a + c) / 2, (c - a) / 2
                for t, w in zip(nodes, weights):
                    x = mid + half * t
                    xf = complex(x)
                    cur = step_roots(curve, xprev, cur, xf)
                    xprev = xf
                    cf = fp.coeffs(x)
                    wh = w * half
                    ys = []
                    for s in range(d):
                        y, fy = fp.refine(cf, complex(cur[s]), p)
                        ys.append(y)
                        q = wh / fy
                        row = acc[s]
                        row[0] += x * q
                        row[1] += y * q
                        row[2] += q
                    cur = np.array([complex(y) for y in ys])
        # land exactly on the final vertex
        xf = complex(verts[-1])
        cur = step_roots(curve, xprev, cur, xf)
        cf = fp.coeffs(verts[-1])
        end = [fp.refine(cf, complex(cur[s]), p)[0] for s in range(d)]
        end_mp = [from_gmp(y) for y in end]
        acc_mp = [[from_gmp(v) for v in row] for row in acc]
    return end_mp, acc_mp


def _fast_poly(curve, bits):
    cache = curve.__dict__.setdefault("_fast_cache", {})
    if bits not in cache:
        cache[bits] = FastPoly(curve.y_coeffs, bits)
    return cache[bits]


def _loop_integrals(curve, base, sheets, loop: Loop, pts, digits, p) -> _LoopIntegrals:
    seg_end, seg = _integrate_path(curve, [base, loop.start], sheets, pts, digits, p)
    circ_end, circ = _integrate_path(curve, loop.polygon(), seg_end, pts, digits, p)
    perm = match_permutation(seg_end, circ_end)
    out = []
    for s in range(len(sheets)):
        t = perm[s]
        out.append([seg[s][i] + circ[s][i] - seg[t][i] for i in range(3)])
    return _LoopIntegrals(perm, out)


def monodromy(curve: AffineCurve, p: int, base_point=None, integrate: bool = False):
    """Monodromy of the x-projection; with ``integrate`` also the lifted loop integrals."""
    with mp.workdps(p + GUARD_DIGITS):
        pts = discriminant_points(curve, p)
        base = mpmath.mpc(choose_base_point([complex(x) for x in pts]) if base_point is None else base_point)
        sheets = fiber_roots(curve, base, p)
        loops, theta_inf = build_loops(base, pts)
        digits = p + 5
        perms, integrals = [], []
        for loop in loops:
            if integrate:
                li = _loop_integrals(curve, base, sheets, loop, [complex(x) for x in pts], digits, p)
                perms.append(li.perm)
                integrals.append(li.integrals)
            else:
                seg_end = track(curve, [base, loop.start], sheets, p)[-1]
                circ_end = track(curve, loop.polygon(), seg_end, p)[-1]
                perms.append(match_permutation(seg_end, circ_end))
        inf = infinity_monodromy(curve, base, sheets, pts, theta_inf)
        d = len(sheets)
        data = MonodromyData(
            base_point=BigComplex(base, p),
            discriminant_points=[BigComplex(l.center, p) for l in loops],
            permutations=perms,
            infinity=inf,
            sheets=[BigComplex(y, p) for y in sheets],
            loops=loops,
            theta_inf=theta_inf,
        )
        if not data.sphere_relation_holds():
            raise ConsistencyError("monodromy sphere relation fails")
        if not is_transitive(perms, d):
            raise ConsistencyError("monodromy group is not transitive")
        data.genus = riemann_hurwitz_genus(perms, inverse(inf), d)
    return (data, integrals) if integrate else data


# homology -----------------------------------------------------------------------


@dataclass
class HomologyBasis:
    graph: CoverGraph
    fundamental: list            # closed walks
    K: list                      # their intersection matrix
    change_of_basis: list        # unimodular m x m, first 6 columns are the symplectic cycles
    cycles: list                 # 6 integer vectors over lifted loops, order a1 a2 a3 b1 b2 b3
    intersection: list           # 6 x 6, equal to J
    genus: int


def homology_basis(m: MonodromyData, variant: int = 0) -> HomologyBasis:
    """Symplectic basis of H_1 from the monodromy.

    ``variant`` selects the spanning-tree root sheet and the pivot order of the
    reduction, producing different (equally valid) bases.
    """
    d = len(m.sheets)
    graph = CoverGraph(m.permutations, list(range(len(m.permutations))), root=variant % d)
    walks = graph.fundamental_cycles()
    K = graph.intersection_matrix(walks)
    U, divisors, _ = skew_reduce(K, reverse=bool(variant % 2))
    g = len(divisors)
    if g != m.genus:
        raise ConsistencyError(f"intersection rank {2 * g} does not match genus {m.genus}")
    if any(x != 1 for x in divisors):
        raise ConsistencyError(f"intersection form is not unimodular: {divisors}")
    order = [2 * i for i in range(g)] + [2 * i + 1 for i in range(g)]
    mcount = len(walks)
    Usel = [[U[r][c] for c in order] for r in range(mcount)]
    inter = mat_congruence(Usel, K)
    if inter != standard_J(g):
        raise ConsistencyError("symplectic reduction failed")
    vecs = [graph.walk_vector(w) for w in walks]
    cycles = []
    for c in range(2 * g):
        v = [0] * len(graph.edges)
        for r in range(mcount):
            if Usel[r][c]:
                for e in range(len(v)):
                    v[e] += Usel[r][c] * vecs[r][e]
        cycles.append(v)
    ordered_U = [[U[r][c] for c in order + [c for c in range(mcount) if c >= 2 * g]] for r in range(mcount)]
    return HomologyBasis(graph, walks, K, ordered_U, cycles, inter, g)


# period matrix -------------------------------------------------------------------------


@dataclass
class PeriodData:
    curve: AffineCurve
    monodromy: MonodromyData
    homology: HomologyBasis
    Omega1: list
    Omega2: list
    tau: SiegelPoint
    prec: int
    xi_basis: tuple = XI_LABELS
    symmetry_error: float = 0.0

    @property
    def transform(self):
        return self.curve.transform


def _cycle_integrals(cycles, loop_integrals, d):
    out = []
    for v in cycles:
        tot = [mpmath.mpc(0)] * 3
        for e, c in enumerate(v):
            if c:
                k, s = divmod(e, d)
                for i in range(3):
                    tot[i] += c * loop_integrals[k][s][i]
        out.append(tot)
    return out


def tau_of(Omega1, Omega2, p: int) -> tuple[SiegelPoint, float]:
    """``Omega1^-1 Omega2`` symmetrized; raises if the Riemann relations fail."""
    with mp.workdps(p + GUARD_DIGITS):
        inv, det = inv3(Omega1)
        if abs(det) < mpmath.mpf(10) ** (-(p // 2)):
            raise PrecisionError("Omega1 is numerically singular")
        T = matmul(inv, Omega2)
        scale = max(1, max(abs(v) for r in T for v in r))
        err = max(abs(T[i][j] - T[j][i]) for i in range(3) for j in range(3)) / scale
        if err > mpmath.mpf(10) ** (-(p - 10)):
            raise ConsistencyError(f"period matrix is not symmetric (error {mpmath.nstr(err, 5)})")
        S = [[(T[i][j] + T[j][i]) / 2 for j in range(3)] for i in range(3)]
        try:
            tau = SiegelPoint.from_matrix(S, p)
        except InvalidTauError as exc:
            raise ConsistencyError(f"Im tau is not positive definite: {exc}") from exc
    return tau, float(err)


def period_matrix(curve: AffineCurve, p: int, base_point=None, variant: int = 0) -> PeriodData:
    """Periods of ``(x, y, 1) dx / f_y`` over a symplectic basis, and ``tau``."""
    with mp.workdps(p + GUARD_DIGITS):
        mono, loop_ints = monodromy(curve, p, base_point=base_point, integrate=True)
        hb = homology_basis(mono, variant=variant)
        d = len(mono.sheets)
        cyc = _cycle_integrals(hb.cycles, loop_ints, d)
        g = hb.genus
        Omega1 = [[cyc[j][i] for j in range(g)] for i in range(3)]
        Omega2 = [[cyc[g + j][i] for j in range(g)] for i in range(3)]
        tau, err = tau_of(Omega1, Omega2, p)
        return PeriodData(
            curve=curve,
            monodromy=mono,
            homology=hb,
            Omega1=[[BigComplex(v, p) for v in r] for r in Omega1],
            Omega2=[[BigComplex(v, p) for v in r] for r in Omega2],
            tau=tau,
            prec=p,
            symmetry_error=err,
        )
