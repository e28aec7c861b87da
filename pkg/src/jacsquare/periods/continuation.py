"""Root tracking of ``f(x, y) = 0`` along polylines in the x-plane."""

from __future__ import annotations

from typing import Sequence

import mpmath
import numpy as np
from mpmath import mp

from ..arith import GUARD_DIGITS
from ..errors import PrecisionError
from .curve import AffineCurve, refine_fiber

MIN_STEP = 1e-12
MAX_HALVINGS = 60


def _min_gap(roots: np.ndarray) -> float:
    d = np.abs(roots[:, None] - roots[None, :])
    d[np.diag_indices_from(d)] = np.inf
    return float(d.min())


def _match(prev: np.ndarray, new: np.ndarray):
    """Nearest-neighbour matching; ``None`` unless it is a bijection with small moves."""
    gap = _min_gap(prev)
    d = np.abs(prev[:, None] - new[None, :])
    idx = d.argmin(axis=1)
    if len(set(idx.tolist())) != len(prev):
        return None
    if d[np.arange(len(prev)), idx].max() >= gap / 3:
        return None
    return new[idx]


def step_roots(curve: AffineCurve, x0: complex, roots: np.ndarray, x1: complex) -> np.ndarray:
    """Carry double-precision roots from ``x0`` to ``x1`` with adaptive substeps."""
    out = roots
    a, t, h = complex(x0), 0.0, 1.0
    halvings = 0
    while t < 1.0:
        h = min(h, 1.0 - t)
        x = a + (t + h) * (complex(x1) - a)
        cand = _match(out, np.roots(curve.coeffs_at_float(x)))
        if cand is None:
            h /= 2
            halvings += 1  # consecutive failures only
            if h * abs(complex(x1) - a) < MIN_STEP or halvings > MAX_HALVINGS:
                raise PrecisionError("root tracking step collapsed; path passes too close to a branch point")
            continue
        out = cand
        t += h
        h *= 2
        halvings = 0
    return out


def track(curve: AffineCurve, xs: Sequence, start: Sequence, p: int) -> list[list]:
    """Roots at every point of ``xs`` (high precision), continued from ``start`` at ``xs[0]``.

    ``start`` are the roots at ``xs[0]``; the result has one list of roots per point,
    each root labelled by the track it belongs to.
    """
    cur = np.array([complex(y) for y in start])
    out = [list(start)]
    with mp.workdps(p + GUARD_DIGITS):
        for x_prev, x in zip(xs, xs[1:]):
            cur = step_roots(curve, complex(x_prev), cur, complex(x))
            hp = refine_fiber(curve, x, cur, p)
            cur = np.array([complex(y) for y in hp])
            out.append(hp)
    return out


def match_permutation(start: Sequence, end: Sequence) -> tuple[int, ...]:
    """``perm[s] = t`` when the track that began at root ``s`` ends at root ``start[t]``."""
    perm = []
    for y in end:
        d = [abs(y - z) for z in start]
        t = min(range(len(start)), key=lambda i: d[i])
        perm.append(t)
    if sorted(perm) != list(range(len(start))):
        raise PrecisionError("could not identify the end roots of a closed path")
    return tuple(perm)


def analytic_continue(curve: AffineCurve, path: Sequence, start_roots: Sequence, p: int):
    """Continue ``start_roots`` along the polyline ``path``.

    Returns ``(end_roots, perm)`` where ``end_roots[s]`` is the continuation of
    ``start_roots[s]``; ``perm`` is only meaningful for closed paths and is
    ``None`` otherwise.
    """
    with mp.workdps(p + GUARD_DIGITS):
        pts = [mpmath.mpc(x) for x in path]
        roots = track(curve, pts, [mpmath.mpc(y) for y in start_roots], p)[-1]
        perm = None
        if abs(pts[0] - pts[-1]) == 0:
            perm = match_permutation(list(start_roots), roots)
    return roots, perm
