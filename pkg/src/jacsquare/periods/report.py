"""Plain-text period report: Omega1, Omega2, tau, the coordinate change and the homology basis."""

from __future__ import annotations

from typing import Optional

import mpmath

from .. import __version__
from ..arith import BigComplex, format_complex, parse_complex

CONVENTION = "xi=(x,y,1)dx/f_y; tau=Omega1^-1 Omega2; Omega1 over a-cycles"


def _grid(rows) -> list[str]:
    return ["  " + " ".join(format_complex(v) for v in r) for r in rows]


def format_period_report(pd) -> str:
    lines = [
        "# jacsquare period report",
        f"version: {__version__}",
        f"convention: {CONVENTION}",
        f"precision: {pd.prec}",
        "transform: " + "; ".join(" ".join(str(v) for v in r) for r in pd.curve.transform),
        "base_point: " + format_complex(pd.monodromy.base_point),
        "permutations: " + " ".join("".join(str(s) for s in perm) for perm in pd.monodromy.permutations),
        f"genus: {pd.homology.genus}",
        "Omega1:",
        *_grid(pd.Omega1),
        "Omega2:",
        *_grid(pd.Omega2),
        "tau:",
        *_grid([[BigComplex(v, pd.prec) for v in r] for r in pd.tau.matrix()]),
        f"homology_change_of_basis: {len(pd.homology.change_of_basis)}",
        *["  " + " ".join(str(v) for v in r) for r in pd.homology.change_of_basis],
        "cycles:",
        *["  " + " ".join(str(v) for v in c) for c in pd.homology.cycles],
    ]
    return "\n".join(lines) + "\n"


def _read_grid(lines, start, n=3):
    rows = []
    for line in lines[start:start + n]:
        parts = line.split()
        rows.append([parse_complex(s) for s in parts])
    return rows


def parse_period_report(text: str) -> dict:
    """Fields of a period report; grids are returned as lists of :class:`BigComplex` rows."""
    lines = text.splitlines()
    out: dict = {}
    for i, line in enumerate(lines):
        if line.startswith("precision:"):
            out["precision"] = int(line.split(":", 1)[1])
        elif line.startswith("transform:"):
            out["transform"] = [[int(v) for v in r.split()] for r in line.split(":", 1)[1].split(";")]
        elif line.strip() in ("Omega1:", "Omega2:", "tau:"):
            out[line.strip()[:-1]] = _read_grid(lines, i + 1)
        elif line.startswith("homology_change_of_basis:"):
            m = int(line.split(":", 1)[1])
            out["homology_change_of_basis"] = [[int(v) for v in r.split()] for r in lines[i + 1:i + 1 + m]]
    return out


def parse_omega1(text: str) -> list:
    """``Omega1`` from a period report, or from a bare 3-line grid of ``(re,im)@p`` entries."""
    if "Omega1:" in text:
        return parse_period_report(text)["Omega1"]
    rows = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if len(rows) != 3:
        raise ValueError("expected 3 rows of 3 complex entries")
    grid = _read_grid(rows, 0)
    if any(len(r) != 3 for r in grid):
        raise ValueError("expected 3 rows of 3 complex entries")
    return grid
