"""Period matrices of smooth plane quartics."""

from .continuation import analytic_continue
from .curve import AffineCurve, discriminant_points, fiber_roots, make_curve
from .homology import symplectic_basis
from .period_matrix import (
    HomologyBasis,
    MonodromyData,
    PeriodData,
    homology_basis,
    monodromy,
    period_matrix,
    tau_of,
)

__all__ = [
    "AffineCurve",
    "HomologyBasis",
    "MonodromyData",
    "PeriodData",
    "analytic_continue",
    "discriminant_points",
    "fiber_roots",
    "homology_basis",
    "make_curve",
    "monodromy",
    "period_matrix",
    "symplectic_basis",
    "tau_of",
]
