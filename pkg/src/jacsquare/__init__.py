"""Genus-3 Jacobian square criterion for plane quartics.

Exact quartic discriminants, numerical period matrices, genus-3 theta
constants and the invariant ``Delta = (pi/2)^54 chi18(tau) / det(Omega1)^18``.
"""

__version__ = "0.1.0"
