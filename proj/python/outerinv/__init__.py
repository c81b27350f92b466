"""Outer generalized inverses with prescribed range and null space.

Thin Python layer over the C++ core: subspace gaps, outer-inverse
construction, the classical generalized inverses as special cases,
explicit perturbation formulas with verified error bounds, and a
seeded randomized verification harness.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
