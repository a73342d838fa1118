"""mollint: mollified second moments of zeta on the critical line, with the
supporting machinery — critical-line evaluation and zero finding, Dirichlet
polynomial mollifiers, Beurling-Selberg interval majorants, pair-correlation
statistics over zero ordinates, and the exact diagonalization of the gcd
quadratic form with its closed-form minimizer.
"""

from . import arith, dirichlet, moments, quadform, smoothfn, zerostats, zeta

__all__ = ["arith", "dirichlet", "moments", "quadform", "smoothfn",
           "zerostats", "zeta"]

__version__ = "0.1.0"
