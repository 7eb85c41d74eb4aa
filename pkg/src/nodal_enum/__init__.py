"""Exact intersection-theory engine and enumerative calculator.

Counts n-nodal members of n-dimensional linear systems on surfaces (n = 1..6)
and 6-fold tangent planes to hypersurfaces in P^4, twice over: once from
stored closed-form polynomials in the surface invariants and once re-derived
from a blowup-tower contact calculus.  The two routes are kept independent so
each verifies the other.
"""

__version__ = "0.1.0"
