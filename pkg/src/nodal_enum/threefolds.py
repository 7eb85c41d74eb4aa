"""Counts of multi-tangent planes to hypersurfaces in 4-space.

Three independent routes are implemented and cross-checked:

* a stored closed-form polynomial in the hypersurface degree m for the
  number of planes that are tangent at six points (``tg6_planes_closed``);
* the derivation engine run on the universal plane over the variety of
  planes in 4-space (``tg6_planes_derived``), including an exact symbolic
  reconstruction of the whole polynomial by interpolation;
* for the quartic, a configuration count of coplanar line quadruples
  staged through residual splitting (``quartic_fano_check``).

The quintic pipeline turns the six-tangency count into the number of
irreducible rational plane quintic curves on a generic quintic
hypersurface by subtracting the planes whose section degenerates through
a line or a conic (``quintic_rational_planar``).
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .contact import CountReport, node_count, sigma_degree
from .sheaf import FormalSheaf, difference, dual, line, sym_rank2, tensor_line, top_chern
from .spaces import (
    SpaceModel,
    grassmannian_planes_p4,
    planes_through_line_model,
    projective_bundle,
)

__all__ = [
    "PLANES_NUMERATOR",
    "PLANES_DIVISOR",
    "CLASSICAL_CONSTANTS",
    "tg6_planes_closed",
    "tg6_planes_derived",
    "tg6_planes_derived_report",
    "tg6_planes_symbolic",
    "quartic_fano_raw",
    "quartic_fano_check",
    "quintic_binodal_residual",
    "quintic_rational_planar",
]


# Numerator coefficients, highest degree (18) first, of the count of
# 6-fold tangent planes to a degree-m hypersurface in 4-space.  The
# divisor normalizes the numerator to the actual count: it is pinned by
# the quartic (5600) and quintic (21617125) anchor values and agrees with
# the independent tower derivation at every integer m tested.
PLANES_NUMERATOR = (
    1, -12, 24, 155, -405, 1082, -18469, 66446, -192307, 1242535,
    -4049006, 11129818, -53664614, 166756120, -415820104, 1293514896,
    -2517392160, 1781049600, 0,
)
PLANES_DIVISOR = 144

# Classical enumerative inputs, quoted from the literature rather than
# derived here: the generic quintic hypersurface in 4-space carries
# finitely many lines and conics.
CLASSICAL_CONSTANTS = {
    "quintic-lines": 2875,
    "quintic-conics": 609250,
}


# -- closed form ---------------------------------------------------------------------

def tg6_planes_closed(m: int) -> Fraction:
    """Number of 6-fold tangent planes to a degree-m hypersurface.

    Exact rational evaluation of the stored degree-18 polynomial.  The
    value is an honest count for m >= 4 (a plane section must be able to
    acquire six nodes); smaller m are evaluated for consistency checks
    against the derivation engine.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError("the hypersurface degree must be an integer >= 1")
    acc = Fraction(0)
    for coef in PLANES_NUMERATOR:
        acc = acc * m + coef
    return acc / PLANES_DIVISOR


# -- derivation route ------------------------------------------------------------------

@lru_cache(maxsize=1)
def _planes_family() -> SpaceModel:
    """The universal plane over the planes variety, cached with its tower."""
    g2 = grassmannian_planes_p4()
    return projective_bundle(g2, dual(g2.sheaves["quotient"]), "y")


def tg6_planes_derived_report(m: int) -> CountReport:
    """Run the node-count assembly for planes tangent to degree m."""
    if not isinstance(m, int) or m < 1:
        raise ValueError("the hypersurface degree must be an integer >= 1")
    fam = _planes_family()
    return node_count(6, fam, lam=m * fam.var("y"))


def tg6_planes_derived(m: int) -> Fraction:
    """Six-tangency count re-derived from the blowup tower."""
    return tg6_planes_derived_report(m).count


def _interp_coeffs(points) -> tuple[Fraction, ...]:
    """Exact coefficients (degree ascending) through the given points."""
    xs = [Fraction(x) for x, _ in points]
    dd = [Fraction(y) for _, y in points]
    n = len(points)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    out = [Fraction(0)] * n
    basis = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for j in range(n):
        for k in range(j + 1):
            out[k] += dd[j] * basis[k]
        if j == n - 1:
            break
        for k in range(j, -1, -1):
            basis[k + 1] += basis[k]
            basis[k] = -xs[j] * basis[k]
    return tuple(out)


def tg6_planes_symbolic() -> tuple[Fraction, ...]:
    """The whole count polynomial from the engine, degree 0 to 18.

    Nineteen evaluations over the shared tower pin the degree-18
    polynomial exactly; no closed-form data enters.
    """
    points = [(m, tg6_planes_derived(m)) for m in range(1, 20)]
    return _interp_coeffs(points)


# -- quartic: coplanar line quadruples ----------------------------------------------------

@lru_cache(maxsize=1)
def _fano_quadruple_integral() -> Fraction:
    """Ordered 4-tuples of coplanar lines on the generic quartic.

    Three marked lines are split off the fiberwise forms one after the
    other; what remains of a degree-4 form after dividing by the marked
    linear forms is a section of a symmetric power twisted back by the
    used-up factors.  The product of the three top classes integrates
    over the triple flag tower to the ordered count.
    """
    g2 = grassmannian_planes_p4()
    dq = dual(g2.sheaves["quotient"])
    f1 = projective_bundle(g2, dq, "m1")
    f2 = projective_bundle(
        f1, FormalSheaf(3, f1.lift(dq.chern)), "m2")
    f3 = projective_bundle(
        f2, FormalSheaf(3, f2.lift(f1.lift(dq.chern))), "m3")

    forms = FormalSheaf(
        3, f3.lift(f2.lift(f1.lift(g2.sheaves["quotient"].chern))))
    m1 = f3.lift(f2.lift(f1.var("m1")))
    m2 = f3.lift(f2.var("m2"))
    m3 = f3.var("m3")

    res1 = difference(forms, line(m1))
    res2 = difference(forms, line(m2))
    res3 = difference(forms, line(m3))
    quartic = top_chern(sym_rank2(res1, 4))
    cubic = top_chern(tensor_line(sym_rank2(res2, 3), m1))
    conic = top_chern(tensor_line(sym_rank2(res3, 2), m1 + m2))

    z = f3.pushforward(quartic * cubic * conic)
    z = f2.pushforward(z)
    z = f1.pushforward(z)
    return g2.integrate(z)


def quartic_fano_raw() -> Fraction:
    """The ordered coplanar-quadruple integral (before label symmetry)."""
    return _fano_quadruple_integral()


def quartic_fano_check() -> int:
    """Planes meeting the generic quartic in four lines, unordered.

    Such a plane section is a completely split quartic curve, which has
    six nodes; the count must therefore equal the six-tangency count at
    m = 4.
    """
    raw = _fano_quadruple_integral()
    count = raw / math.factorial(4)
    if count.denominator != 1:
        raise ArithmeticError("ordered quadruple count is not divisible "
                              "by its label symmetries")
    return int(count)


# -- quintic: rational plane quintic curves -------------------------------------------------

@lru_cache(maxsize=1)
def quintic_binodal_residual() -> int:
    """Planes through a line of the quintic with binodal residual curve.

    For a fixed line on the hypersurface, the planes through it cut a
    residual quartic; the schedule degree of two nodes on that pencil
    model, halved for the node labels, counts the planes whose section
    degenerates into the line plus a binodal quartic.
    """
    fam = planes_through_line_model()
    deg = sigma_degree("(2,2)", fam)
    half = deg / 2
    assert half.denominator == 1
    return int(half)


def quintic_rational_planar() -> int:
    """Irreducible rational plane quintic curves on the generic quintic.

    Every such curve spans a 6-fold tangent plane; subtract the planes
    whose quintic section is reducible: a conic (plus residual cubic)
    for each of the finitely many conics, and a binodal-residual plane
    for each line.
    """
    rep = quintic_rational_planar_report()
    assert rep.count.denominator == 1
    return int(rep.count)


def quintic_rational_planar_report() -> CountReport:
    """Term-by-term version of :func:`quintic_rational_planar`."""
    total = tg6_planes_closed(5)
    conics = CLASSICAL_CONSTANTS["quintic-conics"]
    lines = CLASSICAL_CONSTANTS["quintic-lines"] * quintic_binodal_residual()
    breakdown = {
        "six-tangent planes": total,
        "conic + cubic sections": -Fraction(conics),
        "line + binodal quartic sections": -Fraction(lines),
    }
    return CountReport(total - conics - lines, breakdown, (),
                       expected=Fraction(17601000))
