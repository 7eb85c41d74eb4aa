"""Closed-form counts of n-nodal members of n-dimensional linear systems.

A polarized smooth surface enters these counts only through four
intersection numbers: ``d`` the self-intersection of the polarization,
``k1`` canonical class times polarization, ``k2`` canonical class squared,
and ``c2`` the topological Euler number.  For n = 1..6 the number of
members of a (sufficiently ample) n-dimensional linear system with n
separate nodes is a universal polynomial in these four numbers.

The first three counts are evaluated through their compact recursive
presentation; the degree 4..6 polynomials are stored as coefficient
tables (kept in display order so they can be audited term by term) and
walked by a single evaluator.  ``worked_correction`` packages a few
classical cross-checks where reducible members must be subtracted by hand
to isolate irreducible rational curves.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .contact import CountReport

__all__ = [
    "SurfaceInvariants",
    "tg_closed",
    "preset_p2",
    "preset_p1xp1",
    "preset_k3",
    "preset_deg9",
    "preset_delpezzo5",
    "preset_abelian_p4",
    "worked_correction",
    "WORKED_CORRECTIONS",
]


class SurfaceInvariants(NamedTuple):
    """The four intersection numbers that drive every count."""

    d: Fraction
    k1: Fraction
    k2: Fraction
    c2: Fraction


def _invariants(d, k1, k2, c2) -> SurfaceInvariants:
    return SurfaceInvariants(Fraction(d), Fraction(k1), Fraction(k2),
                             Fraction(c2))


# -- geometry presets -------------------------------------------------------------

def preset_p2(m: int) -> SurfaceInvariants:
    """Degree-m curves on the projective plane."""
    return _invariants(m * m, -3 * m, 9, 3)


def preset_p1xp1(m1: int, m2: int) -> SurfaceInvariants:
    """Curves of type (m1, m2) on a smooth quadric."""
    return _invariants(2 * m1 * m2, -2 * (m1 + m2), 8, 4)


def preset_k3(g: int) -> SurfaceInvariants:
    """A K3 surface polarized by a complete system of genus-g curves."""
    return _invariants(2 * g - 2, 0, 0, 24)


def preset_deg9(pa: int, chi: int) -> SurfaceInvariants:
    """A degree-9 surface in 4-space with sectional genus pa and
    holomorphic Euler characteristic chi."""
    k2 = 6 * chi - 5 * pa + 23
    return _invariants(9, 2 * pa - 11, k2, 12 * chi - k2)


def preset_delpezzo5() -> SurfaceInvariants:
    """The plane blown up at 5 points, embedded in 4-space by cubics
    through the points (a (2,2) intersection)."""
    return _invariants(4, -4, 4, 8)


def preset_abelian_p4() -> SurfaceInvariants:
    """An abelian surface in 4-space, hyperplane self-intersection 10."""
    return _invariants(10, 0, 0, 0)


# -- stored coefficient tables -----------------------------------------------------
#
# Keys are exponent tuples (d, c2, k1, k2); values are exact rationals
# written as strings.  Entries are grouped by descending power of the
# self-intersection d and, inside a group, follow the canonical display
# order of the corresponding polynomial, so the tables can be proofread
# against their source line by line.

# divided by 24 at evaluation time
_TG4_TABLE = {
    # d^4
    (4, 0, 0, 0): "81",
    # d^3
    (3, 0, 1, 0): "216", (3, 1, 0, 0): "108", (3, 0, 0, 0): "-2268",
    # d^2
    (2, 2, 0, 0): "54", (2, 1, 1, 0): "216", (2, 1, 0, 0): "-1890",
    (2, 0, 0, 1): "-324", (2, 0, 0, 0): "21852", (2, 0, 1, 0): "-5130",
    (2, 0, 2, 0): "216",
    # d^1
    (1, 3, 0, 0): "12", (1, 2, 0, 0): "-504", (1, 2, 1, 0): "72",
    (1, 1, 0, 1): "-216", (1, 1, 0, 0): "8940", (1, 1, 2, 0): "144",
    (1, 1, 1, 0): "-2916", (1, 0, 2, 0): "-3816", (1, 0, 1, 0): "39780",
    (1, 0, 3, 0): "96", (1, 0, 0, 1): "6024", (1, 0, 0, 0): "-72360",
    (1, 0, 1, 1): "-432",
    # d^0
    (0, 4, 0, 0): "1", (0, 3, 0, 0): "-42", (0, 3, 1, 0): "8",
    (0, 2, 1, 0): "-402", (0, 2, 0, 1): "-36", (0, 2, 2, 0): "24",
    (0, 2, 0, 0): "699", (0, 1, 0, 0): "-3888", (0, 1, 1, 1): "-144",
    (0, 1, 0, 1): "1756", (0, 1, 1, 0): "9046", (0, 1, 2, 0): "-1104",
    (0, 1, 3, 0): "32", (0, 0, 2, 1): "-144", (0, 0, 4, 0): "16",
    (0, 0, 0, 2): "108", (0, 0, 1, 1): "4412", (0, 0, 3, 0): "-936",
    (0, 0, 2, 0): "17171", (0, 0, 0, 1): "-28842", (0, 0, 1, 0): "-95670",
}

_TG5_TABLE = {
    # d^5
    (5, 0, 0, 0): "81/40",
    # d^4
    (4, 1, 0, 0): "27/8", (4, 0, 1, 0): "27/4", (4, 0, 0, 0): "-189/2",
    # d^3
    (3, 2, 0, 0): "9/4", (3, 1, 0, 0): "-441/4", (3, 1, 1, 0): "9",
    (3, 0, 2, 0): "9", (3, 0, 0, 1): "-27/2", (3, 0, 1, 0): "-1107/4",
    (3, 0, 0, 0): "3393/2",
    # d^2
    (2, 3, 0, 0): "3/4", (2, 2, 0, 0): "-189/4", (2, 2, 1, 0): "9/2",
    (2, 1, 2, 0): "9", (2, 1, 1, 0): "-981/4", (2, 1, 0, 0): "2469/2",
    (2, 1, 0, 1): "-27/2", (2, 0, 1, 1): "-27", (2, 0, 3, 0): "6",
    (2, 0, 2, 0): "-603/2", (2, 0, 0, 0): "-13875", (2, 0, 0, 1): "471",
    (2, 0, 1, 0): "8463/2",
    # d^1
    (1, 4, 0, 0): "1/8", (1, 3, 0, 0): "-35/4", (1, 3, 1, 0): "1",
    (1, 2, 2, 0): "3", (1, 2, 1, 0): "-285/4", (1, 2, 0, 0): "2207/8",
    (1, 2, 0, 1): "-9/2", (1, 1, 3, 0): "4", (1, 1, 0, 0): "-4789",
    (1, 1, 1, 1): "-18", (1, 1, 2, 0): "-180", (1, 1, 0, 1): "565/2",
    (1, 1, 1, 0): "8589/4", (1, 0, 3, 0): "-145", (1, 0, 0, 1): "-22445/4",
    (1, 0, 2, 0): "27403/8", (1, 0, 4, 0): "2", (1, 0, 0, 2): "27/2",
    (1, 0, 1, 1): "1355/2", (1, 0, 1, 0): "-111959/4",
    (1, 0, 0, 0): "217728/5", (1, 0, 2, 1): "-18",
    # d^0
    (0, 5, 0, 0): "1/120", (0, 4, 1, 0): "1/12", (0, 4, 0, 0): "-7/12",
    (0, 3, 0, 0): "141/8", (0, 3, 2, 0): "1/3", (0, 3, 0, 1): "-1/2",
    (0, 3, 1, 0): "-27/4", (0, 2, 0, 1): "251/6", (0, 2, 2, 0): "-53/2",
    (0, 2, 1, 1): "-3", (0, 2, 3, 0): "2/3", (0, 2, 0, 0): "-485/2",
    (0, 2, 1, 0): "1547/6", (0, 1, 0, 1): "-17881/12",
    (0, 1, 0, 0): "3516/5", (0, 1, 1, 1): "1229/6",
    (0, 1, 1, 0): "-68137/12", (0, 1, 3, 0): "-131/3", (0, 1, 0, 2): "9/2",
    (0, 1, 2, 0): "21551/24", (0, 1, 4, 0): "2/3", (0, 1, 2, 1): "-6",
    (0, 0, 2, 1): "727/3", (0, 0, 0, 2): "-188", (0, 0, 1, 1): "-8827/2",
    (0, 0, 1, 0): "321882/5", (0, 0, 1, 2): "9", (0, 0, 0, 1): "22695",
    (0, 0, 3, 0): "10867/12", (0, 0, 2, 0): "-26189/2",
    (0, 0, 3, 1): "-4", (0, 0, 5, 0): "4/15", (0, 0, 4, 0): "-26",
}

_TG6_TABLE = {
    # d^6
    (6, 0, 0, 0): "81/80",
    # d^5
    (5, 1, 0, 0): "81/40", (5, 0, 0, 0): "-567/8", (5, 0, 1, 0): "81/20",
    # d^4
    (4, 2, 0, 0): "27/16", (4, 1, 1, 0): "27/4", (4, 1, 0, 0): "-1701/16",
    (4, 0, 0, 1): "-81/8", (4, 0, 0, 0): "8109/4", (4, 0, 2, 0): "27/4",
    (4, 0, 1, 0): "-4077/16",
    # d^3
    (3, 3, 0, 0): "3/4", (3, 2, 1, 0): "9/2", (3, 2, 0, 0): "-63",
    (3, 1, 0, 0): "8523/4", (3, 1, 0, 1): "-27/2", (3, 1, 2, 0): "9",
    (3, 1, 1, 0): "-1233/4", (3, 0, 0, 1): "1131/2", (3, 0, 3, 0): "6",
    (3, 0, 0, 0): "-29601", (3, 0, 1, 1): "-27", (3, 0, 2, 0): "-729/2",
    (3, 0, 1, 0): "25671/4",
    # d^2
    (2, 4, 0, 0): "3/16", (2, 3, 1, 0): "3/2", (2, 3, 0, 0): "-147/8",
    (2, 2, 0, 0): "12909/16", (2, 2, 0, 1): "-27/4", (2, 2, 2, 0): "9/2",
    (2, 2, 1, 0): "-1107/8", (2, 1, 0, 1): "2073/4",
    (2, 1, 0, 0): "-76959/4", (2, 1, 1, 1): "-27", (2, 1, 1, 0): "41493/8",
    (2, 1, 3, 0): "6", (2, 1, 2, 0): "-333", (2, 0, 4, 0): "3",
    (2, 0, 0, 2): "81/4", (2, 0, 2, 1): "-27", (2, 0, 0, 1): "-96699/8",
    (2, 0, 3, 0): "-519/2", (2, 0, 0, 0): "1102009/5",
    (2, 0, 2, 0): "119961/16", (2, 0, 1, 0): "-639927/8",
    (2, 0, 1, 1): "4821/4",
    # d^1
    (1, 5, 0, 0): "1/40", (1, 4, 1, 0): "1/4", (1, 4, 0, 0): "-21/8",
    (1, 3, 0, 1): "-3/2", (1, 3, 0, 0): "3071/24", (1, 3, 1, 0): "-109/4",
    (1, 3, 2, 0): "1", (1, 2, 2, 0): "-201/2", (1, 2, 0, 1): "157",
    (1, 2, 3, 0): "2", (1, 2, 0, 0): "-29213/8", (1, 2, 1, 1): "-9",
    (1, 2, 1, 0): "5421/4", (1, 1, 0, 1): "-26787/4",
    (1, 1, 0, 0): "648997/10", (1, 1, 1, 0): "-74149/2",
    (1, 1, 3, 0): "-159", (1, 1, 1, 1): "1481/2", (1, 1, 0, 2): "27/2",
    (1, 1, 2, 0): "32959/8", (1, 1, 4, 0): "2", (1, 1, 2, 1): "-18",
    (1, 0, 2, 1): "853", (1, 0, 1, 1): "-18481", (1, 0, 0, 2): "-1317/2",
    (1, 0, 1, 2): "27", (1, 0, 0, 1): "1401361/12",
    (1, 0, 1, 0): "28988249/60", (1, 0, 3, 0): "46109/12",
    (1, 0, 3, 1): "-12", (1, 0, 5, 0): "4/5", (1, 0, 0, 0): "-668388",
    (1, 0, 2, 0): "-554465/8", (1, 0, 4, 0): "-92",
    # d^0
    (0, 6, 0, 0): "1/720", (0, 5, 0, 0): "-7/48", (0, 5, 1, 0): "1/60",
    (0, 4, 0, 1): "-1/8", (0, 4, 2, 0): "1/12", (0, 4, 1, 0): "-95/48",
    (0, 4, 0, 0): "331/48", (0, 3, 1, 1): "-1", (0, 3, 2, 0): "-10",
    (0, 3, 1, 0): "8147/72", (0, 3, 0, 0): "-8095/48",
    (0, 3, 0, 1): "565/36", (0, 3, 3, 0): "2/9", (0, 2, 3, 0): "-145/6",
    (0, 2, 0, 0): "15347/10", (0, 2, 1, 1): "1355/12",
    (0, 2, 2, 1): "-3", (0, 2, 4, 0): "1/3", (0, 2, 0, 2): "9/4",
    (0, 2, 1, 0): "-190339/48", (0, 2, 2, 0): "26519/48",
    (0, 2, 0, 1): "-10891/12", (0, 1, 3, 1): "-4", (0, 1, 4, 0): "-85/3",
    (0, 1, 3, 0): "4291/4", (0, 1, 1, 2): "9", (0, 1, 0, 0): "10998",
    (0, 1, 0, 2): "-815/4", (0, 1, 2, 0): "-807341/48",
    (0, 1, 2, 1): "790/3", (0, 1, 5, 0): "4/15",
    (0, 1, 1, 1): "-62339/12", (0, 1, 0, 1): "691883/24",
    (0, 1, 1, 0): "10672201/120", (0, 0, 3, 0): "-311237/16",
    (0, 0, 0, 3): "-9/2", (0, 0, 6, 0): "4/45",
    (0, 0, 1, 1): "7001519/72", (0, 0, 4, 1): "-2",
    (0, 0, 1, 2): "-1855/4", (0, 0, 2, 2): "9", (0, 0, 3, 1): "1805/9",
    (0, 0, 1, 0): "-1080646", (0, 0, 2, 0): "86753363/360",
    (0, 0, 0, 2): "200477/36", (0, 0, 4, 0): "26297/36",
    (0, 0, 5, 0): "-13", (0, 0, 2, 1): "-55951/8",
    (0, 0, 0, 1): "-2567321/6",
}


def _freeze(table):
    return {k: Fraction(v) for k, v in table.items()}


_TG4 = _freeze(_TG4_TABLE)
_TG5 = _freeze(_TG5_TABLE)
_TG6 = _freeze(_TG6_TABLE)


def _eval_table(table, d, c2, k1, k2) -> Fraction:
    acc = Fraction(0)
    for (a, b, e, f), coef in table.items():
        acc += coef * d ** a * c2 ** b * k1 ** e * k2 ** f
    return acc


# -- the closed counts -------------------------------------------------------------

def tg_closed(n: int, inv) -> Fraction:
    """Closed-form count of n-nodal members, n = 1..6, exact rational.

    The result is an honest count only when the system is ample enough
    for its dimension; outside that range the polynomial still evaluates
    (and is what the derivation engine reproduces), but it may be
    negative or fractional.
    """
    if not isinstance(n, int) or not 1 <= n <= 6:
        raise ValueError("closed counts are tabulated for n = 1..6")
    d, k1, k2, c2 = (Fraction(v) for v in SurfaceInvariants(*inv))
    t1 = 3 * d + 2 * k1 + c2
    if n == 1:
        return t1
    t2 = (t1 * (-7 + 3 * d + 2 * k1 + c2)
          - 6 * k2 - 25 * k1 - 21 * d) / 2
    if n == 2:
        return t2
    if n == 3:
        return (2 * t2 * (-14 + 3 * d + 2 * k1 + c2)
                + t1 * (-6 * k2 - 25 * k1 - 21 * d + 40)
                + (-6 * k2 - 25 * k1 - 21 * d) * c2
                - 63 * d ** 2 + (-18 * k2 - 117 * k1 + 672) * d
                - 50 * k1 ** 2 + (-12 * k2 + 950) * k1 + 292 * k2) / 6
    if n == 4:
        return _eval_table(_TG4, d, c2, k1, k2) / 24
    if n == 5:
        return _eval_table(_TG5, d, c2, k1, k2)
    return _eval_table(_TG6, d, c2, k1, k2)


# -- worked corrections -------------------------------------------------------------
#
# Each entry isolates irreducible rational curves by subtracting the
# reducible configurations that a transverse count picks up.  The
# subtracted terms are classical (splitting types with their incidence
# choices); the expected totals are independently cross-checked.

def _p2_quintic_14pts() -> CountReport:
    main = tg_closed(6, preset_p2(5))
    line_quartic = math.comb(14, 2) * tg_closed(2, preset_p2(4))
    conic_cubic = math.comb(14, 5)
    breakdown = {
        "six-nodal quintics": main,
        "line + binodal quartic": -line_quartic,
        "conic + cubic": -conic_cubic,
    }
    return CountReport(main - line_quartic - conic_cubic, breakdown, (),
                       expected=Fraction(87304))


def _d33() -> CountReport:
    main = tg_closed(4, preset_p1xp1(3, 3))
    a = 11 * tg_closed(1, preset_p1xp1(3, 2))
    b = 11 * tg_closed(1, preset_p1xp1(2, 3))
    c = math.comb(11, 8)
    breakdown = {
        "four-nodal (3,3)": main,
        "nodal (3,2) + (0,1)": -a,
        "nodal (2,3) + (1,0)": -b,
        "(2,2) + (1,1)": -c,
    }
    return CountReport(main - a - b - c, breakdown, (),
                       expected=Fraction(3510))


def _d25() -> CountReport:
    main = tg_closed(4, preset_p1xp1(2, 5))
    a = 13 * tg_closed(2, preset_p1xp1(2, 4))
    b = math.comb(13, 11)
    breakdown = {
        "four-nodal (2,5)": main,
        "binodal (2,4) + (0,1)": -a,
        "(2,3) + (0,2)": -b,
    }
    return CountReport(main - a - b, breakdown, (), expected=Fraction(3684))


def _d34() -> CountReport:
    main = tg_closed(6, preset_p1xp1(3, 4))
    a = 13 * tg_closed(3, preset_p1xp1(3, 3))
    b = tg_closed(1, preset_p1xp1(2, 3)) * math.comb(13, 3)
    c = math.comb(13, 8)
    e = math.comb(13, 2)
    breakdown = {
        "six-nodal (3,4)": main,
        "trinodal (3,3) + (0,1)": -a,
        "nodal (2,3) + (1,1)": -b,
        "(2,2) + (1,2)": -c,
        "(3,2) + (0,2)": -e,
    }
    return CountReport(main - a - b - c - e, breakdown, (),
                       expected=Fraction(90508))


WORKED_CORRECTIONS = {
    "p2-quintic-14pts": _p2_quintic_14pts,
    "d33": _d33,
    "d25": _d25,
    "d34": _d34,
}


def worked_correction(name: str) -> CountReport:
    """Replay a registered irreducible-rational-curve computation."""
    try:
        builder = WORKED_CORRECTIONS[name]
    except KeyError:
        known = ", ".join(sorted(WORKED_CORRECTIONS))
        raise ValueError(f"unknown correction {name!r}; known: {known}")
    return builder()
