"""Cross-checked routes for tangent-plane counts on hypersurfaces."""
from __future__ import annotations

from fractions import Fraction

import pytest

from nodal_enum.threefolds import (
    CLASSICAL_CONSTANTS,
    PLANES_DIVISOR,
    PLANES_NUMERATOR,
    _interp_coeffs,
    quartic_fano_check,
    quartic_fano_raw,
    quintic_binodal_residual,
    quintic_rational_planar,
    quintic_rational_planar_report,
    tg6_planes_closed,
    tg6_planes_derived,
    tg6_planes_derived_report,
)


# -- closed form -----------------------------------------------------------------------

def test_closed_anchor_values():
    assert tg6_planes_closed(4) == 5600
    assert tg6_planes_closed(5) == 21617125


def test_closed_low_degrees_for_consistency():
    # below m = 4 the polynomial is no longer an honest count, but it is
    # still the exact value the derivation engine must reproduce
    assert tg6_planes_closed(1) == 1823775
    assert tg6_planes_closed(2) == -107520
    assert tg6_planes_closed(3) == 315360


def test_closed_integrality():
    for m in range(1, 13):
        assert tg6_planes_closed(m).denominator == 1


def test_closed_rejects_bad_degree():
    for bad in (0, -1, "4", 4.0):
        with pytest.raises(ValueError):
            tg6_planes_closed(bad)


def test_stored_table_shape():
    assert len(PLANES_NUMERATOR) == 19
    assert PLANES_NUMERATOR[0] == 1
    assert PLANES_NUMERATOR[-1] == 0
    assert PLANES_DIVISOR == 144


# -- quartic ---------------------------------------------------------------------------

def test_quartic_fano_route():
    assert quartic_fano_raw() == 134400
    assert quartic_fano_check() == 5600


def test_route_equality_at_four():
    assert quartic_fano_check() == tg6_planes_closed(4)


# -- quintic ---------------------------------------------------------------------------

def test_binodal_residual():
    assert quintic_binodal_residual() == 1185


def test_rational_planar_pipeline():
    assert quintic_rational_planar() == 17601000
    rep = quintic_rational_planar_report()
    assert rep.count == 17601000
    assert rep.expected == 17601000
    assert rep.breakdown["six-tangent planes"] == 21617125
    assert rep.breakdown["conic + cubic sections"] == -609250
    assert rep.breakdown["line + binodal quartic sections"] == -3406875


def test_classical_constants():
    assert CLASSICAL_CONSTANTS["quintic-lines"] == 2875
    assert CLASSICAL_CONSTANTS["quintic-conics"] == 609250


# -- derivation route --------------------------------------------------------------------

def test_derived_matches_closed_at_four():
    rep = tg6_planes_derived_report(4)
    assert rep.count == 5600
    assert rep.flags == ()
    assert rep.breakdown["(2^[6])"] == 8908800


def test_derived_matches_closed_at_two():
    # internal consistency in the non-count range
    assert tg6_planes_derived(2) == tg6_planes_closed(2)


def test_derived_rejects_bad_degree():
    with pytest.raises(ValueError):
        tg6_planes_derived(0)


# -- interpolation helper -------------------------------------------------------------------

def test_interpolation_recovers_polynomial():
    def cubic(x):
        return Fraction(7, 3) * x ** 3 - 2 * x + Fraction(1, 2)

    pts = [(x, cubic(x)) for x in range(1, 5)]
    assert _interp_coeffs(pts) == (Fraction(1, 2), Fraction(-2),
                                   Fraction(0), Fraction(7, 3))
