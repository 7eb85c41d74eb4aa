"""Schedule parsing, weak listings, and schedule-degree goldens."""
from __future__ import annotations

from fractions import Fraction

import pytest

from nodal_enum.contact import (
    NODE_ASSEMBLY,
    SingularityType,
    UnsupportedTypeError,
    node_count,
    parse_type,
    rho,
    sigma_degree,
    weak_listing_count,
)
from nodal_enum.spaces import SpaceError, base_surface_model, grassmannian_planes_p4, planes_through_line_model


def quartics(n):
    """Degree-4 curves on the plane, an n-dimensional system."""
    return base_surface_model(n, 16, -12, 9, 3)


# -- parsing and rendering -----------------------------------------------------------

def test_parse_expands_repeats():
    t = parse_type("(2^[4])")
    assert t.entries == ((2, None),) * 4
    assert t.render() == "(2^[4])"


def test_parse_nested():
    t = parse_type("(3(2))")
    assert t.entries == ((3, SingularityType([(2, None)])),)
    assert t.render() == "(3(2))"
    assert t.flatten() == [(3, False), (2, True)]


def test_parse_mixed_and_whitespace():
    assert parse_type(" ( 3 , 2 ^ [ 2 ] ) ") == parse_type("(3,2,2)")
    assert parse_type("(3,2,2)").render() == "(3,2^[2])"


def test_render_round_trips():
    for text in ("(2)", "(2^[6])", "(3)", "(3,2)", "(3,2,2)", "(3(2))"):
        t = parse_type(text)
        assert parse_type(t.render()) == t


def test_parse_type_passthrough():
    t = parse_type("(3,2)")
    assert parse_type(t) is t


def test_parse_errors():
    for bad in ("", "(", "(2", "2)", "()", "(1)", "(0)", "(2,)", "(2))",
                "(2^[0])", "(2^2)", "(x)"):
        with pytest.raises(ValueError):
            parse_type(bad)


def test_deep_nesting_is_rejected():
    t = parse_type("(3(2(2)))")
    with pytest.raises(UnsupportedTypeError):
        t.flatten()
    with pytest.raises(UnsupportedTypeError):
        rho(t)


# -- numerology ------------------------------------------------------------------------

def test_rho_values():
    assert rho("(2)") == 3
    assert rho("(3)") == 6
    assert rho("(3,2)") == 9
    assert rho("(3(2))") == 9
    assert rho("(2^[6])") == 18
    assert rho("(2)", fiber_dim=3) == 4


def test_weak_listing_counts():
    single = weak_listing_count("(3)")
    assert (single.total, single.subtotals) == (6, (6,))
    pair = weak_listing_count("(3,2)")
    assert (pair.total, pair.subtotals) == (30, (24, 6))
    triple = weak_listing_count("(3,2,2)")
    assert (triple.total, triple.subtotals) == (90, (120, 48, 12))
    nested = weak_listing_count("(3(2))")
    assert (nested.total, nested.subtotals) == (30, None)


def test_weak_listing_requires_schedule_rule():
    with pytest.raises(UnsupportedTypeError):
        weak_listing_count("(2,2)")


def test_assembly_coefficients_match_listings():
    # the subtraction coefficients are exactly the weak-listing counts
    for n, corrections in NODE_ASSEMBLY.items():
        for coeff, tname in corrections:
            assert coeff == weak_listing_count(tname).total


def test_certified_catalogue_guard():
    fam = quartics(1)
    for bad in ("(4)", "(2^[7])", "(3,3)", "(2(2))"):
        with pytest.raises(UnsupportedTypeError):
            sigma_degree(bad, fam)
    with pytest.raises(UnsupportedTypeError):
        node_count(7, fam)
    with pytest.raises(UnsupportedTypeError):
        node_count(0, fam)


# -- schedule degrees ------------------------------------------------------------------

def test_single_node_pencil_golden():
    # a pencil of degree-m plane curves has 3(m-1)^2 singular members
    for m in (2, 3, 4, 5, 6):
        fam = base_surface_model(1, m * m, -3 * m, 9, 3)
        assert sigma_degree("(2)", fam) == 3 * (m - 1) ** 2


def test_lam_override_matches_preset():
    fam = quartics(1)
    assert sigma_degree("(2)", fam, lam=fam.family_line) == 27


def test_dimension_balance_guard():
    with pytest.raises(ValueError):
        sigma_degree("(2)", quartics(2))
    with pytest.raises(ValueError):
        sigma_degree("(2,2)", quartics(1))


def test_family_level_guards():
    g2 = grassmannian_planes_p4()
    with pytest.raises(SpaceError):
        sigma_degree("(2)", g2)
    fam = quartics(1)
    with pytest.raises(SpaceError):
        sigma_degree("(2)", fam, lam=g2.var("q1"))


def test_missing_tangency_line():
    from nodal_enum.sheaf import dual
    from nodal_enum.spaces import projective_bundle
    g2 = grassmannian_planes_p4()
    planes = projective_bundle(g2, dual(g2.sheaves["quotient"]), "y")
    with pytest.raises(ValueError):
        sigma_degree("(2^[2])", planes)


def test_node_counts_on_plane_quartics():
    assert node_count(1, quartics(1)).count == 27
    assert node_count(2, quartics(2)).count == 225
    assert node_count(3, quartics(3)).count == 675


def test_node_count_breakdown_and_flags():
    rep = node_count(4, base_surface_model(4, 10, 0, 0, 0))
    assert rep.count == 150
    assert rep.flags == ()
    assert rep.is_integer
    assert rep.breakdown["(2^[4])"] == 4500
    assert rep.breakdown["(3)"] == 150


def test_triple_point_schedule_on_abelian_surface():
    fam = base_surface_model(4, 10, 0, 0, 0)
    assert sigma_degree("(3)", fam) == 150


def test_out_of_validity_flag():
    rep = node_count(2, base_surface_model(2, 1, 0, 0, 0))
    assert rep.count == Fraction(-33, 2)
    assert rep.flags == ("OUT_OF_VALIDITY",)
    assert not rep.is_integer


def test_binodal_planes_through_line():
    fam = planes_through_line_model()
    assert sigma_degree("(2,2)", fam) == 2370
    # the tangency line is part of the model: a different twist moves the count
    other = 5 * fam.var("y")
    assert sigma_degree("(2,2)", fam, lam=other) == 4560
