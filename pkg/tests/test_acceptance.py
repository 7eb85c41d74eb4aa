"""Acceptance gate: every published golden value, exact arithmetic, hard runtime budgets.

One test per criterion; each prints a single pass line (visible with -v / -s).
All comparisons are exact integer or rational equality — tolerance zero.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

import test_ring
import test_sheaf
import test_spaces
from nodal_enum.contact import NODE_ASSEMBLY, node_count, weak_listing_count
from nodal_enum.spaces import base_surface_model
from nodal_enum.surfaces import (
    preset_abelian_p4,
    preset_deg9,
    preset_delpezzo5,
    preset_k3,
    preset_p1xp1,
    preset_p2,
    tg_closed,
    worked_correction,
)
from nodal_enum.threefolds import (
    PLANES_DIVISOR,
    PLANES_NUMERATOR,
    quartic_fano_check,
    quartic_fano_raw,
    quintic_binodal_residual,
    quintic_rational_planar,
    tg6_planes_closed,
    tg6_planes_symbolic,
)


def test_criterion_1_closed_form_goldens():
    start = time.perf_counter()
    assert tg_closed(4, preset_p2(4)) == 666
    assert tg_closed(5, preset_p2(4)) == 378
    assert tg_closed(6, preset_p2(4)) == 105
    assert worked_correction("p2-quintic-14pts").count == 87304
    assert tg_closed(4, preset_p1xp1(2, 2)) == 6
    assert tg_closed(4, preset_p1xp1(2, 3)) == 133
    assert tg_closed(4, preset_p1xp1(2, 4)) == 1261
    assert tg_closed(4, preset_p1xp1(3, 3)) == 4115
    assert tg_closed(5, preset_p1xp1(3, 3)) == 3702
    assert tg_closed(6, preset_p1xp1(3, 3)) == 2224
    assert tg_closed(4, preset_p1xp1(2, 5)) == 7038
    assert worked_correction("d25").count == 3684
    assert tg_closed(6, preset_p1xp1(3, 4)) == 122865
    assert worked_correction("d34").count == 90508
    assert worked_correction("d33").count == 3510
    assert tg_closed(4, preset_delpezzo5()) == 40
    deg9 = {(6, 1): 15645, (7, 1): 57162, (7, 2): 107646, (8, 2): 248671,
            (8, 3): 388846, (9, 4): 1022595, (10, 5): 2222868, (12, 9): 10957224}
    for (pa, chi), want in deg9.items():
        assert tg_closed(4, preset_deg9(pa, chi)) == want
    for g, want in {3: 3200, 4: 25650, 5: 176256, 6: 1073720}.items():
        assert tg_closed(g, preset_k3(g)) == want
    assert tg_closed(4, preset_abelian_p4()) == 150
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"closed-form suite took {elapsed:.2f}s (budget 1s)"
    print(f"criterion 1: PASS — closed-form golden suite, exact, in {elapsed:.3f}s")


def test_criterion_2_threefold_suite():
    start = time.perf_counter()
    assert tg6_planes_closed(4) == 5600
    assert quartic_fano_raw() == 134400
    assert quartic_fano_check() == 5600
    assert quintic_binodal_residual() == 1185
    assert quintic_rational_planar() == 17601000
    assert tg6_planes_closed(5) == 21617125
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"threefold suite took {elapsed:.2f}s (budget 10s)"
    print(f"criterion 2: PASS — threefold suite, exact, in {elapsed:.3f}s")


def _equivalence_invariants(n):
    invariants = [preset_p2(4), preset_p2(5), preset_p1xp1(3, 3), preset_k3(n),
                  preset_abelian_p4()]
    rng = random.Random(20260815 * n)
    for _ in range(8):
        invariants.append(tuple(rng.randint(-9, 9) for _ in range(4)))
    return invariants


def test_criterion_3_derivation_equivalence():
    budgets = {1: 60.0, 2: 60.0, 3: 60.0, 4: 60.0, 5: 600.0, 6: 600.0}
    for n, budget in budgets.items():
        start = time.perf_counter()
        for invariants in _equivalence_invariants(n):
            family = base_surface_model(n, *invariants)
            assert node_count(n, family).count == tg_closed(n, invariants), \
                f"route mismatch at n={n}, invariants={invariants}"
        elapsed = time.perf_counter() - start
        assert elapsed < budget, f"n={n} block took {elapsed:.1f}s (budget {budget}s)"

    report = node_count(4, base_surface_model(4, *preset_abelian_p4()))
    assert report.breakdown["(3)"] == 150

    derived = tg6_planes_symbolic()
    closed = tuple(Fraction(c, PLANES_DIVISOR) for c in reversed(PLANES_NUMERATOR))
    assert derived == closed
    print("criterion 3: PASS — derivation route matches every closed form, "
          "13 systems per order plus the full degree-18 polynomial")


def test_criterion_4_property_suites():
    suites = [
        ("ring laws + idempotence", lambda: test_ring.test_ring_laws_and_idempotence()),
        ("whitney/difference round trip",
         lambda: test_sheaf.test_difference_whitney_round_trip()),
        ("twist-untwist", lambda: test_sheaf.test_twist_untwist()),
        ("sym_rank2 splitting oracle",
         lambda: test_sheaf.test_sym_rank2_splitting_oracle()),
        ("projection formula", lambda: (test_spaces.test_projection_formula_blowup(),
                                        test_spaces.test_projection_formula_family())),
        ("grothendieck/segre", lambda: test_spaces.test_grothendieck_segre_property()),
        ("plane euler anchor", lambda: test_spaces.test_plane_euler_anchor()),
        ("grassmannian anchors", lambda: (test_spaces.test_grassmannian_whitney_anchor(),
                                          test_spaces.test_grassmannian_integrals())),
    ]
    for name, suite in suites:
        start = time.perf_counter()
        suite()
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"{name} took {elapsed:.1f}s (budget 30s)"
    print(f"criterion 4: PASS — {len(suites)} property suites within budget")


def test_criterion_5_weak_listings():
    assert weak_listing_count("(3)").total == 6
    assert weak_listing_count("(3,2)").total == 30
    triple = weak_listing_count("(3,2,2)")
    assert triple.total == 90
    assert triple.subtotals == (120, 48, 12)
    print("criterion 5: PASS — weak listings 6 / 30 / 90 with 120+48+12 split")


def test_criterion_6_nothing_excluded():
    # every published count is covered above; the only non-goals are orders
    # beyond six, and both routes refuse them rather than extrapolating
    assert sorted(NODE_ASSEMBLY) == [1, 2, 3, 4, 5, 6]
    with pytest.raises(ValueError):
        tg_closed(7, preset_p2(4))
    with pytest.raises(ValueError):
        node_count(7, base_surface_model(6, *preset_p2(4)))
    print("criterion 6: PASS — full scope covered, out-of-scope orders rejected")
