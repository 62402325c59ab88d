import itertools
from fractions import Fraction

import pytest

from isogenous.obstruction import (
    chi_obstruction,
    no_go_z2_cubed,
    no_go_z2_fourth,
    obstruction_form,
    z5_squared_note,
)
from isogenous.surface import (
    NonIntegralError,
    euler_characteristic_rational,
    intersection_on_S_rational,
    rr_surface_chi,
)


def test_factored_forms():
    for e, f in itertools.product(range(-20, 21), repeat=2):
        assert chi_obstruction(3, 5, 8, e, f) == Fraction((e - 2) * (f - 4), 8)
        assert chi_obstruction(5, 5, 16, e, f) == Fraction((e - 4) * (f - 4), 16)
    assert obstruction_form(3, 5, 8).factor() == (Fraction(1, 8), 2, 4)


def test_z3_squared_difference_vanishes():
    assert chi_obstruction(4, 4, 9, 3, 3) == 0


def test_symmetry():
    for gC, gD in [(3, 5), (5, 5), (4, 4), (2, 9)]:
        n = (gC - 1) * (gD - 1)
        for e, f in itertools.product(range(-8, 9), repeat=2):
            assert chi_obstruction(gC, gD, n, e, f) == chi_obstruction(gD, gC, n, f, e)


def test_bad_order_rejected():
    with pytest.raises(ValueError):
        chi_obstruction(3, 5, 9, 0, 0)


def test_specializes_to_surface_riemann_roch(S):
    for a, b in itertools.product(range(-12, 13), repeat=2):
        c = chi_obstruction(4, 4, 9, a, b)
        assert c == euler_characteristic_rational((a, b), S)
        try:
            assert c == rr_surface_chi((a, b), S)
        except NonIntegralError:
            # the bidegree does not descend: some intersection number is fractional
            LL = intersection_on_S_rational((a, b), (a, b), 9)
            LK = intersection_on_S_rational((a, b), (6, 6), 9)
            assert LL.denominator != 1 or LK.denominator != 1


def test_no_go_z2_cubed():
    r = no_go_z2_cubed()
    assert r.verdict == "UNSATISFIABLE" and r.scan_solutions == [] and r.consistent
    assert r.lattice == (4, 4)
    assert any("f_1 = f_2 = 4" in line for line in r.transcript)
    for sub in r.subchecks:
        assert sub["first"] == "0" and sub["third"] != "0"


def test_no_go_z2_cubed_naive_oracle():
    # independent unfiltered enumeration on a smaller box
    chi = lambda e, f: Fraction((e - 2) * (f - 4), 8)  # noqa: E731
    pts = range(-24, 25, 4)
    hits = [
        t for t in itertools.product(pts, repeat=4)
        if chi(t[0], t[1]) == 0 and chi(t[2], t[3]) == 0 and chi(t[2] - t[0], t[3] - t[1]) == 0
    ]
    assert hits == []
    assert no_go_z2_cubed(24).scan_solutions == []


def test_no_go_z2_fourth():
    r = no_go_z2_fourth()
    assert r.verdict == "UNSATISFIABLE" and r.scan_solutions == [] and r.consistent
    assert r.lattice == (8, 8)
    assert r.subchecks[0]["chi"] == "1"


def test_z5_note():
    r = z5_squared_note()
    assert "Div(C)^G/~ = Z," in r.notes[0]
