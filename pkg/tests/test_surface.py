import json

import pytest

from isogenous.algebra import AbelianInvariants
from isogenous.curve import BranchDataError
from isogenous.presets import PRESET_DATA, PRESETS, load_surface, preset, surface_from_dict
from isogenous.surface import (
    NonIntegralError,
    euler_characteristic_rational,
    freeness_check,
    intersection_on_S,
    noether_invariants,
    noether_numbers,
    picard_and_k_group,
    rr_surface_chi,
)


@pytest.mark.parametrize("label", PRESETS)
def test_numerical_invariants(label):
    S = preset(label)
    assert S.order == (S.C.genus - 1) * (S.D.genus - 1)
    inv = noether_invariants(S)
    assert (inv.k_squared, inv.chi_top, inv.b2) == (8, 4, 2)
    assert inv.k_group.free_rank == 4
    assert inv.pic.torsion == inv.h1.torsion


def test_picard_tables():
    pic, k = picard_and_k_group("z3^2")
    assert pic == AbelianInvariants(2, (3,) * 5)
    assert k == AbelianInvariants(4, (3,) * 5)
    assert picard_and_k_group("z5^2")[1] == AbelianInvariants(4, (5, 5, 5))
    assert picard_and_k_group("z2^3")[0].torsion_order == 256
    with pytest.raises(KeyError):
        picard_and_k_group("z7^2")


def test_noether_rejects_negative_b2():
    assert noether_numbers(8) == (4, 2)
    with pytest.raises(ValueError):
        noether_numbers(11)


def test_intersection_numbers(S):
    assert intersection_on_S((-3, -3), (-3, -3), 9) == 2
    assert intersection_on_S((6, 6), (6, 6), 9) == 8
    with pytest.raises(NonIntegralError):
        intersection_on_S((1, 1), (1, 1), 9)


def kunneth_chi(a, b, gC, gD):
    return (a + 1 - gC) * (b + 1 - gD)


@pytest.mark.parametrize("label", PRESETS)
def test_group_order_times_chi_is_kunneth_chi(label):
    S = preset(label)
    violations = []
    for a in range(-12, 13):
        for b in range(-12, 13):
            lhs = S.order * euler_characteristic_rational((a, b), S)
            if lhs != kunneth_chi(a, b, S.C.genus, S.D.genus):
                violations.append((a, b))
    assert violations == []


def test_quadruple_difference_chi(S):
    assert 9 * rr_surface_chi((-3, -3), S) == 36
    assert rr_surface_chi((-3, 0), S) == 2
    assert rr_surface_chi((12, 12), S) == 9
    assert rr_surface_chi((0, 0), S) == 1


def test_freeness():
    S = preset("z3^2")
    assert freeness_check(S) == (True, None)
    free, witness = freeness_check(S.C, S.C)
    assert not free and witness.coords == (1, 0)


def test_non_free_surface_rejected():
    data = json.loads(json.dumps(PRESET_DATA["z3^2"]))
    data["D"] = data["C"]
    with pytest.raises(BranchDataError, match="not free"):
        surface_from_dict(data)


def test_malformed_description():
    with pytest.raises(ValueError):
        surface_from_dict({"group": [3, 3], "C": {"genus": 4}})


def test_load_surface_roundtrip(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({**PRESET_DATA["z3^2"], "label": "z3^2"}))
    S = load_surface(p)
    assert S.C.class_group.invariants == preset("z3^2").C.class_group.invariants
    assert noether_invariants(S).k_group == AbelianInvariants(4, (3,) * 5)
    p.write_text(json.dumps(PRESET_DATA["z3^2"]))
    assert noether_invariants(load_surface(p)).k_group is None


def test_label_ignored_when_branch_data_differs(tmp_path):
    data = json.loads(json.dumps(PRESET_DATA["z3^2"]))
    data["D"]["orbits"] = [[1, 1], [2, 2], [1, 2], [2, 1]]
    p = tmp_path / "s.json"
    p.write_text(json.dumps({**data, "label": "z3^2"}))
    assert load_surface(p).label is None
