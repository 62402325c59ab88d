import pytest

from isogenous.algebra import characters
from isogenous.cohomology import (
    ZERO_BY_TOTAL,
    bundle,
    ext_table,
    invariant_profile,
    kunneth,
    parse_bundle,
    pigeonhole_zero_character,
    total_profile,
)
from isogenous.curve import CohStatus
from isogenous.surface import rr_surface_chi


def dims(statuses):
    return tuple(s.value for s in statuses)


def test_kunneth_tables(S):
    assert dims(total_profile(bundle(S, "E2-2E1"), S)) == (0, 6, 24)
    assert dims(total_profile(bundle(S, "0", "F2-2F1"), S)) == (0, 6, 24)
    assert dims(total_profile(bundle(S, "E2-2E1", "F2-2F1"), S)) == (0, 0, 36)


def test_kunneth_formula_oracle():
    E = CohStatus.exact
    assert dims(kunneth((E(2), E(1)), (E(3), E(4)))) == (6, 2 * 4 + 3, 4)


def test_sum_difference_pinned_for_every_character(S):
    L = bundle(S, "E2-2E1", "F2-2F1")
    for chi in characters(S.group):
        p = invariant_profile(L.twist(chi), S)
        assert dims(p.invariant) == (0, 0, 4)
        assert p.invariant[2].kind == "pinned"
        assert p.chi == rr_surface_chi((-3, -3), S)


def test_structure_sheaf(S):
    p = invariant_profile(bundle(S), S)
    assert dims(p.invariant) == (1, 0, 0)
    twisted = invariant_profile(bundle(S, chi=(1, 2)), S)
    assert twisted.invariant[0].value == 0 and twisted.invariant[0].kind == "known"


def test_backward_differences_vanish(S):
    for text in ("2E1-E2", "2F1-F2", "2E1-E2+2F1-F2", "-2E1+E2+2F1-F2"):
        p = invariant_profile(parse_bundle(S, text), S)
        assert p.all_zero and all(s == ZERO_BY_TOTAL for s in p.invariant)


@pytest.mark.parametrize("a,b", [(-3, 0), (0, -3), (-3, -3), (3, -3), (9, 0), (-6, -6)])
def test_alternating_total_equals_group_order_times_chi(S, a, b):
    L = bundle(S, {"E1": a // 3} if a else {}, {"F1": b // 3} if b else {})
    tot = total_profile(L, S)
    if all(s.is_exact for s in tot):
        assert tot[0].value - tot[1].value + tot[2].value == 9 * rr_surface_chi((a, b), S)


def test_invariant_within_total(S):
    for a in range(-2, 3):
        for b in range(-2, 3):
            p = invariant_profile(bundle(S, {"E1": a, "E2": -b}, {"F1": b}), S)
            for inv, tot in zip(p.invariant, p.total):
                assert 0 <= inv.lo <= inv.hi <= tot.hi


def test_pigeonhole():
    assert pigeonhole_zero_character(6, 9) == 3
    assert pigeonhole_zero_character(12, 9) == 0
    with pytest.raises(ValueError):
        pigeonhole_zero_character(-1, 9)


def test_ext_table(S, quadruple):
    T = ext_table(quadruple, S)
    assert list(T.backward_pairs()) == [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)]
    assert dims(T[(0, 0)].invariant) == (1, 0, 0)


def test_parse_bundle_rejects_unknown_label(S):
    with pytest.raises(ValueError):
        parse_bundle(S, "E1+G7")
    assert str(parse_bundle(S, "E2-2E1+F2-2F1")) == str(bundle(S, "E2-2E1", "F2-2F1"))
