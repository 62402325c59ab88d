import itertools
import random

import pytest

from isogenous.algebra import AbelianInvariants, characters
from isogenous.cohomology import bundle
from isogenous.exceptional import SearchWindow, search_sequences, verify_exceptional_sequence
from isogenous.homological import (
    INF,
    Height,
    bicanonical_sections,
    complement_k_group,
    cyclic_ext1_check,
    height_analysis,
    hh_restriction_verdict,
    hkr_homology,
    hom_free_check,
    omega,
    phantom_pairing,
    pseudoheight,
    quasiphantom_verdict,
    relative_height,
    serre_wraparound_height,
)
from isogenous.presets import preset


def test_relative_heights(S, quadruple):
    L1, L2, L3, L4 = quadruple
    assert relative_height(L1, L1, S) == Height.exact(0)
    assert relative_height(L1, L4, S) == Height.exact(2)
    assert relative_height(L2, L1, S) == Height.exact(INF)
    assert relative_height(L2, L3, S) == Height.exact(INF)
    assert relative_height(L1, L2, S) == Height(1, 2)


def test_wraparound(S, quadruple):
    O = bundle(S)
    assert serre_wraparound_height(O, O, S) == Height.exact(4)
    assert serre_wraparound_height(quadruple[0], quadruple[1], S).lo >= 3


def test_wraparound_twist_symmetry(S, quadruple):
    for L, M in itertools.product(quadruple, repeat=2):
        base = serre_wraparound_height(L, M, S)
        for chi in characters(S.group):
            assert serre_wraparound_height(L.twist(chi), M.twist(chi), S) == base


def test_bicanonical_hypothesis(S):
    h = bicanonical_sections(S)
    assert h.value == 9 and h.kind == "pinned"


def test_pseudoheight(S, quadruple):
    assert pseudoheight(quadruple, S).interval == Height.exact(4)
    assert pseudoheight([bundle(S)], S).interval == Height.exact(4)


def test_pseudoheight_monotone_under_insertion(S):
    res = search_sequences(SearchWindow.symmetric(2), S)
    rng = random.Random(7)
    for cert in rng.sample(res.valid, 10):
        col = list(cert.collection)
        full = pseudoheight(col, S).interval.lo
        for r in range(1, len(col)):
            for sub in itertools.combinations(col, r):
                assert full <= pseudoheight(list(sub), S).interval.lo


def test_hom_free_and_cyclic(S, quadruple):
    hf = hom_free_check(quadruple, S)
    assert hf.verdict == "hom_free"
    assert len(hf.evidence) == 4 * 4 + 3 + 2 + 1 + 0  # i < j <= i + n on 8 objects
    cyc = cyclic_ext1_check(quadruple, S)
    assert cyc.verdict == "not_connected"
    wraps = [e for e in cyc.evidence if "wraparound" in e]
    assert len(wraps) == 10 and all(e["total"][1] == "0" for e in wraps)


def test_effective_member_breaks_hom_free(S):
    O = bundle(S)
    fibre = bundle(S, S.C.class_group.fiber_class)
    assert hom_free_check([O, fibre], S).verdict == "not_hom_free"


def test_canonical_pair_not_connected(S):
    assert cyclic_ext1_check([bundle(S), omega(S)], S).verdict == "not_connected"


def test_height_conclusion(S, quadruple):
    r = height_analysis(quadruple, S)
    assert r.pseudoheight == Height.exact(4) and r.height == Height.exact(4)
    assert r.chain_pseudoheight.interval == r.pseudoheight
    assert r.restriction == {0: "isomorphism", 1: "isomorphism", 2: "isomorphism", 3: "monomorphism", 4: "unknown"}


def test_height_without_hom_free(S):
    r = height_analysis([bundle(S), bundle(S, S.C.class_group.fiber_class)], S)
    assert r.hom_free.verdict == "not_hom_free"
    assert not any("Hom-free" in c for c in r.conclusions)


def test_restriction_verdicts():
    assert hh_restriction_verdict(2) == {0: "isomorphism", 1: "monomorphism", 2: "unknown", 3: "unknown", 4: "unknown"}
    assert set(hh_restriction_verdict(INF).values()) == {"isomorphism"}


def test_hkr(S):
    assert hkr_homology(S) == {-2: 0, -1: 0, 0: 4, 1: 0, 2: 0}
    assert sum(hkr_homology(b2=0).values()) == 2
    # total equals the sum of Betti numbers 1 + b1 + b2 + b3 + 1
    assert sum(hkr_homology(b2=5, pg=1, q=1).values()) == 2 + 4 * 1 + 5


def test_quasiphantom(S, quadruple):
    r = quasiphantom_verdict(verify_exceptional_sequence(quadruple, S), S)
    assert r.quasiphantom and r.additivity_ok
    assert sum(r.hh_complement.values()) == 0
    assert r.k_complement == AbelianInvariants(0, (3,) * 5)
    short = quasiphantom_verdict(verify_exceptional_sequence(quadruple[:3], S), S)
    assert short.hh_complement[0] == 1 and not short.quasiphantom and short.additivity_ok
    bad = quasiphantom_verdict(verify_exceptional_sequence(list(reversed(quadruple)), S), S)
    assert bad.refused and not bad.quasiphantom


def test_additivity_on_search_results(S):
    res = search_sequences(SearchWindow.symmetric(2), S)
    for cert in res.valid:
        r = quasiphantom_verdict(cert, S)
        assert sum(r.hh_surface.values()) == len(cert.collection) + sum(r.hh_complement.values())


def test_complement_k_group_z5():
    assert complement_k_group(preset("z5^2"), 4) == AbelianInvariants(0, (5, 5, 5))


@pytest.mark.parametrize("other,phantom", [(5, True), (64, True), (125, True), (243, False)])
def test_phantom_pairing(other, phantom):
    v = phantom_pairing(243, other)
    assert v.phantom == phantom
    assert v.gcd == (1 if phantom else 243)


def test_phantom_pairing_rejects_nonpositive():
    with pytest.raises(ValueError):
        phantom_pairing(0, 5)
