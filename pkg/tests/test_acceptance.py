"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import contextlib
import itertools
import time

import pytest

from isogenous.algebra import AbelianInvariants, characters, matmul, smith_normal_form
from isogenous.cohomology import bundle, total_profile
from isogenous.curve import canonical_class, curve_cohomology, effective_classes_of_degree
from isogenous.exceptional import (
    INVALID,
    SearchWindow,
    character_choices,
    max_length,
    standard_quadruple,
    search_sequences,
    verify_exceptional_sequence,
)
from isogenous.homological import (
    Height,
    bicanonical_sections,
    cyclic_ext1_check,
    height_analysis,
    hkr_homology,
    hom_free_check,
    phantom_pairing,
    quasiphantom_verdict,
)
from isogenous.obstruction import no_go_z2_cubed, no_go_z2_fourth
from isogenous.surface import euler_characteristic_rational, noether_invariants, rr_surface_chi

from test_algebra import oracle_diagonal


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(number: int, title: str):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            with capsys.disabled():
                status = "PASS" if ok else "FAIL"
                print(f"\n[acceptance {number:2d}] {status}  {title}  ({time.perf_counter() - start:.2f}s)")

    return run


def test_01_class_group(criterion, S):
    with criterion(1, "class groups Z + Z/3 on C and D, two effective degree-3 classes"):
        start = time.perf_counter()
        for C in (S.C, S.D):
            assert C.class_group.invariants == AbelianInvariants(1, (3,))
        assert sorted(map(str, effective_classes_of_degree(S.C, 3))) == ["E1", "E2"]
        assert sorted(map(str, effective_classes_of_degree(S.D, 3))) == ["F1", "F2"]
        assert time.perf_counter() - start < 1.0


def test_02_curve_cohomology(criterion, S):
    with criterion(2, "(h0, h1) of 2E1-E2 = (0, 0) and of E2-2E1 = (0, 6)"):
        for C, a, b in ((S.C, "E1", "E2"), (S.D, "F1", "F2")):
            h = curve_cohomology(C, C.divisor(f"2{a}-{b}"))
            assert (h[0].value, h[1].value) == (0, 0)
            h = curve_cohomology(C, C.divisor(f"{b}-2{a}"))
            assert (h[0].value, h[1].value) == (0, 6)


def test_03_kunneth(criterion, S):
    with criterion(3, "Kunneth totals (0,6,24), (0,6,24), (0,0,36)"):
        dims = lambda L: tuple(s.value for s in total_profile(L, S))  # noqa: E731
        assert dims(bundle(S, "E2-2E1")) == (0, 6, 24)
        assert dims(bundle(S, "0", "F2-2F1")) == (0, 6, 24)
        assert dims(bundle(S, "E2-2E1", "F2-2F1")) == (0, 0, 36)


def test_04_exceptionality(criterion, S):
    with criterion(4, "quadruple valid for all 729 character choices, maximal, K = Z^4 + (Z/3)^5"):
        count = 0
        for chars in character_choices(S, "all"):
            cert = verify_exceptional_sequence(standard_quadruple(S, chars), S)
            assert cert.valid and cert.maximal
            count += 1
        assert count == 729
        assert noether_invariants(S).k_group == AbelianInvariants(4, (3,) * 5)
        assert max_length(S) == 4


def test_05_negative_control(criterion, S, quadruple):
    with criterion(5, "reversed quadruple fails with chi_S = 2 witness"):
        cert = verify_exceptional_sequence(list(reversed(quadruple)), S)
        assert cert.verdict == INVALID
        w = cert.witness
        assert w["rule"] == "euler_characteristic" and w["chi_S"] == 2
        later, earlier = (i - 1 for i in w["pair"])
        diff = cert.collection[earlier] - cert.collection[later]
        assert rr_surface_chi(diff.bidegree, S) == 2


def test_06_heights(criterion, S, quadruple):
    with criterion(6, "Hom-free, not cyclically Ext^1-connected, h0(2K) = 9, ph = h = 4, restriction verdicts"):
        assert hom_free_check(quadruple, S).verdict == "hom_free"
        assert cyclic_ext1_check(quadruple, S).verdict == "not_connected"
        assert bicanonical_sections(S).value == 9
        r = height_analysis(quadruple, S)
        assert r.pseudoheight == Height.exact(4) and r.height == Height.exact(4)
        assert all(r.restriction[k] == "isomorphism" for k in (0, 1, 2))
        assert r.restriction[3] == "monomorphism"


def test_07_quasiphantom(criterion, S, quadruple):
    with criterion(7, "HH_*(S) total 4, HH_*(A) = 0, K(A) = (Z/3)^5"):
        assert sum(hkr_homology(S).values()) == 4
        r = quasiphantom_verdict(verify_exceptional_sequence(quadruple, S), S)
        assert sum(r.hh_complement.values()) == 0
        assert r.k_complement == AbelianInvariants(0, (3,) * 5)
        assert r.quasiphantom


def test_08_phantom_pairing(criterion):
    with criterion(8, "243 coprime to 5, 64, 125; 243 vs 243 gives no conclusion"):
        for other in (5, 64, 125):
            assert phantom_pairing(243, other).phantom
        assert phantom_pairing(243, 243).verdict == "no conclusion"


def test_09_no_go(criterion):
    with criterion(9, "both no-go residue proofs UNSATISFIABLE, scans at 100 / 200 empty"):
        a = no_go_z2_cubed(100)
        b = no_go_z2_fourth(200)
        assert a.verdict == b.verdict == "UNSATISFIABLE"
        assert a.scan_solutions == [] and b.scan_solutions == []
        assert any("f_1 = f_2 = 4" in line for line in a.transcript)


def test_10_property_suites(criterion, S):
    with criterion(10, "RR/Serre, |G| chi_S = chi_X, twist invariance, SNF oracle: zero violations"):
        violations = 0
        # (a) curve Riemann-Roch and Serre duality
        for C in (S.C, S.D):
            K = canonical_class(C)
            for coeffs in itertools.product(range(-3, 4), repeat=4):
                D = C.divisor(dict(zip(C.labels, coeffs)))
                h0, h1 = curve_cohomology(C, D)
                k0, k1 = curve_cohomology(C, K - D)
                chi = D.degree + 1 - C.genus
                violations += (h0.lo - h1.lo, h0.hi - h1.hi) != (chi, chi)
                violations += ((h0.lo, h0.hi), (h1.lo, h1.hi)) != ((k1.lo, k1.hi), (k0.lo, k0.hi))
        # (b) |G| chi_S = chi_X
        for a, b in itertools.product(range(-12, 13), repeat=2):
            violations += 9 * euler_characteristic_rational((a, b), S) != (a - 3) * (b - 3)
        assert 9 * rr_surface_chi((-3, -3), S) == 36
        # (c) twist invariance over the search window
        O = bundle(S)
        for L in SearchWindow.symmetric(2).bundles(S):
            base = verify_exceptional_sequence([O, L], S).verdict
            for chi in characters(S.group):
                violations += verify_exceptional_sequence([O.twist(chi), L.twist(chi)], S).verdict != base
        # (d) SNF against determinantal divisors on all small matrices
        for shape in ((1, 1), (1, 2), (2, 1), (2, 2)):
            m, n = shape
            for entries in itertools.product(range(-2, 3), repeat=m * n):
                M = [list(entries[r * n:(r + 1) * n]) for r in range(m)]
                F = smith_normal_form(M)
                violations += list(F.diagonal) != oracle_diagonal(M)
                violations += matmul(matmul(F.U, M), F.V) != F.D()
        assert violations == 0


def test_11_search(criterion, S, quadruple):
    with criterion(11, "window [-2,2] search contains the quadruple and its swap; all results re-verify"):
        res = search_sequences(SearchWindow.symmetric(2), S)
        swap = [quadruple[0], quadruple[2], quadruple[1], quadruple[3]]
        assert res.contains(quadruple) and res.contains(swap)
        for cert in res.valid:
            assert verify_exceptional_sequence(cert.collection, S).valid
