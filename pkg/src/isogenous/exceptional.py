"""Exceptional sequences of line bundles on S.

Every line bundle on a surface with p_g = q = 0 is exceptional, so a
sequence L_1, ..., L_n is exceptional iff Ext^*(L_i, L_j) = 0 for i > j,
i.e. every backward difference L_j - L_i has vanishing invariant
cohomology. Each backward pair is classified as

* zero: every degree provably vanishes;
* nonzero: some degree is provably nonzero, or chi(S, L_j - L_i) != 0;
* open: neither (the sequence is then "undetermined", never a pass).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import Character, characters
from .cohomology import (
    CohomologyProfile,
    EquivariantLineBundle,
    bundle,
    ext_profile,
    invariant_profile,
    pigeonhole_zero_character,
    total_profile,
)
from .surface import ProductQuotientSurface, noether_invariants

VALID, INVALID, UNDETERMINED = "valid", "invalid", "undetermined"


def classify(profile: CohomologyProfile) -> str:
    if profile.all_zero:
        return "zero"
    if any(s.is_nonzero for s in profile.invariant) or profile.chi != 0:
        return "nonzero"
    return "open"


def _nonzero_reason(profile: CohomologyProfile) -> dict:
    for k, s in enumerate(profile.invariant):
        if s.is_nonzero:
            return {"degree": k, "rule": s.kind, "dimension": s.lo}
    return {"degree": None, "rule": "euler_characteristic", "chi_S": profile.chi}


@dataclass(frozen=True)
class PairEvidence:
    later: int  # 0-based index i of the source, i > j
    earlier: int
    profile: CohomologyProfile
    status: str

    def to_json(self) -> dict:
        out = {
            "pair": [self.later + 1, self.earlier + 1],
            "difference": self.profile.bundle.divisor_text(),
            "character": list(self.profile.bundle.character.weights),
            "status": self.status,
            "rules": [s.kind for s in self.profile.invariant],
            "invariant": [str(s) for s in self.profile.invariant],
            "total": [str(s) for s in self.profile.total],
            "chi_S": self.profile.chi,
        }
        if self.status == "nonzero":
            out["reason"] = _nonzero_reason(self.profile)
        return out


@dataclass(frozen=True)
class ExceptionalCertificate:
    collection: tuple[EquivariantLineBundle, ...]
    verdict: str
    evidence: tuple[PairEvidence, ...]
    max_length: int
    witness: dict | None = None

    @property
    def valid(self) -> bool:
        return self.verdict == VALID

    @property
    def maximal(self) -> bool:
        return self.valid and len(self.collection) == self.max_length

    def to_json(self) -> dict:
        return {
            "collection": [L.to_json() for L in self.collection],
            "verdict": self.verdict,
            "length": len(self.collection),
            "max_length": self.max_length,
            "maximal_length": self.maximal,
            "evidence": [e.to_json() for e in self.evidence],
            "witness": self.witness,
        }


def max_length(surface: ProductQuotientSurface) -> int:
    """Free rank of K(S) = Z^2 + Pic(S), i.e. 2 + b_2."""
    inv = noether_invariants(surface)
    if inv.k_group is not None:
        return inv.k_group.free_rank
    return 2 + inv.b2


def is_exceptional_object(L: EquivariantLineBundle, surface: ProductQuotientSurface) -> bool:
    p = ext_profile(L, L, surface)
    return tuple(s.lo for s in p.invariant) == (1, 0, 0) and all(s.determined for s in p.invariant)


def verify_exceptional_sequence(
    collection: Sequence[EquivariantLineBundle], surface: ProductQuotientSurface
) -> ExceptionalCertificate:
    collection = tuple(collection)
    if not collection:
        raise ValueError("empty collection")
    top = max_length(surface)
    evidence = []
    for i in range(len(collection)):
        for j in range(i):
            p = ext_profile(collection[i], collection[j], surface)
            evidence.append(PairEvidence(i, j, p, {"zero": "zero", "nonzero": "nonzero", "open": "open"}[classify(p)]))
    for k, L in enumerate(collection):
        if not is_exceptional_object(L, surface):
            return ExceptionalCertificate(collection, INVALID, tuple(evidence), top, {"object": k + 1, "reason": "not exceptional"})
    failed = [e for e in evidence if e.status == "nonzero"]
    if failed:
        e = failed[0]
        witness = {"pair": [e.later + 1, e.earlier + 1], "difference": e.profile.bundle.divisor_text(), **_nonzero_reason(e.profile)}
        return ExceptionalCertificate(collection, INVALID, tuple(evidence), top, witness)
    if len(collection) > top:
        return ExceptionalCertificate(
            collection, INVALID, tuple(evidence), top,
            {"reason": "length exceeds the rank of K(S)", "length": len(collection), "rank": top},
        )
    if any(e.status == "open" for e in evidence):
        e = next(e for e in evidence if e.status == "open")
        return ExceptionalCertificate(
            collection, UNDETERMINED, tuple(evidence), top,
            {"pair": [e.later + 1, e.earlier + 1], "difference": e.profile.bundle.divisor_text(), "reason": "open"},
        )
    return ExceptionalCertificate(collection, VALID, tuple(evidence), top)


def standard_quadruple(
    surface: ProductQuotientSurface, chars: Sequence[Character] | None = None
) -> list[EquivariantLineBundle]:
    """O, O(E2-2E1), O(F2-2F1), O(E2-2E1+F2-2F1) with the given twists.

    E1, E2 (resp. F1, F2) are the first two branch orbits on each curve.
    """
    e1, e2 = surface.C.labels[:2]
    f1, f2 = surface.D.labels[:2]
    ce = {e2: 1, e1: -2}
    df = {f2: 1, f1: -2}
    if chars is None:
        chars = [surface.group.trivial_character()] * 4
    return [
        bundle(surface, {}, {}, chars[0]),
        bundle(surface, ce, {}, chars[1]),
        bundle(surface, {}, df, chars[2]),
        bundle(surface, ce, df, chars[3]),
    ]


def character_choices(surface: ProductQuotientSurface, mode: str = "all") -> Iterable[tuple[Character, ...]]:
    """Twist tuples (1, c2, c3, c4): with mode "all", every difference character."""
    G = surface.group
    triv = G.trivial_character()
    if mode == "trivial":
        yield (triv,) * 4
        return
    for c2, c3, c4 in itertools.product(characters(G), repeat=3):
        yield (triv, c2, c3, c4)


# --- search -----------------------------------------------------------------


@dataclass(frozen=True)
class SearchWindow:
    """Coefficient ranges for aE1 + bE2 on C and cF1 + dF2 on D."""

    a: tuple[int, int] = (-2, 2)
    b: tuple[int, int] = (-2, 2)
    c: tuple[int, int] = (-2, 2)
    d: tuple[int, int] = (-2, 2)
    characters: str | tuple[tuple[int, ...], ...] = "trivial"

    @classmethod
    def symmetric(cls, n: int, characters="trivial") -> "SearchWindow":
        return cls((-n, n), (-n, n), (-n, n), (-n, n), characters)

    def character_list(self, surface: ProductQuotientSurface) -> list[Character]:
        if self.characters == "trivial":
            return [surface.group.trivial_character()]
        if self.characters == "all":
            return characters(surface.group)
        return [surface.group.character(*w) for w in self.characters]

    def bundles(self, surface: ProductQuotientSurface) -> list[EquivariantLineBundle]:
        """Distinct bundles in the window, first lexicographic representative kept."""
        e1, e2 = surface.C.labels[:2]
        f1, f2 = surface.D.labels[:2]
        seen = set()
        out = []
        rng = lambda r: range(r[0], r[1] + 1)  # noqa: E731
        for a, b, c, d in itertools.product(rng(self.a), rng(self.b), rng(self.c), rng(self.d)):
            for chi in self.character_list(surface):
                L = bundle(surface, {e1: a, e2: b}, {f1: c, f2: d}, chi)
                if L.key not in seen:
                    seen.add(L.key)
                    out.append(L)
        return out

    def to_json(self) -> dict:
        chars = self.characters if isinstance(self.characters, str) else [list(w) for w in self.characters]
        return {"a": list(self.a), "b": list(self.b), "c": list(self.c), "d": list(self.d), "characters": chars}


@dataclass
class SearchResult:
    window: SearchWindow
    valid: list[ExceptionalCertificate] = field(default_factory=list)
    undetermined: list[tuple[EquivariantLineBundle, ...]] = field(default_factory=list)

    def contains(self, collection: Sequence[EquivariantLineBundle]) -> bool:
        target = tuple(L.key for L in collection)
        return any(tuple(L.key for L in cert.collection) == target for cert in self.valid)

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "valid_count": len(self.valid),
            "valid": [[str(L) for L in c.collection] for c in self.valid],
            "undetermined_count": len(self.undetermined),
            "undetermined": [[str(L) for L in col] for col in self.undetermined],
        }


def search_sequences(window: SearchWindow, surface: ProductQuotientSurface, length: int = 4) -> SearchResult:
    """All sequences (O, L_2, ..., L_length) of window bundles that are exceptional.

    The first member is normalized to the untwisted structure sheaf; the
    rest run over the window in lexicographic order. Pair statuses are
    tabulated once as bitmasks over the pool.
    """
    first = bundle(surface)
    pool = [first] + [L for L in window.bundles(surface) if L.key != first.key]
    n = len(pool)
    raw = [(L.c_class.coefficients, L.d_class.coefficients, L.character.weights) for L in pool]
    orders = surface.group.cyclic_orders
    status_cache: dict[tuple, str] = {}

    def status(later: int, earlier: int) -> str:
        (c1, d1, w1), (c0, d0, w0) = raw[later], raw[earlier]
        key = (
            tuple(a - b for a, b in zip(c0, c1)),
            tuple(a - b for a, b in zip(d0, d1)),
            tuple((a - b) % m for a, b, m in zip(w0, w1, orders)),
        )
        s = status_cache.get(key)
        if s is None:
            s = status_cache[key] = classify(invariant_profile(pool[earlier] - pool[later], surface))
        return s

    # allowed[e] / opened[e]: bitmask of bundles that may follow e / follow it with an open pair
    allowed = [0] * n
    opened = [0] * n
    for e in range(n):
        for l in range(1, n):
            if l == e:
                continue
            st = status(l, e)
            if st != "nonzero":
                allowed[e] |= 1 << l
                if st == "open":
                    opened[e] |= 1 << l

    result = SearchResult(window)

    def extend(prefix: list[int], mask: int, open_mask: int, is_open: bool):
        if len(prefix) == length:
            col = [pool[i] for i in prefix]
            if is_open:
                result.undetermined.append(tuple(col))
            else:
                result.valid.append(verify_exceptional_sequence(col, surface))
            return
        m = mask
        while m:
            low = m & -m
            l = low.bit_length() - 1
            m ^= low
            extend(prefix + [l], mask & allowed[l], open_mask | opened[l], is_open or bool(open_mask & low))

    extend([0], allowed[0], opened[0], False)
    return result


# --- formality and deformation certificates ---------------------------------


def _longest_nonunit_chain(collection, surface) -> tuple[int, list[int]]:
    """Longest i_0 < i_1 < ... with every Ext^*(L_{i_s}, L_{i_{s+1}}) not provably zero."""
    n = len(collection)
    edge = {
        (i, j): not invariant_profile(collection[j] - collection[i], surface).all_zero
        for i in range(n) for j in range(i + 1, n)
    }
    best: list[int] = [0]
    for r in range(1, n + 1):
        for chain in itertools.combinations(range(n), r):
            if all(edge[(chain[s], chain[s + 1])] for s in range(r - 1)) and r > len(best):
                best = list(chain)
    return len(best) - 1, best


def formality_certificate(collection: Sequence[EquivariantLineBundle], surface: ProductQuotientSurface) -> dict:
    """Vanishing hypotheses under which higher products on the Ext algebra vanish.

    With a strictly unital minimal model, m_n (n >= 3) needs n composable
    non-unit morphisms. If the cross Ext between the two middle members
    vanishes in both directions, the longest composable chain of nonzero
    non-unit Ext spaces has length 2, so every m_n with n >= 3 is zero.
    """
    collection = list(collection)
    out: dict = {"certified": False}
    if len(collection) != 4:
        out["reason"] = "needs a length-4 collection"
        return out
    L1, L2, L3, L4 = collection
    d2, d3 = L2 - L1, L3 - L1
    on_c = not d2.c_class.is_zero() and d2.d_class.is_zero()
    on_d = d3.c_class.is_zero() and not d3.d_class.is_zero()
    if not (on_c and on_d):
        out["reason"] = "middle members are not supported on different factors"
        return out
    cross = {}
    for name, diff in (("Ext(L2,L3)", L3 - L2), ("Ext(L3,L2)", L2 - L3)):
        tot = total_profile(diff, surface)
        cross[name] = {"difference": diff.divisor_text(), "total": [str(s) for s in tot]}
        if any(s.hi for s in tot):
            out.update(reason=f"{name} does not vanish on X", cross=cross)
            return out
    length, chain = _longest_nonunit_chain(collection, surface)
    out.update(
        cross=cross,
        longest_nonunit_chain=[i + 1 for i in chain],
        longest_chain_length=length,
        certified=length <= 2,
        conclusion="m_n = 0 for n >= 3 on the strictly unital minimal model" if length <= 2 else None,
    )
    return out


def deformation_invariance_certificate(surface: ProductQuotientSurface) -> dict:
    """Existence of twists making Ext between the quadruple concentrated in degree 2.

    With twists (1, a, b, ab), Ext(L1,L2) and Ext(L3,L4) are H^*(E2-2E1) twisted
    by a, and Ext(L1,L3), Ext(L2,L4) are H^*(F2-2F1) twisted by b. Pigeonhole
    over characters gives a and b killing the invariant H^1.
    """
    G = surface.group
    n_chars = G.order
    L1, L2, L3, L4 = standard_quadruple(surface)
    checks: dict = {}
    ok = True
    for name, diff in (("E-slot", L2 - L1), ("F-slot", L3 - L1)):
        tot = total_profile(diff, surface)
        h1 = tot[1]
        bound = pigeonhole_zero_character(h1.hi, n_chars) if h1.is_exact else 0
        zero_h0 = tot[0].hi == 0
        checks[name] = {
            "difference": diff.divisor_text(),
            "total": [str(s) for s in tot],
            "h1_total": h1.hi,
            "characters": n_chars,
            "admissible_characters_at_least": bound,
            "h0_vanishes": zero_h0,
        }
        ok = ok and bound > 0 and zero_h0
    fourth = []
    for chi in characters(G):
        p = invariant_profile((L4 - L1).twist(chi), surface)
        fourth.append(tuple(s.lo if s.determined else None for s in p.invariant))
    checks["fourth"] = {
        "difference": (L4 - L1).divisor_text(),
        "invariant_profiles": sorted(set(fourth), key=str),
        "uniform": len(set(fourth)) == 1,
    }
    ok = ok and len(set(fourth)) == 1 and None not in fourth[0] and fourth[0][:2] == (0, 0)
    for name, diff in (("cross 2->3", L3 - L2), ("cross 3->2", L2 - L3)):
        tot = total_profile(diff, surface)
        checks[name] = [str(s) for s in tot]
        ok = ok and not any(s.hi for s in tot)
    checks["certified"] = ok
    if ok:
        checks["conclusion"] = (
            "some twists (1, a, b, ab) make every Ext between distinct members live in degree 2; "
            "products of two degree-2 classes land in Ext^4 = 0, so the endomorphism algebra is determined"
        )
    return checks
