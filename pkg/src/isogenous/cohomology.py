"""Kunneth totals on X = C x D and what they imply for the G-invariant part.

A line bundle on S is an equivariant bundle on X: a class on C, a class on
D, and a character twist. H^k(S, L) is the G-invariant part of H^k(X, L).
The invariant part is inferred with sound rules only:

* zero_by_total: the whole of H^k(X, L) vanishes;
* known: L is a twist of O_X, so H^0 is the constants (invariant iff the
  twist is trivial), and for the trivial twist p_g = q = 0 gives (1, 0, 0);
* pullback: for L = kP_C + lP_D (fibres of the quotient maps) with trivial
  twist, sections of O(k) x O(l) on P^1 x P^1 pull back to invariant
  sections, so h^0(S, L) >= (k + 1)(l + 1);
* pinned: exactly one degree is open and chi(S, L) fixes it;
* bounded: 0 <= h^k(S, L) <= h^k(X, L).

Ext^k(L_i, L_j) is H^k(S, L_j - L_i) with character chi_j / chi_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import Character
from .curve import CohStatus, DivisorClass, curve_cohomology
from .surface import Bidegree, ProductQuotientSurface, rr_surface_chi


class InconsistentProfileError(ArithmeticError):
    """Riemann-Roch pinned a value outside the range allowed by the totals."""


@dataclass(frozen=True, eq=False)
class EquivariantLineBundle:
    c_class: DivisorClass
    d_class: DivisorClass
    character: Character

    @property
    def bidegree(self) -> Bidegree:
        return (self.c_class.degree, self.d_class.degree)

    @property
    def key(self) -> tuple:
        return (self.c_class.normal_form, self.d_class.normal_form, self.character.weights)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EquivariantLineBundle):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __add__(self, other: "EquivariantLineBundle") -> "EquivariantLineBundle":
        return EquivariantLineBundle(
            self.c_class + other.c_class, self.d_class + other.d_class, self.character * other.character
        )

    def __neg__(self) -> "EquivariantLineBundle":
        return EquivariantLineBundle(-self.c_class, -self.d_class, self.character.inverse())

    def __sub__(self, other: "EquivariantLineBundle") -> "EquivariantLineBundle":
        return self + (-other)

    def twist(self, chi: Character) -> "EquivariantLineBundle":
        return EquivariantLineBundle(self.c_class, self.d_class, self.character * chi)

    def is_structure_sheaf_twist(self) -> bool:
        return self.c_class.is_zero() and self.d_class.is_zero()

    def divisor_text(self) -> str:
        c, d = str(self.c_class), str(self.d_class)
        if c == "0":
            return d
        if d == "0":
            return c
        return c + ("" if d.startswith("-") else "+") + d

    def __str__(self) -> str:
        return f"O({self.divisor_text()})({','.join(map(str, self.character.weights))})"

    def to_json(self) -> dict:
        return {
            "C": str(self.c_class),
            "D": str(self.d_class),
            "character": list(self.character.weights),
            "bidegree": list(self.bidegree),
        }


def bundle(surface: ProductQuotientSurface, c="0", d="0", chi: Sequence[int] | Character | None = None) -> EquivariantLineBundle:
    """Convenience constructor: ``bundle(S, "E2-2E1", "F2-2F1", (1, 0))``."""
    if chi is None:
        character = surface.group.trivial_character()
    elif isinstance(chi, Character):
        character = chi
    else:
        character = surface.group.character(*chi)
    return EquivariantLineBundle(surface.C.divisor(c), surface.D.divisor(d), character)


def parse_bundle(surface: ProductQuotientSurface, text: str, chi=None) -> EquivariantLineBundle:
    """Parse ``"E2-2E1+F2-2F1"``: labels are routed to C or D by orbit name."""
    from .curve import parse_combination

    combo = parse_combination(text)
    c = {k: v for k, v in combo.items() if k in surface.C.labels}
    d = {k: v for k, v in combo.items() if k in surface.D.labels}
    unknown = set(combo) - set(c) - set(d)
    if unknown:
        raise ValueError(f"unknown orbit labels {sorted(unknown)}")
    return bundle(surface, c, d, chi)


def kunneth(pC: tuple[CohStatus, CohStatus], pD: tuple[CohStatus, CohStatus]) -> tuple[CohStatus, CohStatus, CohStatus]:
    (a0, a1), (b0, b1) = pC, pD
    return a0 * b0, a0 * b1 + a1 * b0, a1 * b1


@dataclass(frozen=True)
class InvStatus:
    """Dimension of an invariant cohomology group and the rule that produced it."""

    kind: str  # known | zero_by_total | pinned | pullback | bounded
    lo: int
    hi: int

    @classmethod
    def known(cls, n: int) -> "InvStatus":
        return cls("known", n, n)

    @classmethod
    def pinned(cls, n: int) -> "InvStatus":
        return cls("pinned", n, n)

    @classmethod
    def bounded(cls, lo: int, hi: int) -> "InvStatus":
        return cls("bounded", lo, hi)

    @property
    def determined(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> int:
        if not self.determined:
            raise ValueError(f"h = {self} is not determined")
        return self.lo

    @property
    def is_zero(self) -> bool:
        return self.hi == 0

    @property
    def is_nonzero(self) -> bool:
        return self.lo > 0

    def to_json(self) -> dict:
        return {"rule": self.kind, "value": self.lo} if self.determined else {"rule": self.kind, "range": [self.lo, self.hi]}

    def __str__(self) -> str:
        return str(self.lo) if self.determined else f"[{self.lo},{self.hi}]"


ZERO_BY_TOTAL = InvStatus("zero_by_total", 0, 0)


@dataclass(frozen=True)
class CohomologyProfile:
    bundle: EquivariantLineBundle
    total: tuple[CohStatus, CohStatus, CohStatus]
    invariant: tuple[InvStatus, InvStatus, InvStatus]
    chi: int

    @property
    def all_zero(self) -> bool:
        return all(s.is_zero for s in self.invariant)

    @property
    def undetermined_degrees(self) -> list[int]:
        return [k for k, s in enumerate(self.invariant) if not s.determined]

    def to_json(self) -> dict:
        return {
            "bundle": self.bundle.to_json(),
            "total": [s.to_json() for s in self.total],
            "invariant": [s.to_json() for s in self.invariant],
            "chi_S": self.chi,
        }


def total_profile(L: EquivariantLineBundle, surface: ProductQuotientSurface) -> tuple[CohStatus, CohStatus, CohStatus]:
    return kunneth(curve_cohomology(surface.C, L.c_class), curve_cohomology(surface.D, L.d_class))


def _fibre_multiple(cls: DivisorClass) -> int | None:
    group = cls.group
    k, r = divmod(cls.degree, group.curve.group.order)
    if r or k < 0 or cls != group.fiber_class * k:
        return None
    return k


def invariant_profile(L: EquivariantLineBundle, surface: ProductQuotientSurface) -> CohomologyProfile:
    cache = surface._cache.setdefault("profile", {})
    hit = cache.get(L.key)
    if hit is not None:
        return hit
    total = total_profile(L, surface)
    chi = rr_surface_chi(L.bidegree, surface)
    inv: list[InvStatus | None] = [None, None, None]
    if L.is_structure_sheaf_twist():
        if L.character.is_trivial():
            inv = [InvStatus.known(1), InvStatus.known(0), InvStatus.known(0)]
        else:
            inv[0] = InvStatus.known(0)
    for k in range(3):
        if inv[k] is None and total[k].hi == 0:
            inv[k] = ZERO_BY_TOTAL
    open_degrees = [k for k in range(3) if inv[k] is None]
    if len(open_degrees) == 1:
        k = open_degrees[0]
        rest = sum((-1) ** j * inv[j].lo for j in range(3) if j != k)
        value = (-1) ** k * (chi - rest)
        if not 0 <= value <= total[k].hi:
            raise InconsistentProfileError(f"{L}: chi pins h^{k} = {value} outside [0, {total[k].hi}]")
        inv[k] = InvStatus.pinned(value)
    else:
        for k in open_degrees:
            inv[k] = InvStatus.bounded(0, total[k].hi)
        if 0 in open_degrees and L.character.is_trivial():
            k, l = _fibre_multiple(L.c_class), _fibre_multiple(L.d_class)
            if k is not None and l is not None:
                inv[0] = InvStatus("pullback", (k + 1) * (l + 1), total[0].hi)
    profile = CohomologyProfile(L, total, tuple(inv), chi)
    cache[L.key] = profile
    return profile


def pigeonhole_zero_character(total_dim: int, n_characters: int) -> int:
    """Lower bound on the number of characters whose isotypic part vanishes.

    The total dimension is the sum of the multiplicities over all characters,
    so at most ``total_dim`` of them can be nonzero.
    """
    if total_dim < 0:
        raise ValueError("dimension must be nonnegative")
    return max(0, n_characters - total_dim)


@dataclass(frozen=True)
class ExtTable:
    collection: tuple[EquivariantLineBundle, ...]
    entries: dict

    def __getitem__(self, ij: tuple[int, int]) -> CohomologyProfile:
        return self.entries[ij]

    def backward_pairs(self) -> Iterable[tuple[int, int]]:
        """(i, j) with i > j, in the order (1,0), (2,0), (2,1), ..."""
        n = len(self.collection)
        for i in range(n):
            for j in range(i):
                yield i, j


def ext_profile(Li: EquivariantLineBundle, Lj: EquivariantLineBundle, surface: ProductQuotientSurface) -> CohomologyProfile:
    """Profile of Ext^*(L_i, L_j)."""
    return invariant_profile(Lj - Li, surface)


def ext_table(collection: Sequence[EquivariantLineBundle], surface: ProductQuotientSurface) -> ExtTable:
    if not collection:
        raise ValueError("empty collection")
    entries = {
        (i, j): ext_profile(Li, Lj, surface)
        for i, Li in enumerate(collection)
        for j, Lj in enumerate(collection)
    }
    return ExtTable(tuple(collection), entries)
