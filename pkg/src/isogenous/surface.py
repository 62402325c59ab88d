"""Product-quotient surfaces S = (C x D)/G with p_g = q = 0.

Numerical data of a line bundle on S is its bidegree (a, b) on X = C x D.
Intersection numbers on S are those on X divided by |G|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .algebra import AbelianInvariants, FinAbGroup, GroupElement, subgroup_generated
from .curve import BranchDataError, CurveWithAction, DivisorClass, canonical_class


class NonIntegralError(ValueError):
    """An intersection number or Euler characteristic on S came out fractional."""


Bidegree = tuple[int, int]


@dataclass(frozen=True)
class ProductQuotientSurface:
    C: CurveWithAction
    D: CurveWithAction
    label: str | None = None
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.C.group != self.D.group:
            raise BranchDataError("C and D must carry the same group")
        order = self.group.order
        if order != (self.C.genus - 1) * (self.D.genus - 1):
            raise BranchDataError(f"|G| = {order} != (g_C - 1)(g_D - 1)")
        free, witness = freeness_check(self)
        if not free:
            raise BranchDataError(f"action on C x D is not free: {witness.coords} fixes points on both curves")

    @property
    def group(self) -> FinAbGroup:
        return self.C.group

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def K_C(self) -> DivisorClass:
        return canonical_class(self.C)

    @property
    def K_D(self) -> DivisorClass:
        return canonical_class(self.D)

    @property
    def canonical_bidegree(self) -> Bidegree:
        return (2 * self.C.genus - 2, 2 * self.D.genus - 2)

    @property
    def k_squared(self) -> int:
        K = self.canonical_bidegree
        return intersection_on_S(K, K, self.order)


def freeness_check(surface_or_curves, D: CurveWithAction | None = None) -> tuple[bool, GroupElement | None]:
    """True iff no nonidentity element fixes a point of C and a point of D."""
    if D is None:
        C, D = surface_or_curves.C, surface_or_curves.D
    else:
        C = surface_or_curves
    on_D = set()
    for o in D.orbits:
        on_D.update(subgroup_generated(o.stabilizer_generator))
    for o in C.orbits:
        for g in subgroup_generated(o.stabilizer_generator)[1:]:
            if g in on_D:
                return False, g
    return True, None


def intersection_on_S(L1: Bidegree, L2: Bidegree, order: int) -> int:
    return _integral(intersection_on_S_rational(L1, L2, order), f"{L1}.{L2}")


def intersection_on_S_rational(L1: Bidegree, L2: Bidegree, order: int) -> Fraction:
    if order <= 0:
        raise ValueError("|G| must be positive")
    (a1, b1), (a2, b2) = L1, L2
    return Fraction(a1 * b2 + a2 * b1, order)


def _integral(q: Fraction, what: str) -> int:
    if q.denominator != 1:
        raise NonIntegralError(f"{what} = {q} is not an integer; the class does not descend to S")
    return q.numerator


def euler_characteristic_rational(L: Bidegree, surface: ProductQuotientSurface) -> Fraction:
    """1 + (L.L - L.K)/2 without the integrality check."""
    K = surface.canonical_bidegree
    n = surface.order
    return 1 + (intersection_on_S_rational(L, L, n) - intersection_on_S_rational(L, K, n)) / 2


def rr_surface_chi(L: Bidegree, surface: ProductQuotientSurface) -> int:
    """Riemann-Roch on S: chi(L) = chi(O_S) + L.(L - K_S)/2, with chi(O_S) = 1."""
    n = surface.order
    K = surface.canonical_bidegree
    LL = intersection_on_S(L, L, n)
    LK = intersection_on_S(L, K, n)
    return _integral(1 + Fraction(LL - LK, 2), f"chi{L}")


# Torsion of H_1(S, Z) for the four abelian groups, from the classification.
H1_TORSION: dict[str, tuple[int, ...]] = {
    "z2^3": (2, 2, 2, 2, 4, 4),
    "z2^4": (4, 4, 4, 4),
    "z3^2": (3, 3, 3, 3, 3),
    "z5^2": (5, 5, 5),
}

# Real dimension of the moduli component, documentation only.
MODULI_DIMENSION = {"z2^3": 5, "z2^4": 4, "z3^2": 2, "z5^2": 0}


@dataclass(frozen=True)
class SurfaceInvariants:
    chi_O: int
    k_squared: int
    chi_top: int
    b2: int
    h1: AbelianInvariants | None = None
    pic: AbelianInvariants | None = None
    k_group: AbelianInvariants | None = None
    preset: bool = True

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "chi_O": self.chi_O,
            "K^2": self.k_squared,
            "chi_top": self.chi_top,
            "b2": self.b2,
            "preset": self.preset,
        }
        for key in ("h1", "pic", "k_group"):
            v = getattr(self, key)
            out[key] = v.to_json() if v is not None else None
        return out


def noether_numbers(k_squared: int, chi_O: int = 1) -> tuple[int, int]:
    """(chi_top, b_2) from Noether's formula, using b_1 = b_3 = 0."""
    chi_top = 12 * chi_O - k_squared
    b2 = chi_top - 2
    if b2 < 0:
        raise ValueError(f"negative b_2 = {b2} from K^2 = {k_squared}")
    return chi_top, b2


def picard_and_k_group(label: str) -> tuple[AbelianInvariants, AbelianInvariants]:
    """Pic(S) = Z^2 + Tors(H_1) and K(S) = Z^2 + Pic(S)."""
    if label not in H1_TORSION:
        raise KeyError(f"unknown group label {label!r}; expected one of {sorted(H1_TORSION)}")
    tors = H1_TORSION[label]
    return AbelianInvariants(2, tors), AbelianInvariants(4, tors)


def noether_invariants(surface: ProductQuotientSurface | None = None, *, k_squared: int | None = None) -> SurfaceInvariants:
    if surface is not None:
        k_squared = surface.k_squared
    if k_squared is None:
        raise ValueError("need a surface or K^2")
    chi_top, b2 = noether_numbers(k_squared)
    label = surface.label if surface is not None else None
    if label in H1_TORSION:
        pic, k = picard_and_k_group(label)
        return SurfaceInvariants(1, k_squared, chi_top, b2, AbelianInvariants(0, H1_TORSION[label]), pic, k)
    return SurfaceInvariants(1, k_squared, chi_top, b2, preset=False)
