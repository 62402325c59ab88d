"""Curves with an abelian group action and a genus-0 quotient.

The invariant divisor class group is presented on generators
``[orbit_1, ..., orbit_k, P]`` where ``P`` is the fibre class pi^*(point) of
the quotient map C -> C/G = P^1. Relations come from two pullback families:

(a) P ~ |S_i| * O_i for every branch orbit;
(b) for each subgroup H with C/H of genus 0, every orbit on which H acts
    freely and transitively is a single unramified fibre of C -> C/H, and
    all such orbits are linearly equivalent.

All emitted relations are true; completeness is only checked on presets.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .algebra import (
    AbelianInvariants,
    FinAbGroup,
    GroupElement,
    PresentedGroup,
    all_subgroups,
    span,
    subgroup_generated,
)


class BranchDataError(ValueError):
    """Branch data inconsistent with Riemann-Hurwitz or the generating-vector condition."""


@dataclass(frozen=True)
class Orbit:
    label: str
    stabilizer_generator: GroupElement
    degree: int

    @property
    def stabilizer(self) -> frozenset[GroupElement]:
        return frozenset(subgroup_generated(self.stabilizer_generator))

    @property
    def stabilizer_order(self) -> int:
        return len(self.stabilizer)


@dataclass(frozen=True)
class CohStatus:
    """A cohomology dimension known to lie in [lo, hi]; exact when lo == hi."""

    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise ValueError(f"bad cohomology range [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, n: int) -> "CohStatus":
        return cls(n, n)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> int:
        if not self.is_exact:
            raise ValueError("status is a range")
        return self.lo

    def __add__(self, other: "CohStatus") -> "CohStatus":
        return CohStatus(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: "CohStatus") -> "CohStatus":
        return CohStatus(self.lo * other.lo, self.hi * other.hi)

    def to_json(self):
        return self.lo if self.is_exact else [self.lo, self.hi]

    def __str__(self) -> str:
        return str(self.lo) if self.is_exact else f"[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class CurveWithAction:
    genus: int
    group: FinAbGroup
    orbits: tuple[Orbit, ...]
    quotient_genus: int = 0
    name: str = "C"

    def __post_init__(self):
        order = self.group.order
        for o in self.orbits:
            if o.degree * o.stabilizer_order != order:
                raise BranchDataError(f"orbit {o.label}: degree {o.degree} times stabilizer order != |G|")
        lhs = 2 * self.genus - 2
        rhs = order * (2 * self.quotient_genus - 2) + sum(o.degree * (o.stabilizer_order - 1) for o in self.orbits)
        if lhs != rhs:
            raise BranchDataError(f"Riemann-Hurwitz fails: 2g-2 = {lhs} but branch data gives {rhs}")
        if self.quotient_genus == 0:
            total = self.group.zero()
            for o in self.orbits:
                total = total + o.stabilizer_generator
            if not total.is_identity():
                raise BranchDataError("stabilizer generators do not multiply to the identity")
            if len(span(self.group, [o.stabilizer_generator for o in self.orbits])) != order:
                raise BranchDataError("stabilizer generators do not generate the group")

    @classmethod
    def from_generating_vector(
        cls, genus: int, group: FinAbGroup, stabilizers: Sequence[Sequence[int]], prefix: str = "E", name: str = "C"
    ) -> "CurveWithAction":
        orbits = []
        for i, coords in enumerate(stabilizers, start=1):
            g = group.element(*coords)
            orbits.append(Orbit(f"{prefix}{i}", g, group.order // g.order()))
        return cls(genus, group, tuple(orbits), 0, name)

    @property
    def labels(self) -> list[str]:
        return [o.label for o in self.orbits]

    @cached_property
    def class_group(self) -> "DivisorClassGroup":
        return build_class_group(self)

    def divisor(self, expr: str | Mapping[str, int] | None = None, fiber: int = 0, **coeffs: int) -> "DivisorClass":
        """Class of an integer combination of orbits, e.g. ``C.divisor("2E1-E2")``."""
        return self.class_group.divisor(expr, fiber=fiber, **coeffs)


def riemann_hurwitz_quotient_genus(C: CurveWithAction, H: Sequence[GroupElement]) -> int:
    """Genus of C/H for a subgroup H of the acting group."""
    H = frozenset(H)
    if len(span(C.group, H)) != len(H):
        raise ValueError("H is not a subgroup")
    order = C.group.order
    ram = sum((order // o.stabilizer_order) * (len(o.stabilizer & H) - 1) for o in C.orbits)
    num = 2 * C.genus - 2 - ram
    if num % len(H):
        raise BranchDataError("non-integral quotient genus")
    two_g = num // len(H) + 2
    if two_g % 2 or two_g < 0:
        raise BranchDataError(f"inconsistent quotient genus 2g' = {two_g}")
    return two_g // 2


@dataclass(frozen=True)
class DivisorClass:
    group: "DivisorClassGroup" = field(repr=False, compare=False)
    coefficients: tuple[int, ...]

    @property
    def normal_form(self) -> tuple[int, ...]:
        return self.group.presentation.normal_form(self.coefficients)

    @property
    def degree(self) -> int:
        return sum(c * d for c, d in zip(self.coefficients, self.group.degree_map))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.group is other.group and self.normal_form == other.normal_form

    def __hash__(self) -> int:
        return hash(self.normal_form)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.group, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.group, tuple(-a for a in self.coefficients))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(self.group, tuple(k * a for a in self.coefficients))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.group.presentation.is_zero(self.coefficients)

    def __str__(self) -> str:
        names = self.group.generator_labels
        terms = []
        for c, name in zip(self.coefficients, names):
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            terms.append(f"{sign}{mag}{name}")
        s = "".join(terms).lstrip("+")
        return s or "0"


_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*([A-Za-z]+\d*)\s*")


def parse_combination(expr: str) -> dict[str, int]:
    """Parse ``"E2-2E1"`` into ``{"E2": 1, "E1": -2}``; ``"0"`` is empty."""
    expr = expr.strip()
    if expr in ("", "0"):
        return {}
    out: dict[str, int] = {}
    pos = 0
    while pos < len(expr):
        m = _TERM.match(expr, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse divisor expression {expr!r}")
        sign, mag, label = m.groups()
        if pos and not sign:
            raise ValueError(f"missing sign before {label!r} in {expr!r}")
        k = int(mag) if mag else 1
        out[label] = out.get(label, 0) + (-k if sign == "-" else k)
        pos = m.end()
    return out


@dataclass(frozen=True)
class DivisorClassGroup:
    curve: CurveWithAction = field(repr=False)
    presentation: PresentedGroup
    degree_map: tuple[int, ...]
    relation_sources: tuple[str, ...]

    @property
    def generator_labels(self) -> list[str]:
        return self.curve.labels + ["P"]

    @property
    def invariants(self) -> AbelianInvariants:
        return self.presentation.invariants

    def vector(self, coeffs: Mapping[str, int], fiber: int = 0) -> tuple[int, ...]:
        labels = self.generator_labels
        vec = [0] * len(labels)
        for label, c in coeffs.items():
            if label not in labels:
                raise KeyError(f"unknown orbit label {label!r} on {self.curve.name}")
            vec[labels.index(label)] += c
        vec[-1] += fiber
        return tuple(vec)

    def divisor(self, expr: str | Mapping[str, int] | DivisorClass | None = None, fiber: int = 0, **coeffs: int) -> DivisorClass:
        if isinstance(expr, DivisorClass):
            if expr.group is not self:
                raise ValueError("divisor class belongs to another curve")
            if fiber or coeffs:
                return expr + self.divisor(None, fiber, **coeffs)
            return expr
        combo: dict[str, int] = {}
        if isinstance(expr, str):
            combo.update(parse_combination(expr))
        elif expr is not None:
            combo.update(expr)
        for k, v in coeffs.items():
            combo[k] = combo.get(k, 0) + v
        return DivisorClass(self, self.vector(combo, fiber))

    def zero(self) -> DivisorClass:
        return DivisorClass(self, (0,) * len(self.generator_labels))

    @property
    def fiber_class(self) -> DivisorClass:
        return self.divisor(fiber=1)

    def orbit_class(self, i: int) -> DivisorClass:
        return self.divisor({self.curve.orbits[i].label: 1})


def build_class_group(C: CurveWithAction) -> DivisorClassGroup:
    """Div(C)^G / ~ presented by the two pullback relation families."""
    if C.quotient_genus != 0 or riemann_hurwitz_quotient_genus(C, C.group.elements()) != 0:
        raise BranchDataError("class group construction needs C/G of genus 0")
    k = len(C.orbits)
    n = k + 1
    order = C.group.order
    degree_map = tuple(o.degree for o in C.orbits) + (order,)
    rows: list[tuple[int, ...]] = []
    sources: list[str] = []

    def unit(i):
        return [int(i == j) for j in range(n)]

    for i, o in enumerate(C.orbits):
        row = unit(k)
        row[i] -= o.stabilizer_order
        rows.append(tuple(row))
        sources.append(f"G-quotient: P ~ {o.stabilizer_order}{o.label}")

    for H in all_subgroups(C.group):
        if len(H) in (1, order):
            continue
        if riemann_hurwitz_quotient_genus(C, H) != 0:
            continue
        fibres = [
            i for i, o in enumerate(C.orbits)
            if len(o.stabilizer & H) == 1 and o.stabilizer_order * len(H) == order
        ]
        gens = sorted(h.coords for h in H if not h.is_identity())
        for i, j in itertools.combinations(fibres, 2):
            row = [a - b for a, b in zip(unit(i), unit(j))]
            rows.append(tuple(row))
            sources.append(f"quotient by <{gens[0]}>: {C.orbits[i].label} ~ {C.orbits[j].label}")

    for row in rows:
        if sum(a * d for a, d in zip(row, degree_map)):
            raise AssertionError("relation of nonzero degree")
    return DivisorClassGroup(C, PresentedGroup.from_relations(n, rows), degree_map, tuple(sources))


def is_effective_class(C: CurveWithAction, cls: DivisorClass) -> tuple[bool, dict[str, int] | None]:
    """Whether ``cls`` is represented by a nonnegative combination of orbits and fibres.

    Returns the representing combination as a witness.
    """
    d = cls.degree
    if d < 0:
        return False, None
    for combo in _nonnegative_combinations(C.class_group.degree_map, d):
        cand = DivisorClass(cls.group, combo)
        if cand == cls:
            return True, {lab: c for lab, c in zip(cls.group.generator_labels, combo) if c}
    return False, None


def _nonnegative_combinations(degrees: Sequence[int], target: int):
    if not degrees:
        if target == 0:
            yield ()
        return
    head, rest = degrees[0], degrees[1:]
    for a in range(target // head, -1, -1):
        for tail in _nonnegative_combinations(rest, target - a * head):
            yield (a,) + tail


def effective_classes_of_degree(C: CurveWithAction, d: int) -> list[DivisorClass]:
    """Distinct classes of degree d containing an invariant effective divisor."""
    seen: list[DivisorClass] = []
    for combo in _nonnegative_combinations(C.class_group.degree_map, d):
        cls = DivisorClass(C.class_group, combo)
        if cls not in seen:
            seen.append(cls)
    return seen


def canonical_class(C: CurveWithAction) -> DivisorClass:
    """K_C = pi^*(K_{P^1}) + ramification = -2P + sum (|S_i| - 1) O_i."""
    coeffs = {o.label: o.stabilizer_order - 1 for o in C.orbits}
    K = C.class_group.divisor(coeffs, fiber=-2)
    assert K.degree == 2 * C.genus - 2
    return K


def curve_cohomology(C: CurveWithAction, cls: DivisorClass) -> tuple[CohStatus, CohStatus]:
    """(h^0, h^1) of O_C(cls), exact where the rules below decide it.

    Rules, first match wins:
      deg < 0; deg > 2g-2; cls = 0; cls = K; deg = 0; deg = 2g-2;
      an invariant class with a nonzero section is effective, so a
      non-effective class has h^0 = 0 (and dually h^1 = 0 when K - cls is
      not effective); otherwise h^0, h^1 >= 1 and Clifford's bound.
    """
    g = C.genus
    d = cls.degree
    chi = d + 1 - g
    E = CohStatus.exact
    if d < 0:
        return E(0), E(-chi)
    if d > 2 * g - 2:
        return E(chi), E(0)
    if cls.is_zero():
        return E(1), E(g)
    if cls == canonical_class(C):
        return E(g), E(1)
    if d == 0:
        return E(0), E(g - 1)
    if d == 2 * g - 2:
        return E(g - 1), E(0)
    effective, _ = is_effective_class(C, cls)
    if not effective:
        return E(0), E(-chi)
    dual_effective, _ = is_effective_class(C, canonical_class(C) - cls)
    if not dual_effective:
        return E(chi), E(0)
    # both D and K - D effective: h^0, h^1 >= 1, and Clifford bounds h^0
    top = d // 2 + 1
    low = max(1, chi + 1)
    return CohStatus(low, top), CohStatus(low - chi, top - chi)
