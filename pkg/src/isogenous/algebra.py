"""Finite abelian groups, their characters, and Smith normal form.

Everything here is exact integer arithmetic. Character values are roots of
unity stored as a reduced fraction of a full turn, so equality and
multiplication never touch floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Iterable, Sequence


@dataclass(frozen=True)
class RootOfUnity:
    """exp(2*pi*i * residue/order) with 0 <= residue < order, in lowest terms."""

    residue: int
    order: int

    def __post_init__(self):
        if self.order <= 0:
            raise ValueError("order must be positive")
        r = self.residue % self.order
        g = gcd(r, self.order)
        object.__setattr__(self, "residue", r // g)
        object.__setattr__(self, "order", self.order // g)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "RootOfUnity":
        return cls(q.numerator, q.denominator)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        q = Fraction(self.residue, self.order) + Fraction(other.residue, other.order)
        return RootOfUnity.from_fraction(q)

    def is_one(self) -> bool:
        return self.residue == 0


@dataclass(frozen=True)
class FinAbGroup:
    """(Z/n_1) x ... x (Z/n_k); an order of 0 stands for a free factor Z."""

    cyclic_orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.cyclic_orders)
        if any(n < 0 for n in orders):
            raise ValueError("cyclic orders must be nonnegative")
        object.__setattr__(self, "cyclic_orders", orders)

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    @property
    def is_finite(self) -> bool:
        return all(n > 0 for n in self.cyclic_orders)

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("group has a free factor")
        return prod(self.cyclic_orders)

    def element(self, *coords: int) -> "GroupElement":
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        return GroupElement(self, tuple(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def basis(self) -> list["GroupElement"]:
        return [self.element(*(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    def elements(self) -> list["GroupElement"]:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        return [GroupElement(self, c) for c in itertools.product(*(range(n) for n in self.cyclic_orders))]

    def character(self, *weights: int) -> "Character":
        if len(weights) == 1 and isinstance(weights[0], (tuple, list)):
            weights = tuple(weights[0])
        return Character(self, tuple(weights))

    def trivial_character(self) -> "Character":
        return Character(self, (0,) * self.rank)

    def label(self) -> str:
        if not self.cyclic_orders:
            return "1"
        counts: dict[int, int] = {}
        for n in self.cyclic_orders:
            counts[n] = counts.get(n, 0) + 1
        parts = []
        for n, k in counts.items():
            base = "Z" if n == 0 else f"(Z/{n})"
            parts.append(base if k == 1 else f"{base}^{k}")
        return " x ".join(parts)


@dataclass(frozen=True)
class GroupElement:
    group: FinAbGroup = field(repr=False)
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise ValueError(f"expected {self.group.rank} coordinates, got {len(self.coords)}")
        reduced = tuple(c % n if n else c for c, n in zip(self.coords, self.group.cyclic_orders))
        object.__setattr__(self, "coords", reduced)

    def _check(self, other: "GroupElement"):
        if self.group != other.group:
            raise ValueError("elements of different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_identity(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        return len(subgroup_generated(self))


@dataclass(frozen=True)
class Character:
    """A homomorphism G -> C^*, given by one weight per cyclic factor.

    The value on g is exp(2*pi*i * sum_j w_j g_j / n_j).
    """

    group: FinAbGroup = field(repr=False)
    weights: tuple[int, ...]

    def __post_init__(self):
        if not self.group.is_finite:
            raise ValueError("characters are only defined for finite groups here")
        if len(self.weights) != self.group.rank:
            raise ValueError(f"expected {self.group.rank} weights, got {len(self.weights)}")
        reduced = tuple(w % n for w, n in zip(self.weights, self.group.cyclic_orders))
        object.__setattr__(self, "weights", reduced)

    def __call__(self, g: GroupElement) -> RootOfUnity:
        if g.group != self.group:
            raise ValueError("element of a different group")
        q = sum((Fraction(w * c, n) for w, c, n in zip(self.weights, g.coords, self.group.cyclic_orders)), Fraction(0))
        return RootOfUnity.from_fraction(q)

    def __mul__(self, other: "Character") -> "Character":
        if self.group != other.group:
            raise ValueError("characters of different groups")
        return Character(self.group, tuple(a + b for a, b in zip(self.weights, other.weights)))

    def inverse(self) -> "Character":
        return Character(self.group, tuple(-w for w in self.weights))

    def __truediv__(self, other: "Character") -> "Character":
        return self * other.inverse()

    def is_trivial(self) -> bool:
        return not any(self.weights)

    def order(self) -> int:
        k, chi = 1, self
        while not chi.is_trivial():
            chi, k = chi * self, k + 1
        return k


def characters(G: FinAbGroup) -> list[Character]:
    """All characters of a finite abelian group, trivial character first."""
    if not G.is_finite:
        raise ValueError("character group of a group with free factors is not finite")
    return [Character(G, w) for w in itertools.product(*(range(n) for n in G.cyclic_orders))]


def subgroup_generated(g: GroupElement) -> list[GroupElement]:
    """The cyclic subgroup <g>, listed as 0, g, 2g, ..."""
    out = [g.group.zero()]
    cur = g
    while not cur.is_identity():
        out.append(cur)
        cur = cur + g
    return out


def span(G: FinAbGroup, gens: Iterable[GroupElement]) -> frozenset[GroupElement]:
    elems = {G.zero()}
    frontier = [G.zero()]
    gens = list(gens)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x + g
            if y not in elems:
                elems.add(y)
                frontier.append(y)
    return frozenset(elems)


def all_subgroups(G: FinAbGroup) -> list[frozenset[GroupElement]]:
    """Every subgroup of a finite abelian group, smallest first."""
    found = {frozenset([G.zero()])}
    frontier = list(found)
    elems = G.elements()
    while frontier:
        H = frontier.pop()
        for g in elems:
            if g in H:
                continue
            K = span(G, list(H) + [g])
            if K not in found:
                found.add(K)
                frontier.append(K)
    return sorted(found, key=lambda H: (len(H), sorted(h.coords for h in H)))


# --- Smith normal form -------------------------------------------------------

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


@dataclass(frozen=True)
class SmithForm:
    """U * M * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ...

    ``diagonal`` lists the nonzero diagonal entries (all positive).
    """

    matrix: tuple[tuple[int, ...], ...]
    ncols: int
    diagonal: tuple[int, ...]
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def free_rank(self) -> int:
        return self.ncols - self.rank

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)

    def D(self) -> Matrix:
        rows = len(self.matrix)
        return [[self.diagonal[i] if i == j and i < self.rank else 0 for j in range(self.ncols)] for i in range(rows)]


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    """Smith normal form of an integer matrix, with transformation matrices.

    Rows of ``M`` are relations among ``ncols`` generators; the cokernel
    Z^ncols / rowspace(M) is Z^free_rank + sum Z/d_i. An empty matrix needs
    ``ncols``.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else (ncols if ncols is not None else 0)
    if ncols is not None and ncols != n:
        raise ValueError("ncols does not match the matrix width")
    if any(len(row) != n for row in A):
        raise ValueError("ragged matrix")
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if not done:
                # a remainder is smaller than the pivot; move it into place
                cands = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cands)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1

    diagonal = tuple(A[i][i] for i in range(t))
    form = SmithForm(
        matrix=tuple(tuple(int(x) for x in row) for row in M),
        ncols=n,
        diagonal=diagonal,
        U=tuple(map(tuple, U)),
        V=tuple(map(tuple, V)),
    )
    assert matmul(matmul(U, [list(r) for r in M]), V) == form.D() if m else True
    return form


@dataclass(frozen=True)
class AbelianInvariants:
    """Isomorphism type Z^free_rank + sum Z/t_i."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        counts: dict[int, int] = {}
        for t in self.torsion:
            counts[t] = counts.get(t, 0) + 1
        for t, k in sorted(counts.items()):
            parts.append(f"Z/{t}" if k == 1 else f"(Z/{t})^{k}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": str(self)}


@dataclass(frozen=True)
class PresentedGroup:
    """Z^generator_count modulo the row span of a relation matrix.

    Elements are integer vectors over the generators; ``normal_form`` maps a
    vector to canonical coordinates in Z^r + sum Z/d_i, so equality in the
    quotient is decided by comparing normal forms.
    """

    generator_count: int
    relations: tuple[tuple[int, ...], ...]
    snf: SmithForm

    @classmethod
    def from_relations(cls, generator_count: int, relations: Iterable[Sequence[int]]) -> "PresentedGroup":
        rels = tuple(tuple(int(x) for x in r) for r in relations)
        if any(len(r) != generator_count for r in rels):
            raise ValueError("relation length must equal the generator count")
        return cls(generator_count, rels, smith_normal_form(rels, ncols=generator_count))

    @property
    def invariants(self) -> AbelianInvariants:
        return AbelianInvariants(self.snf.free_rank, self.snf.torsion)

    def normal_form(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.generator_count:
            raise ValueError("vector length must equal the generator count")
        V = self.snf.V
        y = [sum(vec[k] * V[k][j] for k in range(self.generator_count)) for j in range(self.generator_count)]
        out = []
        for j, yj in enumerate(y):
            if j < self.snf.rank:
                d = self.snf.diagonal[j]
                if d > 1:
                    out.append(yj % d)
            else:
                out.append(yj)
        return tuple(out)

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.normal_form(u) == self.normal_form(v)

    def is_zero(self, vec: Sequence[int]) -> bool:
        return not any(self.normal_form(vec))
