"""Heights, pseudoheights and Hochschild bookkeeping for exceptional collections.

Relative heights e(E, E') = min{k : Ext^k(E, E') != 0} are only known up to
an interval because invariant cohomology is itself bounded. The value +inf
(empty minimum) is represented by ``math.inf``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .algebra import AbelianInvariants
from .cohomology import EquivariantLineBundle, InvStatus, bundle, invariant_profile
from .exceptional import ExceptionalCertificate
from .surface import ProductQuotientSurface, noether_invariants

INF = math.inf
DIM_S = 2


def ext_json(x: float) -> int | str:
    return "+inf" if x == INF else int(x)


@dataclass(frozen=True)
class Height:
    """Closed interval [lo, hi] of extended integers."""

    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty height interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, v: float) -> "Height":
        return cls(v, v)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> float:
        if not self.is_exact:
            raise ValueError(f"height {self} is not exact")
        return self.lo

    def __add__(self, other: "Height | int") -> "Height":
        if isinstance(other, int):
            return Height(self.lo + other, self.hi + other)
        return Height(self.lo + other.lo, self.hi + other.hi)

    def intersect(self, other: "Height") -> "Height":
        return Height(max(self.lo, other.lo), min(self.hi, other.hi))

    def to_json(self):
        if self.is_exact:
            return ext_json(self.lo)
        return [ext_json(self.lo), ext_json(self.hi)]

    def __str__(self) -> str:
        s = lambda x: "inf" if x == INF else str(int(x))  # noqa: E731
        return s(self.lo) if self.is_exact else f"[{s(self.lo)},{s(self.hi)}]"


def height_of_statuses(statuses: Sequence[InvStatus], chi: int) -> Height:
    """First nonvanishing degree, given per-degree statuses and the Euler characteristic."""
    open_degrees = [k for k, s in enumerate(statuses) if not s.is_zero]
    if not open_degrees:
        return Height.exact(INF)
    lo = open_degrees[0]
    nonzero = [k for k, s in enumerate(statuses) if s.is_nonzero]
    if nonzero:
        hi = nonzero[0]
    elif chi != 0:
        hi = open_degrees[-1]
    else:
        hi = INF
    return Height(lo, hi)


def relative_height(L1: EquivariantLineBundle, L2: EquivariantLineBundle, surface: ProductQuotientSurface) -> Height:
    """e(L1, L2) from the invariant profile of L2 - L1."""
    p = invariant_profile(L2 - L1, surface)
    return height_of_statuses(p.invariant, p.chi)


def omega(surface: ProductQuotientSurface) -> EquivariantLineBundle:
    return bundle(surface, surface.K_C, surface.K_D)


def anticanonical_twist(L: EquivariantLineBundle, surface: ProductQuotientSurface) -> EquivariantLineBundle:
    return L - omega(surface)


def serre_wraparound_height(L: EquivariantLineBundle, L2: EquivariantLineBundle, surface: ProductQuotientSurface) -> Height:
    """e(L, S^{-1} L2) = 2 + e(L, L2 (x) omega^{-1})."""
    return relative_height(L, anticanonical_twist(L2, surface), surface) + DIM_S


@dataclass(frozen=True)
class Pseudoheight:
    interval: Height
    best_chains: tuple[tuple[int, ...], ...]
    chains_considered: int
    chains_skipped: int
    degenerate: bool

    def to_json(self) -> dict:
        return {
            "interval": self.interval.to_json(),
            "best_chains": [[i + 1 for i in c] for c in self.best_chains],
            "chains_considered": self.chains_considered,
            "chains_skipped": self.chains_skipped,
            "degenerate": self.degenerate,
        }


def chain_height(chain: Sequence[int], collection, surface) -> Height:
    links = [relative_height(collection[a], collection[b], surface) for a, b in zip(chain, chain[1:])]
    total = serre_wraparound_height(collection[chain[-1]], collection[chain[0]], surface)
    for h in links:
        total = total + h
    return total + (-(len(chain) - 1))


def pseudoheight(collection: Sequence[EquivariantLineBundle], surface: ProductQuotientSurface) -> Pseudoheight:
    """Minimum over increasing chains a_0 < ... < a_p of the link heights plus wraparound minus p."""
    collection = list(collection)
    if not collection:
        raise ValueError("empty collection")
    n = len(collection)
    values: dict[tuple[int, ...], Height] = {}
    skipped = 0
    for r in range(1, n + 1):
        for chain in itertools.combinations(range(n), r):
            h = chain_height(chain, collection, surface)
            if h.lo == INF:
                skipped += 1
                continue
            values[chain] = h
    if not values:
        return Pseudoheight(Height.exact(INF), (), 0, skipped, True)
    lo = min(h.lo for h in values.values())
    hi = min(h.hi for h in values.values())
    best = tuple(c for c, h in values.items() if h.lo == lo)
    return Pseudoheight(Height(lo, hi), best, len(values), skipped, False)


def extended_collection(collection, surface) -> list[EquivariantLineBundle]:
    """E_1, ..., E_n, E_1 (x) omega^{-1}, ..., E_n (x) omega^{-1}."""
    collection = list(collection)
    return collection + [anticanonical_twist(L, surface) for L in collection]


@dataclass(frozen=True)
class CheckResult:
    verdict: str
    evidence: tuple[dict, ...]

    @property
    def holds(self) -> bool:
        return self.verdict in ("hom_free", "connected")

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "evidence": list(self.evidence)}


def hom_free_check(collection, surface: ProductQuotientSurface) -> CheckResult:
    """Ext^0(E_i, E_j) provably zero for all i < j <= i + n on the extended collection."""
    ext = extended_collection(collection, surface)
    n = len(ext) // 2
    evidence = []
    failing = []
    for i in range(len(ext)):
        for j in range(i + 1, min(i + n, len(ext) - 1) + 1):
            p = invariant_profile(ext[j] - ext[i], surface)
            s = p.invariant[0]
            state = "zero" if s.is_zero else ("nonzero" if s.is_nonzero else "open")
            evidence.append({
                "pair": [i + 1, j + 1],
                "bidegree": list(p.bundle.bidegree),
                "ext0": str(s),
                "rule": s.kind,
                "status": state,
            })
            if state != "zero":
                failing.append(state)
    if not failing:
        verdict = "hom_free"
    elif "nonzero" in failing:
        verdict = "not_hom_free"
    else:
        verdict = "undetermined"
    return CheckResult(verdict, tuple(evidence))


def _ext1_state(L1, L2, surface) -> str:
    s = invariant_profile(L2 - L1, surface).invariant[1]
    return "zero" if s.is_zero else ("nonzero" if s.is_nonzero else "open")


def cyclic_ext1_check(collection, surface: ProductQuotientSurface) -> CheckResult:
    """Is there a chain with nonzero Ext^1 links closing up through E_{a_0} (x) omega^{-1}?

    ``not_connected`` is certified when every chain has a provably zero link
    or a provably zero wraparound.
    """
    collection = list(collection)
    n = len(collection)
    wraps = {}
    evidence = []
    for i in range(n):
        for j in range(i, n):
            target = anticanonical_twist(collection[i], surface)
            p = invariant_profile(target - collection[j], surface)
            wraps[(j, i)] = _ext1_state(collection[j], target, surface)
            evidence.append({
                "wraparound": [j + 1, i + 1],
                "bidegree": list(p.bundle.bidegree),
                "total": [str(s) for s in p.total],
                "ext1": str(p.invariant[1]),
                "status": wraps[(j, i)],
            })
    states = []
    for r in range(1, n + 1):
        for chain in itertools.combinations(range(n), r):
            links = [_ext1_state(collection[a], collection[b], surface) for a, b in zip(chain, chain[1:])]
            links.append(wraps[(chain[-1], chain[0])])
            if "zero" in links:
                states.append("zero")
            elif all(s == "nonzero" for s in links):
                states.append("nonzero")
                evidence.append({"connecting_chain": [c + 1 for c in chain]})
            else:
                states.append("open")
    if "nonzero" in states:
        verdict = "connected"
    elif all(s == "zero" for s in states):
        verdict = "not_connected"
    else:
        verdict = "undetermined"
    return CheckResult(verdict, tuple(evidence))


def bicanonical_sections(surface: ProductQuotientSurface) -> InvStatus:
    """Invariant h^0(S, 2K_S), dual to H^2(S, omega^{-1})."""
    w = omega(surface)
    return invariant_profile(w + w, surface).invariant[0]


def hh_restriction_verdict(h: float, degrees: Sequence[int] = range(0, 5)) -> dict[int, str]:
    """Restriction HH^k(S) -> HH^k(A): iso for k <= h - 2, mono for k = h - 1."""
    out = {}
    for k in degrees:
        if k <= h - 2:
            out[k] = "isomorphism"
        elif k == h - 1:
            out[k] = "monomorphism"
        else:
            out[k] = "unknown"
    return out


@dataclass(frozen=True)
class HeightReport:
    pair_heights: tuple[dict, ...]
    hom_free: CheckResult
    cyclic: CheckResult
    hypothesis: InvStatus
    chain_pseudoheight: Pseudoheight
    pseudoheight: Height
    height: Height
    conclusions: tuple[str, ...]
    restriction: dict[int, str] | None

    @property
    def hypothesis_holds(self) -> bool:
        return self.hypothesis.is_nonzero

    def to_json(self) -> dict:
        return {
            "pair_heights": list(self.pair_heights),
            "hom_free": self.hom_free.to_json(),
            "cyclic_ext1": self.cyclic.to_json(),
            "hypothesis": {"h0(2K_S)": str(self.hypothesis), "rule": self.hypothesis.kind, "holds": self.hypothesis_holds},
            "chain_pseudoheight": self.chain_pseudoheight.to_json(),
            "pseudoheight": self.pseudoheight.to_json(),
            "height": self.height.to_json(),
            "conclusions": list(self.conclusions),
            "restriction": {str(k): v for k, v in self.restriction.items()} if self.restriction else None,
        }


def height_conclusion(
    hom_free: CheckResult,
    cyclic: CheckResult,
    hypothesis: InvStatus,
    chain_ph: Pseudoheight,
    pair_heights: Sequence[dict] = (),
) -> HeightReport:
    """Combine the structural bounds with the chain enumeration.

    Hom-free gives ph >= 1 + dim S; Hom-free and not cyclically
    Ext^1-connected give ph >= 2 + dim S. A nonzero H^2(S, omega^{-1})
    gives ph <= 2 + dim S, and then ph = 2 + dim S forces h = ph.
    """
    conclusions = []
    bound = Height(-INF, INF)
    if hom_free.verdict == "hom_free":
        if cyclic.verdict == "not_connected":
            bound = Height(2 + DIM_S, INF)
            conclusions.append("Hom-free and not cyclically Ext^1-connected: ph >= 4")
        else:
            bound = Height(1 + DIM_S, INF)
            conclusions.append("Hom-free: ph >= 3")
    hyp = hypothesis.is_nonzero
    if hyp:
        bound = bound.intersect(Height(-INF, 2 + DIM_S))
        conclusions.append(f"h0(2K_S) = {hypothesis} > 0: ph <= 4")
    ph = chain_ph.interval.intersect(bound)
    if hyp and ph.is_exact and ph.value == 2 + DIM_S:
        height = Height.exact(2 + DIM_S)
        conclusions.append("ph = 4 with H^2(S, omega^{-1}) != 0: h = 4")
    else:
        height = Height(ph.lo, INF)
    restriction = hh_restriction_verdict(height.value) if height.is_exact else None
    return HeightReport(tuple(pair_heights), hom_free, cyclic, hypothesis, chain_ph, ph, height, tuple(conclusions), restriction)


def height_analysis(collection: Sequence[EquivariantLineBundle], surface: ProductQuotientSurface) -> HeightReport:
    collection = list(collection)
    pairs = []
    for i, j in itertools.combinations(range(len(collection)), 2):
        pairs.append({"pair": [i + 1, j + 1], "e": relative_height(collection[i], collection[j], surface).to_json()})
    for i in range(len(collection)):
        for j in range(i, len(collection)):
            pairs.append({
                "wraparound": [j + 1, i + 1],
                "e": serre_wraparound_height(collection[j], collection[i], surface).to_json(),
            })
    return height_conclusion(
        hom_free_check(collection, surface),
        cyclic_ext1_check(collection, surface),
        bicanonical_sections(surface),
        pseudoheight(collection, surface),
        pairs,
    )


# --- Hochschild homology ----------------------------------------------------


def hodge_numbers(b2: int, pg: int = 0, q: int = 0) -> dict[tuple[int, int], int]:
    h11 = b2 - 2 * pg
    if h11 < 0:
        raise ValueError("b_2 < 2 p_g")
    return {
        (0, 0): 1, (2, 2): 1,
        (1, 0): q, (0, 1): q, (2, 1): q, (1, 2): q,
        (2, 0): pg, (0, 2): pg,
        (1, 1): h11,
    }


def hkr_homology(surface: ProductQuotientSurface | None = None, *, b2: int | None = None, pg: int = 0, q: int = 0) -> dict[int, int]:
    """HH_t(S) = sum_p h^{p, t+p} for t in [-2, 2]."""
    if surface is not None:
        b2 = noether_invariants(surface).b2
    if b2 is None:
        raise ValueError("need a surface or b_2")
    h = hodge_numbers(b2, pg, q)
    return {t: sum(h.get((p, t + p), 0) for p in range(3)) for t in range(-2, 3)}


def complement_k_group(surface: ProductQuotientSurface, length: int) -> AbelianInvariants | None:
    """K of the orthogonal complement of a length-n exceptional collection."""
    k = noether_invariants(surface).k_group
    if k is None:
        return None
    if length > k.free_rank:
        raise ValueError(f"length {length} exceeds rank {k.free_rank} of K(S)")
    return AbelianInvariants(k.free_rank - length, k.torsion)


@dataclass(frozen=True)
class HochschildReport:
    hh_surface: dict[int, int]
    exceptional_contribution: dict[int, int]
    hh_complement: dict[int, int]
    k_complement: AbelianInvariants | None
    quasiphantom: bool
    additivity_ok: bool
    refused: str | None = None

    def to_json(self) -> dict:
        tj = lambda d: {str(t): v for t, v in sorted(d.items())}  # noqa: E731
        return {
            "HH_S": tj(self.hh_surface),
            "exceptional_contribution": tj(self.exceptional_contribution),
            "HH_complement": tj(self.hh_complement),
            "HH_complement_total": sum(self.hh_complement.values()),
            "K_complement": self.k_complement.to_json() if self.k_complement else None,
            "quasiphantom": self.quasiphantom,
            "additivity_ok": self.additivity_ok,
            "refused": self.refused,
        }


def quasiphantom_verdict(cert: ExceptionalCertificate, surface: ProductQuotientSurface) -> HochschildReport:
    hh = hkr_homology(surface)
    if not cert.valid:
        return HochschildReport(hh, {}, {}, None, False, False, refused=f"certificate is {cert.verdict}")
    n = len(cert.collection)
    contrib = {t: (n if t == 0 else 0) for t in hh}
    comp = {t: hh[t] - contrib[t] for t in hh}
    if any(v < 0 for v in comp.values()):
        raise ValueError("collection longer than HH_*(S) allows")
    k = complement_k_group(surface, n)
    additive = sum(hh.values()) == n + sum(comp.values())
    qp = k is not None and k.is_finite and sum(comp.values()) == 0
    return HochschildReport(hh, contrib, comp, k, qp, additive)


# --- phantom pairing --------------------------------------------------------

KNOWN_TORSION_ORDERS = {
    "z3^2": 3**5,
    "beauville": 5**3,
    "burniat": 2**6,
    "godeaux": 5,
}


@dataclass(frozen=True)
class PhantomVerdict:
    order_a: int
    order_b: int
    gcd: int
    verdict: str  # phantom | no conclusion

    @property
    def phantom(self) -> bool:
        return self.verdict == "phantom"

    def to_json(self) -> dict:
        return {"orders": [self.order_a, self.order_b], "gcd": self.gcd, "verdict": self.verdict}


def phantom_pairing(tors_a: int, tors_b: int) -> PhantomVerdict:
    """Coprime Picard torsion orders make the product of two quasiphantoms a phantom."""
    if tors_a < 1 or tors_b < 1:
        raise ValueError("torsion orders must be positive")
    g = math.gcd(tors_a, tors_b)
    return PhantomVerdict(tors_a, tors_b, g, "phantom" if g == 1 else "no conclusion")
