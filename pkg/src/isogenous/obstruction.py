"""Euler-characteristic obstructions to short exceptional sequences.

For bundles O_X(E + F)(chi) with deg E = e on C and deg F = f on D, the
Euler characteristic on S depends only on (e, f):

    chi(e, f) = 1 + (2ef - e(2g_D - 2) - f(2g_C - 2)) / (2|G|)
              = (e - (g_C - 1)) (f - (g_D - 1)) / |G|.

When the invariant divisors only have degrees in a lattice mZ, a residue
argument can show that the required vanishings never happen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .curve import CurveWithAction
from .presets import preset

SCOPE = (
    "Rules out only sequences whose members are pullback sums O_X(E_i + F_i)(chi_i) of orbit "
    "combinations on C and D with character twists; exceptional sequences of line bundles "
    "built in other ways are not excluded."
)


def chi_obstruction(g_C: int, g_D: int, order: int, e: int, f: int) -> Fraction:
    if order != (g_C - 1) * (g_D - 1):
        raise ValueError(f"|G| = {order} != (g_C - 1)(g_D - 1)")
    return 1 + Fraction(2 * e * f - e * (2 * g_D - 2) - f * (2 * g_C - 2), 2 * order)


@dataclass(frozen=True)
class BilinearForm:
    """c11 ef + c10 e + c01 f + c00 with rational coefficients."""

    c11: Fraction
    c10: Fraction
    c01: Fraction
    c00: Fraction

    def __call__(self, e: int, f: int) -> Fraction:
        return self.c11 * e * f + self.c10 * e + self.c01 * f + self.c00

    def factor(self) -> tuple[Fraction, Fraction, Fraction] | None:
        """(k, alpha, beta) with form = k (e - alpha)(f - beta), if it factors."""
        if self.c11 == 0:
            return None
        alpha, beta = -self.c01 / self.c11, -self.c10 / self.c11
        if self.c11 * alpha * beta != self.c00:
            return None
        return self.c11, alpha, beta

    def to_json(self) -> dict:
        return {k: str(getattr(self, k)) for k in ("c11", "c10", "c01", "c00")}


def obstruction_form(g_C: int, g_D: int, order: int) -> BilinearForm:
    """Coefficients read off by evaluating chi_obstruction at four points."""
    v = lambda e, f: chi_obstruction(g_C, g_D, order, e, f)  # noqa: E731
    c00 = v(0, 0)
    c10 = v(1, 0) - c00
    c01 = v(0, 1) - c00
    c11 = v(1, 1) - c10 - c01 - c00
    return BilinearForm(c11, c10, c01, c00)


def factored_text(form: BilinearForm) -> str:
    k, a, b = form.factor()
    lin = lambda var, r: var if r == 0 else f"({var} {'-' if r > 0 else '+'} {abs(r)})"  # noqa: E731
    return f"{k} * {lin('e', a)} * {lin('f', b)}"


def degree_lattice(curve: CurveWithAction) -> int:
    """gcd of degrees of invariant divisors: orbit degrees and |G| for a free orbit."""
    m = curve.group.order
    for o in curve.orbits:
        m = math.gcd(m, o.degree)
    return m


@dataclass
class NoGoReport:
    label: str
    genera: tuple[int, int]
    order: int
    lattice: tuple[int, int]
    form: BilinearForm | None
    factored: str | None
    transcript: list[str] = field(default_factory=list)
    verdict: str = "INCONCLUSIVE"
    scan_bound: int | None = None
    scan_solutions: list = field(default_factory=list)
    scan_tuples: int = 0
    subchecks: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    scope: str = SCOPE

    @property
    def consistent(self) -> bool:
        return not (self.verdict == "UNSATISFIABLE" and self.scan_solutions)

    def to_json(self) -> dict:
        return {
            "preset": self.label,
            "setup": {"genera": list(self.genera), "order": self.order, "degree_lattice": list(self.lattice)},
            "obstruction": self.form.to_json() if self.form else None,
            "factored": self.factored,
            "residue_proof": list(self.transcript),
            "verdict": self.verdict,
            "scan": {
                "bound": self.scan_bound,
                "tuples_examined": self.scan_tuples,
                "solutions": [list(s) for s in self.scan_solutions],
            },
            "subchecks": self.subchecks,
            "notes": self.notes,
            "consistent": self.consistent,
            "scope": self.scope,
        }


def _setup(label: str) -> NoGoReport:
    S = preset(label)
    gC, gD, n = S.C.genus, S.D.genus, S.order
    form = obstruction_form(gC, gD, n)
    lattice = (degree_lattice(S.C), degree_lattice(S.D))
    return NoGoReport(label, (gC, gD), n, lattice, form, factored_text(form))


def _lattice_points(m: int, bound: int) -> list[int]:
    return [x for x in range(-bound, bound + 1) if x % m == 0]


def _root_reachable(root: Fraction, m: int) -> bool:
    return root.denominator == 1 and root.numerator % m == 0


def no_go_z2_cubed(scan_bound: int = 100) -> NoGoReport:
    """O, O(E1 + F1)(chi1), O(E2 + F2)(chi2) is never exceptional for G = (Z/2)^3.

    Needs chi(e1, f1) = chi(e2, f2) = 0 and chi(e2 - e1, f2 - f1) = 0.
    """
    r = _setup("z2^3")
    mC, mD = r.lattice
    k, a, b = r.form.factor()
    t = r.transcript
    t.append(f"chi(e, f) = {r.factored}; e in {mC}Z, f in {mD}Z")
    e_ok, f_ok = _root_reachable(a, mC), _root_reachable(b, mD)
    t.append(f"e - {a} = 0 has {'a' if e_ok else 'no'} solution in {mC}Z ({a} mod {mC} = {a % mC})")
    t.append(f"f - {b} = 0 has {'a' if f_ok else 'no'} solution in {mD}Z ({b} mod {mD} = {b % mD})")
    if e_ok == f_ok:
        t.append("both or neither factor can vanish; the residue argument does not apply as stated")
        r.verdict = "UNSATISFIABLE" if not e_ok else "INCONCLUSIVE"
    elif f_ok:
        t.append(f"chi(e_i, f_i) = 0 forces f_1 = f_2 = {b}")
        t.append(f"then chi(e_2 - e_1, f_2 - f_1) = {k} * (e_2 - e_1 - {a}) * (0 - {b})")
        t.append(f"e_2 - e_1 in {mC}Z so e_2 - e_1 - {a} = {-a % mC} mod {mC} != 0, and 0 - {b} != 0" if b != 0 else "f root is 0")
        r.verdict = "UNSATISFIABLE" if b != 0 else "INCONCLUSIVE"
    else:
        t.append(f"chi(e_i, f_i) = 0 forces e_1 = e_2 = {a}")
        t.append(f"then chi(0, f_2 - f_1) = {k} * (0 - {a}) * (f_2 - f_1 - {b})")
        r.verdict = "UNSATISFIABLE" if a != 0 else "INCONCLUSIVE"
    if r.verdict == "UNSATISFIABLE":
        t.append("no (e_1, f_1, e_2, f_2) in the lattice satisfies all three conditions: UNSATISFIABLE")

    # bounded scan: zero pairs first, then the third condition on pairs of them
    gC, gD = r.genera
    chi = lambda e, f: chi_obstruction(gC, gD, r.order, e, f)  # noqa: E731
    es, fs = _lattice_points(mC, scan_bound), _lattice_points(mD, scan_bound)
    zeros = [(e, f) for e in es for f in fs if chi(e, f) == 0]
    r.scan_bound = scan_bound
    r.scan_tuples = (len(es) * len(fs)) ** 2
    r.scan_solutions = [
        (e1, f1, e2, f2) for e1, f1 in zeros for e2, f2 in zeros if chi(e2 - e1, f2 - f1) == 0
    ]
    r.notes.append(f"pairs with chi(e, f) = 0 in range: {len(zeros)}, all with f = {b}" if all(f == b for _, f in zeros) else f"pairs with chi(e, f) = 0 in range: {len(zeros)}")
    for kk in (0, 1):
        e1, e2 = 4, 4 + mC * kk
        r.subchecks.append({
            "e1": e1, "f1": 4, "e2": e2, "f2": 4,
            "first": str(chi(e1, 4)),
            "third": str(chi(e2 - e1, 0)),
        })
    return r


def no_go_z2_fourth(scan_bound: int = 200) -> NoGoReport:
    """O, O(E + F)(chi) is never exceptional for G = (Z/2)^4: chi(e, f) != 0."""
    r = _setup("z2^4")
    mC, mD = r.lattice
    k, a, b = r.form.factor()
    t = r.transcript
    t.append(f"chi(e, f) = {r.factored}; e in {mC}Z, f in {mD}Z")
    e_ok, f_ok = _root_reachable(a, mC), _root_reachable(b, mD)
    t.append(f"e - {a} = {-a % mC} mod {mC}" + (" can vanish" if e_ok else " != 0"))
    t.append(f"f - {b} = {-b % mD} mod {mD}" + (" can vanish" if f_ok else " != 0"))
    if not (e_ok or f_ok):
        t.append("both factors are nonzero, so chi(e, f) != 0 for every lattice point: UNSATISFIABLE")
        r.verdict = "UNSATISFIABLE"
    gC, gD = r.genera
    es, fs = _lattice_points(mC, scan_bound), _lattice_points(mD, scan_bound)
    r.scan_bound = scan_bound
    r.scan_tuples = len(es) * len(fs)
    r.scan_solutions = [(e, f) for e in es for f in fs if chi_obstruction(gC, gD, r.order, e, f) == 0]
    r.subchecks.append({"e": 8, "f": 8, "chi": str(chi_obstruction(gC, gD, r.order, 8, 8))})
    return r


def z5_squared_note() -> NoGoReport:
    """For (Z/5)^2 the invariant class group has no torsion to build differences from."""
    S = preset("z5^2")
    inv_C = S.C.class_group.invariants
    inv_D = S.D.class_group.invariants
    r = NoGoReport("z5^2", (S.C.genus, S.D.genus), S.order, (degree_lattice(S.C), degree_lattice(S.D)), None, None)
    r.verdict = "NOT_APPLICABLE"
    r.notes.append(f"Div(C)^G/~ = {inv_C}, Div(D)^G/~ = {inv_D}")
    return r


NO_GO = {"z2^3": no_go_z2_cubed, "z2^4": no_go_z2_fourth}
