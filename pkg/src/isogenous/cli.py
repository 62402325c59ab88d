"""Command-line front end.

Exit codes: 0 pass, 1 fail, 2 invalid configuration, 3 undetermined.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from pathlib import Path

from .algebra import characters
from .cohomology import EquivariantLineBundle, ext_profile, parse_bundle
from .curve import BranchDataError, effective_classes_of_degree
from .exceptional import (
    SearchWindow,
    deformation_invariance_certificate,
    formality_certificate,
    standard_quadruple,
    search_sequences,
    verify_exceptional_sequence,
)
from .homological import (
    KNOWN_TORSION_ORDERS,
    height_analysis,
    hkr_homology,
    phantom_pairing,
    quasiphantom_verdict,
)
from .obstruction import NO_GO, z5_squared_note
from .presets import PRESETS, load_surface, preset
from .report import FAIL, INVALID_CONFIG, PASS, UNDETERMINED, Report
from .surface import H1_TORSION, ProductQuotientSurface, noether_invariants

DEFAULT_COLLECTION = "0; E2-2E1; F2-2F1; E2-2E1+F2-2F1"


class ConfigError(ValueError):
    pass


# --- configuration ----------------------------------------------------------


def resolve_surface(args) -> ProductQuotientSurface:
    try:
        if getattr(args, "surface", None):
            return load_surface(args.surface)
        return preset(args.preset)
    except (KeyError, ValueError, BranchDataError, OSError) as exc:
        raise ConfigError(str(exc)) from exc


def parse_weights(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x)


def parse_character_list(text: str) -> tuple[tuple[int, ...], ...]:
    return tuple(parse_weights(part) for part in text.split(";") if part.strip())


def parse_collection(text: str, surface: ProductQuotientSurface) -> list[EquivariantLineBundle]:
    """``"0; E2-2E1@1,0; F2-2F1"``: members separated by ';', optional '@' character."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        expr, _, chi = part.partition("@")
        try:
            out.append(parse_bundle(surface, expr.strip(), parse_weights(chi) if chi else None))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad collection member {part!r}: {exc}") from exc
    if not out:
        raise ConfigError("empty collection")
    return out


def surface_config(args) -> dict:
    if getattr(args, "surface", None):
        return {"surface": str(args.surface)}
    return {"preset": args.preset}


# --- text rendering ---------------------------------------------------------


def _profile_row(name: str, p) -> str:
    total = " ".join(f"{str(s):>6}" for s in p.total)
    inv = " ".join(f"{str(s):>6}" for s in p.invariant)
    rules = ",".join(s.kind for s in p.invariant)
    return f"  {name:<28} {total}   {inv}   chi={p.chi:<3} {rules}"


def _table_header() -> str:
    return f"  {'':<28} {'h0':>6} {'h1':>6} {'h2':>6}   {'H0^G':>6} {'H1^G':>6} {'H2^G':>6}"


def render_text(report: Report, extra: list[str] | None = None) -> str:
    lines = [f"{report.command}: {report.summary.upper()}"]
    for k, v in sorted(report.config.items()):
        lines.append(f"  {k} = {v}")
    lines.extend(extra or [])
    return "\n".join(lines) + "\n"


# --- commands ---------------------------------------------------------------


def cmd_describe(args) -> tuple[Report, list[str]]:
    S = resolve_surface(args)
    inv = noether_invariants(S)
    curves = {}
    text = []
    for name, C in (("C", S.C), ("D", S.D)):
        cg = C.class_group
        eff3 = effective_classes_of_degree(C, 3)
        curves[name] = {
            "genus": C.genus,
            "orbits": {o.label: list(o.stabilizer_generator.coords) for o in C.orbits},
            "orbit_degrees": {o.label: o.degree for o in C.orbits},
            "class_group": cg.invariants.to_json(),
            "relations": list(cg.relation_sources),
            "canonical_class": str(S.K_C if name == "C" else S.K_D),
            "effective_degree_3": [str(c) for c in eff3],
        }
        text.append(f"  {name}: genus {C.genus}, Div^G/~ = {cg.invariants}, effective degree-3 classes: {[str(c) for c in eff3]}")
    cert = {
        "group": list(S.group.cyclic_orders),
        "order": S.order,
        "invariants": inv.to_json(),
        "curves": curves,
        "HH_S": {str(t): v for t, v in hkr_homology(S).items()},
    }
    text.insert(0, f"  |G| = {S.order}, K^2 = {inv.k_squared}, b2 = {inv.b2}, chi_top = {inv.chi_top}")
    if inv.pic is not None:
        text.insert(1, f"  H1 = {inv.h1}, Pic = {inv.pic}, K(S) = {inv.k_group}")
    config = {**surface_config(args)}
    return Report("describe", config, PASS, {"surface": cert}), text


def cmd_verify(args, with_heights: bool = True, command: str = "verify") -> tuple[Report, list[str]]:
    S = resolve_surface(args)
    base = parse_collection(args.collection, S)
    mode = args.characters
    if mode == "all":
        G = S.group
        chars = characters(G)
        variants = [
            [base[0]] + [L.twist(c) for L, c in zip(base[1:], combo)]
            for combo in itertools.product(chars, repeat=len(base) - 1)
        ]
    elif mode == "trivial":
        variants = [base]
    else:
        weights = parse_character_list(mode)
        if len(weights) != len(base):
            raise ConfigError(f"--characters lists {len(weights)} characters for {len(base)} members")
        try:
            variants = [[L.twist(S.group.character(*w)) for L, w in zip(base, weights)]]
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    certs = [verify_exceptional_sequence(v, S) for v in variants]
    counts = {v: sum(c.verdict == v for c in certs) for v in ("valid", "invalid", "undetermined")}
    first = certs[0]
    bad = next((c for c in certs if c.verdict == "invalid"), None)
    open_ = next((c for c in certs if c.verdict == "undetermined"), None)
    if bad is not None:
        summary = FAIL
    elif open_ is not None:
        summary = UNDETERMINED
    else:
        summary = PASS

    payload = {
        "variants_checked": len(certs),
        "verdict_counts": counts,
        "exceptional": first.to_json(),
    }
    if bad is not None and bad is not first:
        payload["first_invalid"] = bad.to_json()
    text = [
        f"  variants checked: {len(certs)} ({counts['valid']} valid, {counts['invalid']} invalid, {counts['undetermined']} undetermined)",
        f"  length {len(first.collection)}, max length {first.max_length}, maximal: {first.maximal}",
    ]
    show = bad or open_ or first
    if show.witness:
        text.append(f"  witness: {show.witness}")
    coll = first.collection
    text.append("  Ext(L_i, L_j), i < j:")
    text.append(_table_header())
    for i, j in itertools.combinations(range(len(coll)), 2):
        text.append(_profile_row(f"L{j + 1}-L{i + 1} = {(coll[j] - coll[i]).divisor_text()}", ext_profile(coll[i], coll[j], S)))
    text.append("  backward Ext(L_i, L_j), i > j:")
    text.append(_table_header())
    for e in show.evidence:
        text.append(_profile_row(f"({e.later + 1},{e.earlier + 1}) {e.profile.bundle.divisor_text()} [{e.status}]", e.profile))

    if with_heights and first.valid:
        hr = height_analysis(first.collection, S)
        hh = quasiphantom_verdict(first, S)
        payload["heights"] = hr.to_json()
        payload["hochschild"] = hh.to_json()
        text.append(f"  hom-free: {hr.hom_free.verdict}, cyclic Ext^1: {hr.cyclic.verdict}, h0(2K_S) = {hr.hypothesis}")
        text.append(f"  pseudoheight = {hr.pseudoheight}, height = {hr.height}")
        if hr.restriction:
            text.append("  HH^k(S) -> HH^k(A): " + ", ".join(f"k={k}: {v}" for k, v in hr.restriction.items()))
        text.append(f"  HH_*(S) = {hh.hh_surface}, HH_*(A) = {hh.hh_complement}, K(A) = {hh.k_complement}, quasiphantom: {hh.quasiphantom}")
        if len(first.collection) == 4:
            payload["formality"] = formality_certificate(first.collection, S)
            payload["deformation"] = deformation_invariance_certificate(S)
            text.append(f"  formality certificate: {payload['formality']['certified']}, deformation certificate: {payload['deformation']['certified']}")
        if command == "height" and not hr.height.is_exact:
            summary = UNDETERMINED
    elif command == "height" and not first.valid:
        summary = FAIL if first.verdict == "invalid" else UNDETERMINED

    config = {**surface_config(args), "collection": args.collection, "characters": mode}
    return Report(command, config, summary, payload), text


def cmd_height(args):
    return cmd_verify(args, command="height")


def cmd_search(args) -> tuple[Report, list[str]]:
    S = resolve_surface(args)
    if args.window < 0:
        raise ConfigError("--window must be nonnegative")
    chars = args.characters
    if chars not in ("all", "trivial"):
        chars = parse_character_list(chars)
    window = SearchWindow.symmetric(args.window, chars)
    try:
        result = search_sequences(window, S, args.length)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    reverified = all(verify_exceptional_sequence(c.collection, S).valid for c in result.valid)
    payload = result.to_json()
    payload["all_reverified"] = reverified
    if S.label == "z3^2" and args.length == 4:
        q = standard_quadruple(S)
        swap = [q[0], q[2], q[1], q[3]]
        payload["contains_reference_quadruple"] = result.contains(q)
        payload["contains_swapped_quadruple"] = result.contains(swap)
    summary = PASS if reverified else FAIL
    text = [f"  window [-{args.window},{args.window}], {len(result.valid)} valid, {len(result.undetermined)} undetermined"]
    for c in result.valid:
        text.append("    " + ", ".join(str(L) for L in c.collection))
    if result.undetermined:
        text.append(f"  undetermined sequences: {len(result.undetermined)} (listed in JSON output)")
    config = {**surface_config(args), "window": args.window, "characters": args.characters, "length": args.length}
    return Report("search", config, summary, payload), text


def cmd_nogo(args) -> tuple[Report, list[str]]:
    label = args.preset
    if label == "z5^2":
        r = z5_squared_note()
    elif label in NO_GO:
        bound = args.scan_bound if args.scan_bound is not None else (100 if label == "z2^3" else 200)
        if bound < 0:
            raise ConfigError("--scan-bound must be nonnegative")
        r = NO_GO[label](bound)
    else:
        raise ConfigError(f"no no-go argument for preset {label!r}; use z2^3, z2^4 or z5^2")
    if r.verdict == "UNSATISFIABLE":
        summary = PASS if r.consistent else FAIL
    elif r.verdict == "NOT_APPLICABLE":
        summary = PASS
    else:
        summary = UNDETERMINED
    text = [f"  verdict: {r.verdict}"] + [f"  {line}" for line in r.transcript]
    if r.scan_bound is not None:
        text.append(f"  scan |x| <= {r.scan_bound}: {r.scan_tuples} tuples, {len(r.scan_solutions)} solutions")
    text += [f"  {n}" for n in r.notes]
    text.append(f"  scope: {r.scope}")
    config = {"preset": label, "scan_bound": r.scan_bound}
    return Report("nogo", config, summary, {"nogo": r.to_json()}), text


def _torsion_order(token: str) -> int:
    if token in H1_TORSION:
        n = 1
        for t in H1_TORSION[token]:
            n *= t
        return n
    if token in KNOWN_TORSION_ORDERS:
        return KNOWN_TORSION_ORDERS[token]
    try:
        return int(token)
    except ValueError:
        raise ConfigError(f"not a torsion order or known surface: {token!r}") from None


def cmd_phantom_pair(args) -> tuple[Report, list[str]]:
    a, b = _torsion_order(args.a), _torsion_order(args.b)
    try:
        v = phantom_pairing(a, b)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    summary = PASS if v.phantom else FAIL
    text = [f"  gcd({a}, {b}) = {v.gcd}: {v.verdict}"]
    return Report("phantom-pair", {"a": args.a, "b": args.b}, summary, {"pairing": v.to_json()}), text


COMMANDS = {
    "describe": cmd_describe,
    "verify": cmd_verify,
    "height": cmd_height,
    "search": cmd_search,
    "nogo": cmd_nogo,
    "phantom-pair": cmd_phantom_pair,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")

    surf = argparse.ArgumentParser(add_help=False)
    surf.add_argument("--preset", choices=PRESETS, default="z3^2")
    surf.add_argument("--surface", type=Path, default=None, help="JSON file with group, C and D branch data")

    coll = argparse.ArgumentParser(add_help=False)
    coll.add_argument("--collection", default=DEFAULT_COLLECTION, help="members separated by ';', optional '@w1,w2' twist")
    coll.add_argument("--characters", default="trivial", help="trivial, all, or 'w1,w2;...' one per member")

    p = argparse.ArgumentParser(prog="isogenous", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("describe", parents=[common, surf], help="invariants and class groups")
    sub.add_parser("verify", parents=[common, surf, coll], help="exceptionality, heights, Hochschild data")
    sub.add_parser("height", parents=[common, surf, coll], help="relative heights and pseudoheight")
    s = sub.add_parser("search", parents=[common, surf], help="search a window of divisor coefficients")
    s.add_argument("--window", type=int, default=2)
    s.add_argument("--characters", default="trivial", help="trivial, all, or 'w1,w2;...'")
    s.add_argument("--length", type=int, default=4)
    n = sub.add_parser("nogo", parents=[common], help="Euler-characteristic no-go arguments")
    n.add_argument("--preset", choices=PRESETS, required=True)
    n.add_argument("--scan-bound", type=int, default=None)
    ph = sub.add_parser("phantom-pair", parents=[common], help="coprimality of Picard torsion orders")
    ph.add_argument("a", help="torsion order, preset label or known surface name")
    ph.add_argument("b")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report, text = COMMANDS[args.command](args)
    except ConfigError as exc:
        report = Report(args.command, {"argv": list(argv if argv is not None else sys.argv[1:])}, INVALID_CONFIG, {"error": str(exc)})
        text = [f"  error: {exc}"]
    report.timing = round(time.perf_counter() - start, 3)
    out = report.to_json() if args.format == "json" else render_text(report, text)
    if args.out is not None:
        args.out.write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return report.exit_code
