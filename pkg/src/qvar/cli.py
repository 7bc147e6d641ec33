"""Command-line front end.

Exit codes: 0 analysis completed (whatever the verdicts), 1 certificate
replay failed, 2 usage or parse error, 3 cap exceeded, 4 I/O error.
Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Sequence

from .analyzer import PROPERTIES, analyze
from .caps import Caps, caps_from_env
from .catalog import builtin, catalog_keys, entry
from .clauses import (
    admissible_in,
    classify_activity,
    holds_in,
    parse_clause,
    valid_in_q,
)
from .core import FiniteAlgebra
from .errors import ParseError, QvarError, SizeCapExceeded, UnknownKey
from .free import Presentation, finitely_presented, find_unifier, free_algebra
from .jsonio import (
    algebra_to_json,
    dump_algebra,
    load_algebra,
    presentation_from_json,
)
from .lattices import (
    IDENTITY_NAMES,
    check_semidistributive,
    check_whitman,
    is_flat,
    prime_filter_unifier,
    validate_identity,
)
from .reports import render_csv, render_text, replay_report

EXIT_OK = 0
EXIT_REPLAY = 1
EXIT_USAGE = 2
EXIT_CAPS = 3
EXIT_IO = 4


def resolve_seed(token: str) -> FiniteAlgebra:
    try:
        return builtin(token)
    except UnknownKey:
        if os.path.exists(token):
            return load_algebra(token)
        raise UnknownKey(f"{token!r} is neither a catalog key nor a file")


def _caps_from_args(args) -> Caps:
    caps = caps_from_env()
    overrides = {}
    if getattr(args, "bound", None):
        overrides["free_rank_bound"] = args.bound
    if getattr(args, "probe_size", None):
        overrides["probe_size"] = args.probe_size
    if getattr(args, "probe_count", None):
        overrides["probe_count"] = args.probe_count
    return caps.with_overrides(**overrides) if overrides else caps


def cmd_free(args) -> int:
    seeds = tuple(resolve_seed(s) for s in args.seeds)
    caps = _caps_from_args(args)
    free = free_algebra(seeds, args.rank, caps)
    if args.json:
        out = {"rank": free.rank, "size": free.size,
               "witnesses": list(free.carrier.element_names),
               "generators": [free.carrier.element_names[e]
                              for e in free.generator_elements],
               "carrier": algebra_to_json(free.carrier)}
        print(json.dumps(out, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(f"free algebra over [{', '.join(s.label for s in seeds)}], "
              f"rank {free.rank}: {free.size} elements")
        for e in free.carrier.elements():
            print(f"  {e}: {free.carrier.name_of(e)}")
    return EXIT_OK


def cmd_present(args) -> int:
    seeds = tuple(resolve_seed(s) for s in args.seeds)
    caps = _caps_from_args(args)
    doc = {"vars": args.vars.split(","), "relations": args.rel or [],
           "base": args.seeds}
    presentation = presentation_from_json(doc, resolve_seed)
    algebra, surjection = finitely_presented(presentation, caps)
    unifier = find_unifier(algebra, seeds, caps)
    if args.json:
        out = {"size": algebra.size, "unifiable": unifier is not None,
               "algebra": algebra_to_json(algebra)}
        if unifier is not None:
            out["unifier"] = list(unifier.map)
        print(json.dumps(out, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(f"finitely presented algebra on vars [{args.vars}] with "
              f"{len(presentation.relations)} relation(s): {algebra.size} elements")
        print(f"unifiable: {'yes' if unifier is not None else 'no'}")
    return EXIT_OK


def cmd_check(args) -> int:
    seeds = tuple(resolve_seed(s) for s in args.seeds)
    caps = _caps_from_args(args)
    clause = parse_clause(args.clause, seeds[0].signature)
    out = {"clause": clause.show()}
    holds = {}
    for seed in seeds:
        ok, assignment = holds_in(seed, clause, caps)
        named = None if ok else {v: seed.name_of(e) for v, e in assignment.items()}
        holds[seed.label] = {"holds": ok, "witness": named}
    out["holds_in"] = holds
    if args.activity:
        activity, unifier = classify_activity(seeds, clause, caps)
        out["activity"] = {"kind": activity, "unifier": unifier}
    if args.admissible:
        verdict = admissible_in(seeds, clause, bound=args.bound,
                                stabilize=args.stabilize, caps=caps)
        out["admissible"] = {"verdict": verdict.describe(),
                             "refuted": verdict.refuted,
                             "rank": verdict.rank, "bound": verdict.bound,
                             "witness": verdict.witness}
    if args.valid:
        result = valid_in_q(seeds, clause, caps)
        entry_ = {"valid": result.valid}
        if not result.valid and result.countermodel is not None:
            entry_["countermodel"] = {
                "algebra": algebra_to_json(result.countermodel),
                "assignment": {v: result.countermodel.name_of(e)
                               for v, e in result.assignment.items()}}
        out["valid_in_q"] = entry_
    if args.json:
        print(json.dumps(out, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(f"clause: {out['clause']}")
        for label, info in holds.items():
            if info["holds"]:
                print(f"holds in {label}: yes")
            else:
                witness = ", ".join(f"{v}={e}" for v, e in info["witness"].items())
                print(f"holds in {label}: no, fails at {witness}")
        if "activity" in out:
            unifier = out["activity"]["unifier"]
            tail = "" if unifier is None else \
                " via " + ", ".join(f"{v} -> {t}" for v, t in unifier.items())
            print(f"activity: {out['activity']['kind']}{tail}")
        if "admissible" in out:
            print(f"admissibility: {out['admissible']['verdict']}")
        if "valid_in_q" in out:
            v = out["valid_in_q"]
            if v["valid"]:
                print("valid in Q(K): yes")
            else:
                print("valid in Q(K): no")
                if "countermodel" in v:
                    witness = ", ".join(f"{k}={e}" for k, e in
                                        v["countermodel"]["assignment"].items())
                    print(f"  countermodel: {v['countermodel']['algebra']['name']}"
                          f" at {witness}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    seeds = tuple(resolve_seed(s) for s in args.seeds)
    caps = _caps_from_args(args)
    properties = args.properties.split(",") if args.properties else list(PROPERTIES)
    report = analyze(seeds, properties, caps)
    payload = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)
    text = render_text(report)
    print(payload if args.json else text, end="" if not args.json else "\n")
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        with open(os.path.join(args.out_dir, "report.json"), "w",
                  encoding="utf-8") as fh:
            fh.write(payload + "\n")
        with open(os.path.join(args.out_dir, "report.txt"), "w",
                  encoding="utf-8") as fh:
            fh.write(text)
        with open(os.path.join(args.out_dir, "properties.csv"), "w",
                  encoding="utf-8") as fh:
            fh.write(render_csv(report))
        if args.figures:
            from .viz import render_hierarchy
            render_hierarchy(report["properties"],
                             os.path.join(args.out_dir, "hierarchy.png"),
                             title="Q(" + ", ".join(report["seeds"]) + ")")
        print(f"wrote report.json, report.txt, properties.csv"
              f"{', hierarchy.png' if args.figures else ''} to {args.out_dir}",
              file=sys.stderr)
    return EXIT_OK


def cmd_lattice(args) -> int:
    algebra = resolve_seed(args.key)
    caps = _caps_from_args(args)
    out = {"algebra": algebra.label, "size": algebra.size}
    if args.whitman:
        ok, witness = check_whitman(algebra, caps)
        out["whitman"] = {"holds": ok, "witness": witness}
    if args.sd:
        ok, witness = check_semidistributive(algebra, args.sd, caps)
        out["semidistributive"] = {"side": args.sd, "holds": ok, "witness": witness}
    if args.flat:
        ok, offender = is_flat(algebra, caps)
        out["flat"] = {"holds": ok,
                       "offender": None if ok else algebra_to_json(offender)}
    if args.prime_filter:
        hom = prime_filter_unifier(algebra, caps)
        out["prime_filter_unifier"] = None if hom is None else list(hom.map)
    if args.identity:
        ok, witness = validate_identity(algebra, args.identity, caps)
        out["identity"] = {"name": args.identity, "holds": ok, "witness": witness}
    if args.hasse:
        from .viz import render_hasse
        render_hasse(algebra, args.hasse)
        out["hasse"] = args.hasse
    if args.json:
        print(json.dumps(out, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(f"{algebra.label}: {algebra.size} elements")
        if "whitman" in out:
            w = out["whitman"]
            tail = "" if w["holds"] else f", fails at {w['witness']}"
            print(f"  projectivity condition (W): {w['holds']}{tail}")
        if "semidistributive" in out:
            s = out["semidistributive"]
            tail = "" if s["holds"] else f", fails at {s['witness']}"
            print(f"  semidistributive ({s['side']}): {s['holds']}{tail}")
        if "flat" in out:
            f = out["flat"]
            tail = "" if f["holds"] else \
                f", offending simple algebra of size {f['offender']['size']}"
            print(f"  flat: {f['holds']}{tail}")
        if "prime_filter_unifier" in out:
            hom = out["prime_filter_unifier"]
            print(f"  prime-filter unifier: {'none' if hom is None else hom}")
        if "identity" in out:
            i = out["identity"]
            tail = "" if i["holds"] else f", fails at {i['witness']}"
            print(f"  identity {i['name']}: {i['holds']}{tail}")
        if "hasse" in out:
            print(f"  hasse diagram written to {out['hasse']}")
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        for key in catalog_keys():
            item = entry(key)
            heavy = "  [heavy]" if item.heavy else ""
            print(f"{key:<10} {item.family:<15} {item.algebra.size:>3} elements{heavy}")
        return EXIT_OK
    print(dump_algebra(builtin(args.key)))
    return EXIT_OK


def cmd_verify(args) -> int:
    with open(args.report, "r", encoding="utf-8") as fh:
        report = json.load(fh)
    caps = _caps_from_args(args)
    results = replay_report(report, caps)
    failures = [r for r in results if not r["ok"]]
    for r in results:
        mark = "ok" if r["ok"] else "FAIL"
        print(f"[{mark}] {r['property']}: {r['kind']}: {r['detail']}")
    print(f"replayed {len(results)} certificates, {len(failures)} failure(s)")
    return EXIT_OK if not failures else EXIT_REPLAY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qvar",
        description="finite universal-algebra workbench: free algebras, "
                    "unification, admissible clauses, completeness analysis")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker hint; results are canonical regardless")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("free", help="construct a free algebra")
    p.add_argument("seeds", nargs="+")
    p.add_argument("-n", "--rank", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_free)

    p = sub.add_parser("present", help="finitely presented algebra + unifiability")
    p.add_argument("seeds", nargs="+")
    p.add_argument("--vars", required=True, help="comma-separated variables")
    p.add_argument("--rel", action="append", help="relation `term = term`")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_present)

    p = sub.add_parser("check", help="clause validity/admissibility/activity")
    p.add_argument("seeds", nargs="+")
    p.add_argument("--clause", required=True)
    p.add_argument("--admissible", action="store_true")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--activity", action="store_true")
    p.add_argument("--stabilize", action="store_true")
    p.add_argument("--valid", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("analyze", help="full completeness-property report")
    p.add_argument("seeds", nargs="+")
    p.add_argument("--properties", default=None,
                   help=f"comma-separated subset of {','.join(PROPERTIES)}")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--probe-size", type=int, default=None)
    p.add_argument("--probe-count", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--figures", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("lattice", help="lattice/chain predicates")
    p.add_argument("key")
    p.add_argument("--whitman", action="store_true")
    p.add_argument("--sd", choices=["meet", "join", "both"], default=None)
    p.add_argument("--flat", action="store_true")
    p.add_argument("--prime-filter", action="store_true")
    p.add_argument("--identity", choices=list(IDENTITY_NAMES), default=None)
    p.add_argument("--hasse", default=None, help="write a Hasse diagram PNG")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("catalog", help="list or dump built-in algebras")
    p.add_argument("action", choices=["list", "dump"])
    p.add_argument("key", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", help="replay the certificates of a report")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "catalog" and args.action == "dump" and not args.key:
        parser.error("catalog dump needs a key")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeCapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPS
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QvarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
