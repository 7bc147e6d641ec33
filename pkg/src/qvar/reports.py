"""Report assembly: text and delimited renderings of an analysis report,
plus certificate replay for the `verify` subcommand.
"""

from __future__ import annotations

import csv
import io
from typing import Dict, List, Sequence, Tuple

from .caps import DEFAULT_CAPS, Caps
from .clauses import holds_in, parse_clause
from .core import FiniteAlgebra, Homomorphism, trivial_algebra
from .errors import QvarError
from .free import find_unifier, free_algebra, smallest_free, weakly_projective_in
from .jsonio import algebra_from_json
from .lattices import check_whitman


def render_text(report: dict) -> str:
    lines = ["# completeness analysis", f"scope: {report['scope']}"]
    lines.append("seeds: " + ", ".join(report["seeds"])
                 + f"  (signature {report['signature']})")
    if "rsi_catalog" in report:
        inner = ", ".join(f"{r['label']} ({r['size']})"
                          for r in report["rsi_catalog"])
        lines.append(f"relative subdirectly irreducibles: {inner or 'none'}")
    if "probe" in report:
        probe = report["probe"]
        suffix = ", partial (caps reached)" if probe["partial"] else ""
        lines.append(f"probe set: {probe['count']} algebras{suffix}")
    lines.append("")
    lines.append("property verdicts:")
    for prop in sorted(report["properties"]):
        entry = report["properties"][prop]
        flavor = "Certified" if entry["status"] == "certified" else "BoundedEvidence"
        inner = str(entry["value"]).lower()
        if entry["status"] != "certified" and entry.get("bound") is not None:
            inner += f", bound {entry['bound']}"
        lines.append(f"  {prop:<5} {flavor}({inner})")
        lines.append(f"        licensed by: {entry['theorem']}")
        for witness in entry["witnesses"][:3]:
            lines.append(f"        witness: {describe_witness(witness)}")
        extra = len(entry["witnesses"]) - 3
        if extra > 0:
            lines.append(f"        ... and {extra} more")
    lines.append("")
    issues = report.get("consistency", [])
    if not issues:
        lines.append("consistency: all hierarchy edges respected")
    else:
        lines.append(f"consistency: {len(issues)} finding(s)")
        for issue in issues:
            lines.append(f"  {issue['kind']}: {issue['edge']}: {issue['detail']}")
    return "\n".join(lines) + "\n"


def describe_witness(witness: dict) -> str:
    kind = witness.get("kind", "?")
    name = witness.get("algebra", {}).get("name", "")
    if kind == "unifier":
        return f"unifier of {name}"
    if kind in ("non_unifiable", "non_unifiable_rsi"):
        return f"{name} admits no homomorphism into the smallest free algebra"
    if kind == "embedding":
        return f"{name} embeds into the rank-{witness['rank']} free algebra"
    if kind == "exactness_unknown":
        return f"no embedding of {name} found up to rank {witness['bound']}"
    if kind == "clause_failure":
        asgn = ", ".join(f"{v}={e}" for v, e in witness["assignment"].items())
        return (f"clause `{witness['clause']}` admissible up to rank "
                f"{witness['admissible_up_to']} but fails in {name} at {asgn}")
    if kind == "separating_family":
        return (f"{name} separated by {len(witness['maps'])} maps into the "
                f"rank-{witness['rank']} free algebra")
    if kind == "separation_unknown":
        return f"{name} not separated into free algebras up to rank {witness['bound']}"
    if kind == "weak_projectivity_failure":
        return (f"{witness['rsi']['name']} is an image but not a subalgebra "
                f"of {witness['member']['name']}")
    if kind == "whitman":
        return f"{name} satisfies the lattice projectivity condition"
    return kind


def render_csv(report: dict) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["property", "status", "value", "bound", "theorem"])
    for prop in sorted(report["properties"]):
        entry = report["properties"][prop]
        writer.writerow([prop, entry["status"], str(entry["value"]).lower(),
                         entry.get("bound", ""), entry["theorem"]])
    return buffer.getvalue()


# ---------------------------------------------------------------------------
# certificate replay


def replay_report(report: dict, caps: Caps = DEFAULT_CAPS) -> List[dict]:
    """Re-validate every certificate in a report; bounded evidence has
    nothing to replay and is reported as skipped."""
    seeds = tuple(algebra_from_json(d) for d in report["seed_algebras"])
    results = []
    for prop in sorted(report["properties"]):
        entry = report["properties"][prop]
        for witness in entry["witnesses"]:
            kind = witness.get("kind", "?")
            try:
                verdict = _replay_witness(seeds, witness, caps)
            except QvarError as exc:
                verdict = f"failed: {exc}"
            results.append({"property": prop, "kind": kind,
                            "ok": verdict in ("ok", "skipped"),
                            "detail": verdict})
    violations = [c for c in report.get("consistency", [])
                  if c["kind"] == "violation"]
    results.append({"property": "consistency", "kind": "hierarchy",
                    "ok": not violations,
                    "detail": "ok" if not violations else
                    f"{len(violations)} violation(s) recorded"})
    return results


def _replay_witness(seeds, witness: dict, caps: Caps) -> str:
    kind = witness["kind"]
    if kind in ("exactness_unknown", "separation_unknown"):
        return "skipped"
    if kind == "whitman":
        algebra = algebra_from_json(witness["algebra"])
        ok, _ = check_whitman(algebra, caps)
        return "ok" if ok else "failed: projectivity condition does not hold"
    if kind == "unifier":
        algebra = algebra_from_json(witness["algebra"])
        free = smallest_free(seeds, caps)
        Homomorphism(algebra, free.carrier, witness["map"], check=True)
        return "ok"
    if kind in ("non_unifiable", "non_unifiable_rsi"):
        algebra = algebra_from_json(witness["algebra"])
        if find_unifier(algebra, seeds, caps) is not None:
            return "failed: a unifier exists after all"
        return "ok"
    if kind == "embedding":
        algebra = algebra_from_json(witness["algebra"])
        free = free_algebra(seeds, witness["rank"], caps)
        hom = Homomorphism(algebra, free.carrier, witness["map"], check=True)
        return "ok" if hom.is_injective() else "failed: map is not injective"
    if kind == "separating_family":
        algebra = algebra_from_json(witness["algebra"])
        free = free_algebra(seeds, witness["rank"], caps)
        keys = set()
        combined = [tuple()] * algebra.size
        for mapping in witness["maps"]:
            hom = Homomorphism(algebra, free.carrier, mapping, check=True)
            combined = [combined[e] + (hom.map[e],) for e in algebra.elements()]
        if len(set(combined)) != algebra.size:
            return "failed: family does not separate points"
        return "ok"
    if kind == "clause_failure":
        algebra = algebra_from_json(witness["algebra"])
        clause = parse_clause(witness["clause"], algebra.signature)
        ok, _ = holds_in(algebra, clause, caps)
        if ok:
            return "failed: the clause holds in the witness algebra"
        names = list(algebra.element_names or [])
        assignment = tuple(names.index(witness["assignment"][v])
                           for v in clause.var_names)
        from .core import eval_term
        premises_hold = all(
            eval_term(algebra, e.lhs, assignment) == eval_term(algebra, e.rhs, assignment)
            for e in clause.premises)
        conclusion_holds = any(
            eval_term(algebra, e.lhs, assignment) == eval_term(algebra, e.rhs, assignment)
            for e in clause.conclusions)
        if premises_hold and not conclusion_holds:
            return "ok"
        return "failed: recorded assignment is not a countermodel"
    if kind == "weak_projectivity_failure":
        rsi = algebra_from_json(witness["rsi"])
        member = algebra_from_json(witness["member"])
        status, _ = weakly_projective_in(rsi, member, caps)
        return "ok" if status == "image_not_sub" else f"failed: status {status}"
    return "skipped"
