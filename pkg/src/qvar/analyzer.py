"""Completeness analysis for Q(K): the eight properties of the
universal/structural hierarchy plus primitivity, with certificates where a
finite criterion exists and bounded evidence otherwise.

All verdicts are about Q(K) as a quasivariety; in the locally finite,
finite-type setting (K finite of finite type) the relative subdirectly
irreducibles are subalgebras of members of K, which is what makes the
certified recipes finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .caps import DEFAULT_CAPS, Caps
from .catalog import JOIN_IRREDUCIBLE_TOP, PHI
from .clauses import (
    Clause,
    admissible_in,
    classify_activity,
    holds_in,
    parse_clause,
)
from .core import (
    FiniteAlgebra,
    congruence_lattice,
    direct_product,
    in_isp,
    quotient,
    si_status,
    subalgebra_on,
    subuniverses,
    trivial_algebra,
)
from .errors import ParseError, SizeCapExceeded
from .free import (
    find_unifier,
    free_algebra,
    is_exact,
    smallest_free,
    weakly_projective_in,
)
from .homs import canonical_form, canonical_key
from .jsonio import algebra_to_json

PROPERTIES = ("U", "NNU", "AU", "AS", "S", "PS", "PU", "SPU", "PRIM")

# edges low -> high of the completeness semilattice: if the low (stronger)
# property holds, the high one must hold
HIERARCHY_EDGES = (
    ("U", "NNU"), ("U", "SPU"),
    ("NNU", "AU"), ("NNU", "S"),
    ("SPU", "S"), ("SPU", "PU"),
    ("S", "AS"), ("S", "PS"),
    ("AU", "AS"), ("PU", "PS"),
)

THEOREMS = {
    "U": "locally finite universal completeness: unifiable with exact unifiers",
    "NNU": "non-negative universal completeness: every nontrivial finitely presented algebra exact",
    "AU": "active universal completeness: every unifiable finitely presented algebra exact",
    "AS": "active structural completeness: A x F_Q separates into finite free algebras, per relative subdirectly irreducible A",
    "S": "structural completeness: every finite relative subdirectly irreducible exact",
    "PS": "passive structural completeness: every finite relative subdirectly irreducible unifiable",
    "PU": "passive universal completeness: the quasivariety is unifiable, including the trivial algebra",
    "SPU": "conjunction of structural and passive universal completeness",
    "PRIM": "primitivity: relative subdirectly irreducibles weakly projective among finite members",
    "PRIM-W": "primitivity via the lattice projectivity condition on all generators",
}

KLEENE_AXIOM = r"=> x /\ ~x <= y \/ ~y"
BOOLEAN_LATTICE_AXIOM = r"=> x <= y \/ ~y"


def _phi_applies(seeds, caps: Caps) -> bool:
    """The Kleene-lattice admissible quasiequation is asserted only where the
    generated variety is that of Kleene lattices: all seeds Kleene, some seed
    not a Boolean lattice."""
    try:
        kleene = parse_clause(KLEENE_AXIOM, seeds[0].signature)
        boolean = parse_clause(BOOLEAN_LATTICE_AXIOM, seeds[0].signature)
    except ParseError:
        return False
    if not all(holds_in(s, kleene, caps)[0] for s in seeds):
        return False
    return not all(holds_in(s, boolean, caps)[0] for s in seeds)


def _jit_applies(seeds, caps: Caps) -> bool:
    """Join-irreducibility of the top is asserted for varieties of bounded
    lattices (the plain bounded-lattice signature)."""
    from .catalog import BLAT

    return seeds[0].signature.operations == BLAT.operations


# clause fixtures tried as falsity evidence for the active properties, each
# guarded by the predicate that scopes its asserted admissibility
FIXTURE_CLAUSES = ((PHI, _phi_applies), (JOIN_IRREDUCIBLE_TOP, _jit_applies))


@dataclass(frozen=True)
class ProbeMember:
    algebra: FiniteAlgebra
    provenance: str
    in_q: bool


@dataclass(frozen=True)
class ProbeSet:
    seeds: Tuple[FiniteAlgebra, ...]
    members: Tuple[ProbeMember, ...]
    partial: bool

    def algebras(self, only_in_q: bool = False) -> List[FiniteAlgebra]:
        return [m.algebra for m in self.members if m.in_q or not only_in_q]


def probe_set(seeds: Sequence[FiniteAlgebra], caps: Caps = DEFAULT_CAPS) -> ProbeSet:
    """Worklist closure of the seeds under subalgebras, homomorphic images
    and binary products, deduped by canonical form, deterministic order.

    Members are stored in canonical form; each is tagged with membership in
    ISP(seeds), since homomorphic images may leave the quasivariety."""
    seeds = tuple(seeds)
    partial = False
    known: Dict[Tuple, ProbeMember] = {}
    pending: List[Tuple[FiniteAlgebra, str]] = []
    done: List[Tuple[FiniteAlgebra, str]] = []

    def shorten(text: str) -> str:
        return text if len(text) <= 48 else text[:45] + "..."

    def push(algebra: FiniteAlgebra, provenance: str) -> None:
        nonlocal partial
        if algebra.size > caps.probe_size:
            partial = True
            return
        if len(known) >= caps.probe_count:
            partial = True
            return
        key = canonical_key(algebra)
        if key in known:
            return
        provenance = shorten(provenance)
        canon, _ = canonical_form(algebra)
        canon = FiniteAlgebra(canon.signature, canon.size, canon.tables,
                              label=provenance, element_names=canon.element_names)
        member_q, _ = in_isp(canon, seeds, caps=caps)
        known[key] = ProbeMember(canon, provenance, member_q)
        pending.append((canon, provenance))

    push(trivial_algebra(seeds[0].signature), "trivial")
    for seed in seeds:
        push(seed, seed.label or "seed")

    while pending:
        pending.sort(key=lambda item: (item[0].size, canonical_key(item[0])))
        algebra, provenance = pending.pop(0)
        done.append((algebra, provenance))
        if len(known) >= caps.probe_count:
            partial = True
            break
        for universe in subuniverses(algebra):
            if len(universe) < algebra.size:
                sub, _ = subalgebra_on(algebra, universe)
                push(sub, f"sub({provenance})")
        try:
            for theta in congruence_lattice(algebra, caps):
                if not theta.is_identity() and not theta.is_total():
                    block_algebra, _ = quotient(algebra, theta)
                    push(block_algebra, f"quot({provenance})")
        except SizeCapExceeded:
            partial = True
        for other, other_prov in done:
            if algebra.size * other.size <= caps.probe_size:
                push(direct_product([algebra, other], caps),
                     f"{provenance} x {other_prov}")
    members = tuple(sorted(known.values(),
                           key=lambda m: (m.algebra.size, canonical_key(m.algebra))))
    return ProbeSet(seeds, members, partial)


def rsi_catalog(seeds: Sequence[FiniteAlgebra],
                caps: Caps = DEFAULT_CAPS) -> List[FiniteAlgebra]:
    """The relative subdirectly irreducibles of Q(seeds), up to isomorphism:
    subalgebras of the seeds whose relative congruence lattice has a unique
    atom."""
    seeds = tuple(seeds)
    found: Dict[Tuple, FiniteAlgebra] = {}
    for seed in seeds:
        for universe in subuniverses(seed):
            sub, _ = subalgebra_on(seed, universe, label=f"{seed.label}-sub")
            key = canonical_key(sub)
            if key in found:
                continue
            status = si_status(sub, relative_to=seeds, caps=caps)
            if status.kind == "rsi":
                canon, _ = canonical_form(sub)
                label = seed.label if len(universe) == seed.size else \
                    f"{seed.label}|{{{','.join(map(str, universe))}}}"
                found[key] = FiniteAlgebra(canon.signature, canon.size,
                                           canon.tables, label=label,
                                           element_names=canon.element_names)
    return sorted(found.values(), key=lambda a: (a.size, canonical_key(a)))


@dataclass(frozen=True)
class PropertyVerdict:
    prop: str
    status: str              # certified | bounded
    value: bool
    theorem: str
    bound: Optional[int] = None
    witnesses: Tuple[dict, ...] = ()

    def describe(self) -> str:
        flavor = "Certified" if self.status == "certified" else "BoundedEvidence"
        inner = str(self.value).lower()
        if self.status == "bounded" and self.bound is not None:
            inner += f", bound {self.bound}"
        return f"{flavor}({inner})"

    def to_json(self) -> dict:
        out = {"status": self.status, "value": self.value,
               "theorem": self.theorem, "witnesses": list(self.witnesses)}
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def _alg_ref(algebra: FiniteAlgebra) -> dict:
    return algebra_to_json(algebra)


def _unifier_witnesses(seeds, algebras, caps):
    """Unifiers into F_Q for each algebra, or the first failure."""
    witnesses = []
    for algebra in algebras:
        hom = find_unifier(algebra, seeds, caps)
        if hom is None:
            return None, {"kind": "non_unifiable", "algebra": _alg_ref(algebra)}
        witnesses.append({"kind": "unifier", "algebra": _alg_ref(algebra),
                          "map": list(hom.map)})
    return witnesses, None


def check_property(seeds: Sequence[FiniteAlgebra], prop: str,
                   caps: Caps = DEFAULT_CAPS,
                   probe: Optional[ProbeSet] = None,
                   rsis: Optional[List[FiniteAlgebra]] = None) -> PropertyVerdict:
    seeds = tuple(seeds)
    prop = prop.upper()
    if prop == "SPU":
        left = check_property(seeds, "S", caps, probe, rsis)
        right = check_property(seeds, "PU", caps, probe, rsis)
        value = left.value and right.value
        status = "certified" if (
            left.status == right.status == "certified"
            or (left.status == "certified" and not left.value)
            or (right.status == "certified" and not right.value)) else "bounded"
        bound = None if status == "certified" else \
            max(b for b in (left.bound, right.bound, 0) if b is not None)
        return PropertyVerdict("SPU", status, value, THEOREMS["SPU"], bound,
                               left.witnesses + right.witnesses)

    if rsis is None and prop in ("PU", "PS", "S", "AS", "PRIM"):
        rsis = rsi_catalog(seeds, caps)
    if probe is None and prop in ("U", "NNU", "AU", "PRIM"):
        probe = probe_set(seeds, caps)

    if prop == "PU":
        witnesses, failure = _unifier_witnesses(seeds, rsis, caps)
        if failure is None:
            triv = trivial_algebra(seeds[0].signature)
            hom = find_unifier(triv, seeds, caps)
            if hom is None:
                failure = {"kind": "non_unifiable", "algebra": _alg_ref(triv),
                           "note": "the trivial algebra has no unifier"}
            else:
                witnesses.append({"kind": "unifier", "algebra": _alg_ref(triv),
                                  "map": list(hom.map)})
        if failure is not None:
            return PropertyVerdict("PU", "certified", False, THEOREMS["PU"],
                                   witnesses=(failure,))
        return PropertyVerdict("PU", "certified", True, THEOREMS["PU"],
                               witnesses=tuple(witnesses))

    if prop == "PS":
        witnesses, failure = _unifier_witnesses(seeds, rsis, caps)
        if failure is not None:
            return PropertyVerdict("PS", "certified", False, THEOREMS["PS"],
                                   witnesses=(failure,))
        return PropertyVerdict("PS", "certified", True, THEOREMS["PS"],
                               witnesses=tuple(witnesses))

    if prop == "S":
        witnesses = []
        unknown = []
        bound = caps.free_rank_bound or None
        for algebra in rsis:
            verdict = is_exact(algebra, seeds, bound=bound, caps=caps)
            if verdict.certified_no():
                return PropertyVerdict("S", "certified", False, THEOREMS["S"],
                                       witnesses=({"kind": "non_unifiable_rsi",
                                                   "algebra": _alg_ref(algebra)},))
            if verdict.certified_yes():
                witnesses.append({"kind": "embedding", "algebra": _alg_ref(algebra),
                                  "rank": verdict.rank,
                                  "map": list(verdict.embedding.map)})
            else:
                unknown.append({"kind": "exactness_unknown",
                                "algebra": _alg_ref(algebra),
                                "bound": verdict.bound})
        if unknown:
            top = max(u["bound"] for u in unknown)
            return PropertyVerdict("S", "bounded", False, THEOREMS["S"], top,
                                   tuple(unknown))
        return PropertyVerdict("S", "certified", True, THEOREMS["S"],
                               witnesses=tuple(witnesses))

    if prop in ("U", "NNU", "AU"):
        return _universal_family(seeds, prop, probe, caps)

    if prop == "AS":
        return _active_structural(seeds, rsis, caps)

    if prop == "PRIM":
        return _primitivity(seeds, rsis, probe, caps)

    raise ValueError(f"unknown property {prop!r}")


def _clause_fixture_evidence(seeds, probe: ProbeSet, caps: Caps,
                             quasiequations_only: bool,
                             need_unifiable_witness: bool) -> Optional[dict]:
    """An admissible-up-to-bound active clause failing where it should not:
    bounded falsity evidence for the active completeness properties."""
    signature = seeds[0].signature
    for text, applies in FIXTURE_CLAUSES:
        if not applies(seeds, caps):
            continue
        try:
            clause = parse_clause(text, signature)
        except ParseError:
            continue
        if quasiequations_only and not clause.is_quasiequation():
            continue
        activity, _ = classify_activity(seeds, clause, caps)
        if activity != "active":
            continue
        try:
            verdict = admissible_in(seeds, clause, caps=caps)
        except SizeCapExceeded:
            continue
        if verdict.refuted:
            continue
        for member in probe.members:
            if not member.in_q:
                continue
            if need_unifiable_witness and \
                    find_unifier(member.algebra, seeds, caps) is None:
                continue
            ok, assignment = holds_in(member.algebra, clause, caps)
            if not ok:
                named = {v: member.algebra.name_of(e)
                         for v, e in assignment.items()}
                return {"kind": "clause_failure", "clause": text,
                        "algebra": _alg_ref(member.algebra),
                        "assignment": named,
                        "admissible_up_to": verdict.bound,
                        "note": "evidence: admissibility is bounded, not certified"}
    return None


def _universal_family(seeds, prop: str, probe: ProbeSet, caps: Caps) -> PropertyVerdict:
    """U / NNU / AU: exactness sweeps over the probe approximation of the
    finite members of Q(K), with certified falsity where non-unifiability
    licenses it."""
    members = [m for m in probe.members if m.in_q]
    if prop == "NNU":
        members = [m for m in members if not m.algebra.is_trivial()]
    theorem = THEOREMS[prop]

    unifiable: List[ProbeMember] = []
    for member in members:
        if find_unifier(member.algebra, seeds, caps) is None:
            if prop in ("U", "NNU"):
                return PropertyVerdict(prop, "certified", False, theorem,
                                       witnesses=({"kind": "non_unifiable",
                                                   "algebra": _alg_ref(member.algebra)},))
        else:
            unifiable.append(member)

    evidence = _clause_fixture_evidence(seeds, probe, caps,
                                        quasiequations_only=False,
                                        need_unifiable_witness=True)
    if evidence is not None:
        return PropertyVerdict(prop, "bounded", False, theorem,
                               caps.free_rank_bound or None, (evidence,))

    unknown = []
    bound = caps.free_rank_bound or None
    for member in unifiable:
        verdict = is_exact(member.algebra, seeds, bound=bound, caps=caps)
        if not verdict.certified_yes():
            unknown.append({"kind": "exactness_unknown",
                            "algebra": _alg_ref(member.algebra),
                            "bound": verdict.bound})
    top = probe.partial or bool(unknown)
    if unknown:
        return PropertyVerdict(prop, "bounded", False, theorem,
                               max(u["bound"] for u in unknown), tuple(unknown))
    return PropertyVerdict(prop, "bounded", True, theorem,
                           len(probe.members), ())


def _active_structural(seeds, rsis, caps: Caps) -> PropertyVerdict:
    """A x F_Q must lie in ISP of a finitely generated free algebra for each
    relative subdirectly irreducible A; separation certifies truth."""
    free_bottom = smallest_free(seeds, caps)
    bound = caps.free_rank_bound or 3
    start = 0 if seeds[0].signature.constants() else 1
    witnesses = []
    unseparated = []
    for algebra in rsis:
        prod = direct_product([algebra, free_bottom.carrier], caps)
        separated = None
        for rank in range(start, bound + 1):
            try:
                free = free_algebra(seeds, rank, caps)
                ok, family = in_isp(prod, [free.carrier], caps=caps)
            except SizeCapExceeded:
                break
            if ok:
                separated = (rank, family)
                break
        if separated is None:
            unseparated.append({"kind": "separation_unknown",
                                "algebra": _alg_ref(algebra), "bound": bound})
        else:
            witnesses.append({"kind": "separating_family",
                              "algebra": _alg_ref(prod),
                              "rank": separated[0],
                              "maps": [list(h.map) for h in separated[1]]})
    if not unseparated:
        return PropertyVerdict("AS", "certified", True, THEOREMS["AS"],
                               witnesses=tuple(witnesses))
    probe = ProbeSet(tuple(seeds),
                     tuple(ProbeMember(a, a.label or "seed", True) for a in seeds),
                     True)
    evidence = _clause_fixture_evidence(seeds, probe, caps,
                                        quasiequations_only=True,
                                        need_unifiable_witness=False)
    found = (evidence,) if evidence is not None else tuple(unseparated)
    return PropertyVerdict("AS", "bounded", False, THEOREMS["AS"], bound, found)


def _primitivity(seeds, rsis, probe: ProbeSet, caps: Caps) -> PropertyVerdict:
    """Certified false by a relative subdirectly irreducible that is an image
    but not a subalgebra of a finite member; certified true for pure lattice
    seeds satisfying the projectivity condition; bounded true otherwise."""
    from .lattices import check_whitman

    signature = seeds[0].signature
    pure_lattice = signature.operations == (("meet", 2), ("join", 2))
    if pure_lattice and all(check_whitman(seed, caps)[0] for seed in seeds):
        return PropertyVerdict(
            "PRIM", "certified", True, THEOREMS["PRIM-W"],
            witnesses=tuple({"kind": "whitman", "algebra": _alg_ref(s)}
                            for s in seeds))
    for algebra in rsis:
        for member in probe.members:
            if not member.in_q:
                continue
            status, _ = weakly_projective_in(algebra, member.algebra, caps)
            if status == "image_not_sub":
                return PropertyVerdict(
                    "PRIM", "certified", False, THEOREMS["PRIM"],
                    witnesses=({"kind": "weak_projectivity_failure",
                                "rsi": _alg_ref(algebra),
                                "member": _alg_ref(member.algebra)},))
    return PropertyVerdict("PRIM", "bounded", True, THEOREMS["PRIM"],
                           len(probe.members), ())


# ---------------------------------------------------------------------------
# reports


def verdict_consistency(report: Dict[str, PropertyVerdict]) -> List[dict]:
    """Check the hierarchy edges: a certified-true stronger property with a
    certified-false weaker one is a violation; disagreements involving
    bounded evidence are warnings."""
    out = []
    for low, high in HIERARCHY_EDGES:
        if low not in report or high not in report:
            continue
        a, b = report[low], report[high]
        if a.value and not b.value:
            kind = "violation" if (a.status == "certified"
                                   and b.status == "certified") else "warning"
            out.append({"kind": kind, "edge": f"{low}=>{high}",
                        "detail": f"{low} {a.describe()} but {high} {b.describe()}"})
    return out


def analyze(seeds: Sequence[FiniteAlgebra], properties: Sequence[str] = PROPERTIES,
            caps: Caps = DEFAULT_CAPS) -> dict:
    seeds = tuple(seeds)
    properties = [p.upper() for p in properties]
    needs_probe = any(p in ("U", "NNU", "AU", "PRIM") for p in properties)
    needs_rsis = any(p in ("PU", "PS", "S", "AS", "PRIM", "SPU") for p in properties)
    probe = probe_set(seeds, caps) if needs_probe else None
    rsis = rsi_catalog(seeds, caps) if needs_rsis else None
    verdicts: Dict[str, PropertyVerdict] = {}
    for prop in properties:
        verdicts[prop] = check_property(seeds, prop, caps, probe, rsis)
    report = {
        "scope": "results are for Q(K) as a quasivariety",
        "seeds": [s.label or "?" for s in seeds],
        "seed_algebras": [algebra_to_json(s) for s in seeds],
        "signature": seeds[0].signature.name,
        "caps": {"probe_size": caps.probe_size, "probe_count": caps.probe_count,
                 "free_rank_bound": caps.free_rank_bound},
        "properties": {p: v.to_json() for p, v in verdicts.items()},
        "consistency": verdict_consistency(verdicts),
    }
    if probe is not None:
        report["probe"] = {"count": len(probe.members), "partial": probe.partial,
                           "members": [{"label": m.provenance,
                                        "size": m.algebra.size,
                                        "in_q": m.in_q}
                                       for m in probe.members]}
    if rsis is not None:
        report["rsi_catalog"] = [{"label": a.label, "size": a.size} for a in rsis]
    return report
