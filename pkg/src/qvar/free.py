"""Free and finitely presented algebras over Q(K), unifiers, exactness,
projectivity.

A free algebra carrier lives inside the product of one column per assignment
of the variables into each generating algebra; elements are the reachable
evaluation tuples and each carries a witness term recorded at first
discovery.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .caps import DEFAULT_CAPS, Caps
from .core import (
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    SignatureMismatch,
    Term,
    eval_term,
    quotient,
)
from .errors import SizeCapExceeded
from .homs import find_embedding, generating_set, iter_homomorphisms

VAR_NAMES = ("x", "y", "z", "u", "v", "w")


def var_name(i: int) -> str:
    return VAR_NAMES[i] if i < len(VAR_NAMES) else f"x{i}"


@dataclass(frozen=True)
class FreeAlgebra:
    generators: Tuple[FiniteAlgebra, ...]
    rank: int
    carrier: FiniteAlgebra
    witnesses: Tuple[Term, ...]
    generator_elements: Tuple[int, ...]
    columns: Tuple[Tuple[int, Tuple[int, ...]], ...]  # (algebra idx, assignment)

    @property
    def size(self) -> int:
        return self.carrier.size


def assignments(algebra: FiniteAlgebra, rank: int):
    """All maps {x0..x(rank-1)} -> algebra, variable 0 most significant."""
    return iproduct(range(algebra.size), repeat=rank)


@lru_cache(maxsize=64)
def free_algebra(generators: Tuple[FiniteAlgebra, ...], rank: int,
                 caps: Caps = DEFAULT_CAPS) -> FreeAlgebra:
    """Free algebra of the given rank over Q(generators).

    Rank 0 with no constants falls back to rank 1 (the smallest free algebra
    is one-generated in that case)."""
    if not generators:
        raise SignatureMismatch("free algebra needs at least one generating algebra")
    signature = generators[0].signature
    for g in generators[1:]:
        if not g.same_signature(generators[0]):
            raise SignatureMismatch("generators must share a signature")
    if rank == 0 and not signature.constants():
        rank = 1

    columns: List[Tuple[int, Tuple[int, ...]]] = []
    for i, algebra in enumerate(generators):
        total = algebra.size ** rank
        if len(columns) + total > caps.free_columns:
            raise SizeCapExceeded("free columns", caps.free_columns,
                                  len(columns) + total)
        for asgn in assignments(algebra, rank):
            columns.append((i, asgn))

    col_algebras = [generators[i] for i, _ in columns]
    width = len(columns)

    def apply_op(sym: str, args: Sequence[Tuple[int, ...]]) -> Tuple[int, ...]:
        return tuple(col_algebras[c].apply(sym, *(a[c] for a in args))
                     for c in range(width))

    index: Dict[Tuple[int, ...], int] = {}
    elements: List[Tuple[int, ...]] = []
    witnesses: List[Term] = []

    def add(value: Tuple[int, ...], term: Term) -> Optional[int]:
        if value in index:
            return None
        if len(elements) >= caps.free_size:
            raise SizeCapExceeded("free carrier size", caps.free_size,
                                  len(elements) + 1)
        index[value] = len(elements)
        elements.append(value)
        witnesses.append(term)
        return index[value]

    generator_elements = []
    for j in range(rank):
        value = tuple(asgn[j] for _, asgn in columns)
        fresh = add(value, Term.v(j))
        generator_elements.append(fresh if fresh is not None else index[value])
    for sym, arity in signature.operations:
        if arity == 0:
            add(tuple(a.tables[sym][0] for a in col_algebras), Term.app(sym))

    work = 0
    frontier = list(range(len(elements)))
    while frontier:
        candidates = []
        total = len(elements)
        frontier_set = set(frontier)
        for op_idx, (sym, arity) in enumerate(signature.operations):
            if arity == 0:
                continue
            for args in iproduct(range(total), repeat=arity):
                if not any(a in frontier_set for a in args):
                    continue
                size = 1 + sum(witnesses[a].size for a in args)
                candidates.append((size, op_idx, args, sym))
        work += len(candidates)
        if work > caps.free_work:
            raise SizeCapExceeded("free construction work", caps.free_work, work)
        candidates.sort(key=lambda c: (c[0], c[1], c[2]))
        fresh = []
        for _, _, args, sym in candidates:
            value = apply_op(sym, [elements[a] for a in args])
            if value not in index:
                term = Term.app(sym, *(witnesses[a] for a in args))
                fresh.append(add(value, term))
        frontier = fresh

    size = len(elements)
    tables = {}
    for sym, arity in signature.operations:
        if arity == 0:
            tables[sym] = [index[tuple(a.tables[sym][0] for a in col_algebras)]]
            continue
        entries = []
        for args in iproduct(range(size), repeat=arity):
            entries.append(index[apply_op(sym, [elements[a] for a in args])])
        tables[sym] = entries

    from .core import show_term

    names = [show_term(w, tuple(var_name(i) for i in range(rank)))
             for w in witnesses]
    base = ",".join(g.label or "?" for g in generators)
    carrier = FiniteAlgebra(signature, size, tables,
                            label=f"F({base};{rank})", element_names=names)
    return FreeAlgebra(tuple(generators), rank, carrier, tuple(witnesses),
                       tuple(generator_elements), tuple(columns))


def smallest_free(generators: Tuple[FiniteAlgebra, ...],
                  caps: Caps = DEFAULT_CAPS) -> FreeAlgebra:
    """F_Q: constants-only free algebra, or one-generated without constants."""
    return free_algebra(tuple(generators), 0, caps)


# ---------------------------------------------------------------------------
# finitely presented algebras


@dataclass(frozen=True)
class Presentation:
    variables: Tuple[str, ...]
    relations: Tuple[Tuple[Term, Term], ...]
    base: Tuple[FiniteAlgebra, ...]

    def __post_init__(self):
        nvars = len(self.variables)
        for lhs, rhs in self.relations:
            for v in lhs.variables() + rhs.variables():
                if v >= nvars:
                    raise SignatureMismatch(
                        f"relation uses variable x{v} outside the declared {nvars}")


def satisfying_columns(free: FreeAlgebra,
                       relations: Sequence[Tuple[Term, Term]]) -> List[int]:
    """Columns of the free carrier whose assignments satisfy every relation."""
    out = []
    for c, (alg_idx, asgn) in enumerate(free.columns):
        algebra = free.generators[alg_idx]
        if all(eval_term(algebra, lhs, asgn) == eval_term(algebra, rhs, asgn)
               for lhs, rhs in relations):
            out.append(c)
    return out


def presentation_congruence(free: FreeAlgebra,
                            relations: Sequence[Tuple[Term, Term]]) -> Congruence:
    """theta_Q(relations) as the joint kernel of every satisfying assignment
    into the generators (the empty family collapses everything)."""
    good = satisfying_columns(free, relations)
    carrier = free.carrier
    keys: Dict[Tuple[int, ...], int] = {}
    blocks = []
    for e in range(carrier.size):
        restricted = tuple(free_element_coords(free, e)[c] for c in good)
        blocks.append(keys.setdefault(restricted, len(keys)))
    return Congruence(carrier, blocks, check=False)


_coords_cache: Dict[int, List[Tuple[int, ...]]] = {}


def free_element_coords(free: FreeAlgebra, e: int) -> Tuple[int, ...]:
    cached = _coords_cache.get(id(free))
    if cached is None:
        cached = []
        for i in range(free.carrier.size):
            cached.append(tuple(
                eval_term(free.generators[a], free.witnesses[i], asgn)
                for a, asgn in free.columns))
        _coords_cache[id(free)] = cached
    return cached[e]


def finitely_presented(presentation: Presentation, caps: Caps = DEFAULT_CAPS
                       ) -> Tuple[FiniteAlgebra, Homomorphism]:
    free = free_algebra(presentation.base, len(presentation.variables), caps)
    theta = presentation_congruence(free, presentation.relations)
    algebra, surjection = quotient(free.carrier, theta)
    algebra = FiniteAlgebra(
        algebra.signature, algebra.size, algebra.tables,
        label=f"{free.carrier.label}/Σ", element_names=algebra.element_names)
    return algebra, Homomorphism(free.carrier, algebra, surjection.map, check=False)


# ---------------------------------------------------------------------------
# unifiability


def find_unifier(algebra: FiniteAlgebra, generators: Sequence[FiniteAlgebra],
                 caps: Caps = DEFAULT_CAPS) -> Optional[Homomorphism]:
    """A homomorphism into the smallest free algebra, if any."""
    free = smallest_free(tuple(generators), caps)
    for hom in iter_homomorphisms(algebra, free.carrier, caps=caps):
        return hom
    return None


def unifiable_set(relations: Sequence[Tuple[Term, Term]], nvars: int,
                  generators: Sequence[FiniteAlgebra],
                  caps: Caps = DEFAULT_CAPS) -> Optional[dict]:
    """Some assignment of the variables into F_Q satisfying all relations;
    returns {var: element} or None."""
    free = smallest_free(tuple(generators), caps)
    carrier = free.carrier
    for asgn in iproduct(range(carrier.size), repeat=nvars):
        if all(eval_term(carrier, lhs, asgn) == eval_term(carrier, rhs, asgn)
               for lhs, rhs in relations):
            return {i: asgn[i] for i in range(nvars)}
    return None


# ---------------------------------------------------------------------------
# exactness and projectivity


@dataclass(frozen=True)
class ExactnessVerdict:
    kind: str                         # yes | no | unknown
    rank: Optional[int] = None
    embedding: Optional[Homomorphism] = None
    bound: Optional[int] = None
    capped: bool = False
    reason: str = ""

    def certified_yes(self) -> bool:
        return self.kind == "yes"

    def certified_no(self) -> bool:
        return self.kind == "no"


def is_exact(algebra: FiniteAlgebra, generators: Sequence[FiniteAlgebra],
             bound: Optional[int] = None, caps: Caps = DEFAULT_CAPS
             ) -> ExactnessVerdict:
    """Search an embedding into free algebras of increasing rank.

    Not unifiable => certified no (exactness implies unifiability).  A found
    embedding certifies yes; exhaustion of the rank bound is only bounded
    evidence of failure."""
    generators = tuple(generators)
    if find_unifier(algebra, generators, caps) is None:
        return ExactnessVerdict("no", reason="not-unifiable")
    if bound is None:
        bound = caps.free_rank_bound or max(algebra.size, 1)
    start = 0 if algebra.signature.constants() else 1
    capped = False
    for rank in range(start, bound + 1):
        try:
            free = free_algebra(generators, rank, caps)
        except SizeCapExceeded:
            capped = True
            break
        if free.size < algebra.size:
            continue
        try:
            embedding = find_embedding(algebra, free.carrier, caps)
        except SizeCapExceeded:
            capped = True
            break
        if embedding is not None:
            return ExactnessVerdict("yes", rank=rank, embedding=embedding,
                                    bound=bound)
    return ExactnessVerdict("unknown", bound=bound, capped=capped,
                            reason="no embedding found up to the rank bound")


def is_projective(algebra: FiniteAlgebra, generators: Sequence[FiniteAlgebra],
                  caps: Caps = DEFAULT_CAPS
                  ) -> Optional[Tuple[Homomorphism, Homomorphism]]:
    """(section, retraction) pair through a finitely generated free algebra,
    or None.  Sound both ways: a projective algebra is a retract of the free
    algebra on any generating set of it."""
    generators = tuple(generators)
    gens = minimal_generating_set(algebra)
    free = free_algebra(generators, max(len(gens), 1), caps)
    carrier = free.carrier

    natural = _evaluation_hom(free, algebra, gens)
    candidates = [natural] if natural is not None else []
    for h in iter_homomorphisms(carrier, algebra, surjective=True, caps=caps):
        if natural is None or h.map != natural.map:
            candidates.append(h)
    for retraction in candidates:
        fibers = {g: frozenset(e for e in range(carrier.size)
                               if retraction.map[e] == g)
                  for g in range(algebra.size)}
        for section in iter_homomorphisms(algebra, carrier,
                                          injective=True,
                                          restrict=fibers, caps=caps):
            return section, retraction
    return None


def _evaluation_hom(free: FreeAlgebra, algebra: FiniteAlgebra,
                    gens: Sequence[int]) -> Optional[Homomorphism]:
    asgn = {i: g for i, g in enumerate(gens)}
    try:
        mapping = [eval_term(algebra, w, asgn) for w in free.witnesses]
        return Homomorphism(free.carrier, algebra, mapping, check=True)
    except SignatureMismatch:
        return None


def minimal_generating_set(algebra: FiniteAlgebra) -> Tuple[int, ...]:
    """Greedy generating set, then drop redundant members."""
    from .core import generate_subalgebra

    gens = list(generating_set(algebra))
    for g in list(gens):
        rest = tuple(x for x in gens if x != g)
        if len(generate_subalgebra(algebra, rest)) == algebra.size:
            gens.remove(g)
    return tuple(gens)


def weakly_projective_in(algebra: FiniteAlgebra, other: FiniteAlgebra,
                         caps: Caps = DEFAULT_CAPS) -> Tuple[str, Optional[Homomorphism]]:
    """Is `algebra` a homomorphic image of `other`, and if so also a
    subalgebra?  Returns (status, embedding) with status in
    not_image | image_and_sub | image_not_sub."""
    from .core import congruence_lattice
    from .homs import are_isomorphic

    if not algebra.same_signature(other):
        raise SignatureMismatch("weak projectivity requires one signature")
    image = False
    if algebra.size <= other.size:
        for theta in congruence_lattice(other, caps):
            if theta.block_count != algebra.size:
                continue
            candidate, _ = quotient(other, theta)
            if are_isomorphic(candidate, algebra):
                image = True
                break
    if not image:
        return "not_image", None
    embedding = find_embedding(algebra, other, caps)
    if embedding is None:
        return "image_not_sub", None
    return "image_and_sub", embedding
