"""Homomorphism search and isomorphism canonicalization.

The search backtracks over a greedily chosen generating set of the source,
propagating images through recorded derivations and checking every operation
constraint available at each depth, so completed assignments are already
verified homomorphisms.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product as iproduct
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .caps import DEFAULT_CAPS, Caps
from .core import (
    FiniteAlgebra,
    Homomorphism,
    SignatureMismatch,
    generate_subalgebra,
)
from .errors import SizeCapExceeded


# ---------------------------------------------------------------------------
# generating sets and derivation plans


def generating_set(algebra: FiniteAlgebra) -> Tuple[int, ...]:
    """Greedy small generating set; ties broken by least element."""
    current = set(generate_subalgebra(algebra, ()))
    chosen: List[int] = []
    while len(current) < algebra.size:
        best_e, best_closure = -1, None
        for e in algebra.elements():
            if e in current:
                continue
            closed = generate_subalgebra(algebra, tuple(current) + (e,))
            if best_closure is None or len(closed) > len(best_closure):
                best_e, best_closure = e, closed
        chosen.append(best_e)
        current = set(best_closure)
    return tuple(chosen)


class _Plan:
    """Per (algebra, generators) search plan: derivation steps and operation
    constraints for each prefix of the generating sequence."""

    __slots__ = ("generators", "steps", "constraints", "universe_sizes")

    def __init__(self, algebra: FiniteAlgebra, generators: Tuple[int, ...]):
        self.generators = generators
        self.steps: List[List[Tuple[int, object]]] = []
        self.constraints: List[List[Tuple[str, Tuple[int, ...], int]]] = []
        self.universe_sizes: List[int] = []

        known: Dict[int, None] = {}
        ordered: List[int] = []

        def grow(new_seeds: List[Tuple[int, object]]):
            steps: List[Tuple[int, object]] = []
            for e, how in new_seeds:
                if e not in known:
                    known[e] = None
                    ordered.append(e)
                    steps.append((e, how))
            frontier = [e for e, _ in steps]
            while frontier:
                fresh = []
                for sym, arity in algebra.signature.operations:
                    if arity == 0:
                        continue
                    for args in iproduct(list(ordered), repeat=arity):
                        if not any(a in frontier for a in args):
                            continue
                        value = algebra.apply(sym, *args)
                        if value not in known:
                            known[value] = None
                            ordered.append(value)
                            step = (value, (sym, args))
                            steps.append(step)
                            fresh.append(value)
                frontier = fresh
            return steps

        consts = [(algebra.tables[sym][0], ("const", sym))
                  for sym, k in algebra.signature.operations if k == 0]
        self.steps.append(grow(consts))
        self._snapshot_constraints(algebra, ordered)
        for g in generators:
            self.steps.append(grow([(g, ("gen", len(self.universe_sizes) - 1))]))
            self._snapshot_constraints(algebra, ordered)

    def _snapshot_constraints(self, algebra: FiniteAlgebra, ordered: List[int]):
        inside = set(ordered)
        previous = self.universe_sizes[-1] if self.universe_sizes else 0
        old = set(ordered[:previous]) if previous else set()
        fresh: List[Tuple[str, Tuple[int, ...], int]] = []
        for sym, arity in algebra.signature.operations:
            if arity == 0:
                fresh_const = previous == 0
                if fresh_const:
                    fresh.append((sym, (), algebra.tables[sym][0]))
                continue
            for args in iproduct(sorted(inside), repeat=arity):
                if old and all(a in old for a in args):
                    continue
                fresh.append((sym, args, algebra.apply(sym, *args)))
        self.constraints.append(fresh)
        self.universe_sizes.append(len(ordered))


@lru_cache(maxsize=256)
def _plan_for(algebra: FiniteAlgebra) -> _Plan:
    return _Plan(algebra, generating_set(algebra))


# ---------------------------------------------------------------------------
# homomorphism enumeration


def iter_homomorphisms(source: FiniteAlgebra, target: FiniteAlgebra,
                       injective: bool = False, surjective: bool = False,
                       extending: Optional[Dict[int, int]] = None,
                       restrict: Optional[Dict[int, frozenset]] = None,
                       caps: Caps = DEFAULT_CAPS) -> Iterator[Homomorphism]:
    """Backtracking enumeration in lexicographic order of the generator
    images (ascending target elements).

    `extending` pins images of arbitrary source elements; `restrict` limits
    the allowed images of individual elements."""
    if not source.same_signature(target):
        raise SignatureMismatch("homomorphism search requires a common signature")
    if surjective and target.size > source.size:
        return
    if injective and source.size > target.size:
        return
    plan = _plan_for(source)
    generators = plan.generators
    image = [-1] * source.size
    budget = [caps.hom_budget]

    def place(depth: int) -> bool:
        """Apply derivation steps and constraints for prefix `depth`;
        returns False on conflict (image[] entries are left for undo)."""
        for e, how in plan.steps[depth]:
            if how[0] == "const":
                value = target.tables[how[1]][0]
            elif how[0] == "gen":
                value = image[generators[how[1]]]
            else:
                sym, args = how
                value = target.apply(sym, *(image[a] for a in args))
            if image[e] == -1:
                image[e] = value
            elif image[e] != value:
                return False
            if extending is not None and e in extending and image[e] != extending[e]:
                return False
            if restrict is not None and e in restrict and image[e] not in restrict[e]:
                return False
        for sym, args, result in plan.constraints[depth]:
            if image[result] != target.apply(sym, *(image[a] for a in args)):
                return False
        if injective:
            placed = [v for v in image if v != -1]
            if len(set(placed)) != len(placed):
                return False
        return True

    def undo(depth: int):
        for e, _ in plan.steps[depth]:
            image[e] = -1

    def search(depth: int) -> Iterator[Homomorphism]:
        budget[0] -= 1
        if budget[0] < 0:
            raise SizeCapExceeded("hom search nodes", caps.hom_budget, caps.hom_budget + 1)
        if depth == len(generators):
            mapping = tuple(image)
            if surjective and len(set(mapping)) != target.size:
                return
            yield Homomorphism(source, target, mapping, check=False)
            return
        g = generators[depth]
        forced = extending.get(g) if extending else None
        for candidate in range(target.size):
            if forced is not None and candidate != forced:
                continue
            if restrict is not None and g in restrict and candidate not in restrict[g]:
                continue
            image[g] = candidate
            if place(depth + 1):
                yield from search(depth + 1)
            undo(depth + 1)
            image[g] = -1
        return

    if not place(0):
        undo(0)
        return
    try:
        yield from search(0)
    finally:
        undo(0)
        for e in range(source.size):
            image[e] = -1


def enumerate_homomorphisms(source: FiniteAlgebra, target: FiniteAlgebra,
                            mode: str = "all",
                            partial: Optional[Dict[int, int]] = None,
                            caps: Caps = DEFAULT_CAPS) -> List[Homomorphism]:
    """Modes: any | all | injective | surjective | extending.

    `all` returns every homomorphism in lexicographic order of the map on the
    chosen generating set; `any` returns at most one.
    """
    if mode == "any":
        for h in iter_homomorphisms(source, target, caps=caps):
            return [h]
        return []
    if mode == "all":
        return list(iter_homomorphisms(source, target, caps=caps))
    if mode == "injective":
        return list(iter_homomorphisms(source, target, injective=True, caps=caps))
    if mode == "surjective":
        return list(iter_homomorphisms(source, target, surjective=True, caps=caps))
    if mode == "extending":
        if partial is None:
            raise ValueError("extending mode needs a partial map")
        return list(iter_homomorphisms(source, target, extending=partial, caps=caps))
    raise ValueError(f"unknown mode {mode!r}")


def find_embedding(source: FiniteAlgebra, target: FiniteAlgebra,
                   caps: Caps = DEFAULT_CAPS) -> Optional[Homomorphism]:
    """First injective homomorphism under the canonical search order."""
    if source.size > target.size:
        return None
    for h in iter_homomorphisms(source, target, injective=True, caps=caps):
        return h
    return None


# ---------------------------------------------------------------------------
# canonical forms


def _refine_colors(algebra: FiniteAlgebra, colors: Tuple[int, ...]) -> Tuple[int, ...]:
    n = algebra.size
    while True:
        profiles = []
        for e in range(n):
            profile = [colors[e]]
            for sym, arity in algebra.signature.operations:
                if arity == 0:
                    profile.append(1 if algebra.tables[sym][0] == e else 0)
                elif arity == 1:
                    profile.append(colors[algebra.tables[sym][e]])
                else:
                    row = sorted(
                        (colors[x],) + tuple(
                            colors[algebra.apply(sym, *_spot(e, x, pos, arity))]
                            for pos in range(arity))
                        for x in range(n))
                    profile.append(tuple(row))
            profiles.append(tuple(profile))
        ranking = {p: i for i, p in enumerate(sorted(set(profiles)))}
        fresh = tuple(ranking[p] for p in profiles)
        if fresh == colors:
            return colors
        colors = fresh


def _spot(e: int, x: int, pos: int, arity: int) -> Tuple[int, ...]:
    args = [x] * arity
    args[pos] = e
    return tuple(args)


def _relabelled_tables(algebra: FiniteAlgebra, perm: Sequence[int]) -> Tuple:
    """perm[old] = new; tables of the renamed algebra, in signature order."""
    n = algebra.size
    inverse = [0] * n
    for old, new in enumerate(perm):
        inverse[new] = old
    out = []
    for sym, arity in algebra.signature.operations:
        entries = []
        for args in iproduct(range(n), repeat=arity):
            olds = tuple(inverse[a] for a in args)
            entries.append(perm[algebra.apply(sym, *olds)])
        out.append(tuple(entries))
    return tuple(out)


@lru_cache(maxsize=4096)
def canonical_form(algebra: FiniteAlgebra) -> Tuple[FiniteAlgebra, Tuple[int, ...]]:
    """Canonical relabeling, stable across runs.

    Invariant refinement followed by backtracking over the remaining
    symmetry; two algebras are isomorphic iff their canonical tables are
    equal.  Returns (canonical algebra, permutation old->new)."""
    n = algebra.size
    colors = _refine_colors(algebra, (0,) * n)
    best: List[Optional[Tuple]] = [None, None]

    def descend(colors: Tuple[int, ...]):
        classes: Dict[int, List[int]] = {}
        for e, c in enumerate(colors):
            classes.setdefault(c, []).append(e)
        split = [c for c in sorted(classes) if len(classes[c]) > 1]
        if not split:
            perm = [0] * n
            for rank, e in enumerate(sorted(range(n), key=lambda e: colors[e])):
                perm[e] = rank
            tables = _relabelled_tables(algebra, perm)
            if best[0] is None or tables < best[0]:
                best[0] = tables
                best[1] = tuple(perm)
            return
        target = split[0]
        for e in classes[target]:
            bumped = tuple(
                (c if c < target else c + 1) if x != e else target
                for x, c in enumerate(colors))
            descend(_refine_colors(algebra, bumped))

    descend(colors)
    perm = best[1]
    tables = {sym: best[0][i]
              for i, (sym, _) in enumerate(algebra.signature.operations)}
    names = None
    if algebra.element_names:
        names = [""] * n
        for old, new in enumerate(perm):
            names[new] = algebra.element_names[old]
    canon = FiniteAlgebra(algebra.signature, n, tables,
                          label=algebra.label, element_names=names)
    return canon, perm


def canonical_key(algebra: FiniteAlgebra) -> Tuple:
    canon, _ = canonical_form(algebra)
    return (algebra.signature.operations, algebra.size,
            tuple(canon.tables[sym] for sym, _ in algebra.signature.operations))


def are_isomorphic(a: FiniteAlgebra, b: FiniteAlgebra) -> bool:
    if not a.same_signature(b) or a.size != b.size:
        return False
    return canonical_key(a) == canonical_key(b)
