"""Finite algebras: operation tables, terms, congruences, class operators.

Universes are always {0..n-1}; operation tables are dense row-major tuples
(first argument most significant).  Every object is immutable after its
constructor has validated it, so all functions here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .caps import DEFAULT_CAPS, Caps
from .errors import (
    ElementOutOfRange,
    SignatureMismatch,
    SizeCapExceeded,
    TrivialAlgebra,
    UnassignedVariable,
)


# ---------------------------------------------------------------------------
# signatures and terms


@dataclass(frozen=True)
class Signature:
    """An ordered list of (symbol, arity) pairs; the order is canonical."""

    name: str
    operations: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        symbols = [s for s, _ in self.operations]
        if len(set(symbols)) != len(symbols):
            raise SignatureMismatch(f"duplicate operation symbols in {self.name}")
        if any(k < 0 for _, k in self.operations):
            raise SignatureMismatch("negative arity")

    def arity(self, symbol: str) -> int:
        for s, k in self.operations:
            if s == symbol:
                return k
        raise SignatureMismatch(f"unknown operation {symbol!r} in signature {self.name}")

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(s for s, _ in self.operations)

    def constants(self) -> Tuple[str, ...]:
        return tuple(s for s, k in self.operations if k == 0)

    def same_operations(self, other: "Signature") -> bool:
        return self.operations == other.operations


class Term:
    """Var(i) or App(op, args).  Immutable, hashable, ordered by size."""

    __slots__ = ("var", "op", "args", "size", "_hash")

    def __init__(self, var: Optional[int] = None, op: Optional[str] = None,
                 args: Tuple["Term", ...] = ()):
        if (var is None) == (op is None):
            raise ValueError("exactly one of var/op required")
        self.var = var
        self.op = op
        self.args = tuple(args)
        self.size = 1 + sum(a.size for a in self.args)
        self._hash = hash((var, op, self.args))

    @staticmethod
    def v(i: int) -> "Term":
        return Term(var=i)

    @staticmethod
    def app(op: str, *args: "Term") -> "Term":
        return Term(op=op, args=tuple(args))

    def variables(self) -> Tuple[int, ...]:
        if self.var is not None:
            return (self.var,)
        seen: List[int] = []
        for a in self.args:
            for x in a.variables():
                if x not in seen:
                    seen.append(x)
        return tuple(seen)

    def __eq__(self, other):
        return (isinstance(other, Term) and self.var == other.var
                and self.op == other.op and self.args == other.args)

    def __hash__(self):
        return self._hash

    def show(self, names: Optional[Sequence[str]] = None) -> str:
        if self.var is not None:
            return names[self.var] if names else f"x{self.var}"
        if not self.args:
            return self.op
        inner = ", ".join(a.show(names) for a in self.args)
        return f"{self.op}({inner})"

    def __repr__(self):
        return self.show()


_INFIX = {"meet": " /\\ ", "join": " \\/ ", "mul": "*", "imp": " -> "}


def show_term(term: Term, names: Sequence[str] = ()) -> str:
    """Infix rendering with the DSL tokens; unary operations print as ~."""
    if term.var is not None:
        return names[term.var] if term.var < len(names) else f"x{term.var}"
    if not term.args:
        return term.op
    if len(term.args) == 1:
        inner = show_term(term.args[0], names)
        if term.args[0].args and len(term.args[0].args) > 1:
            inner = f"({inner})"
        return f"~{inner}"
    parts = []
    for a in term.args:
        s = show_term(a, names)
        if a.args and len(a.args) > 1:
            s = f"({s})"
        parts.append(s)
    return _INFIX.get(term.op, f" {term.op} ").join(parts)


# ---------------------------------------------------------------------------
# finite algebras


class FiniteAlgebra:
    """Operation tables over the universe {0..size-1}."""

    __slots__ = ("signature", "size", "tables", "label", "element_names", "_hash")

    def __init__(self, signature: Signature, size: int,
                 tables: Dict[str, Sequence[int]], label: str = "",
                 element_names: Optional[Sequence[str]] = None):
        if size < 1:
            raise ElementOutOfRange("algebras must have at least one element")
        self.signature = signature
        self.size = size
        fixed: Dict[str, Tuple[int, ...]] = {}
        for sym, arity in signature.operations:
            if sym not in tables:
                raise SignatureMismatch(f"missing table for {sym!r}")
            table = tuple(tables[sym])
            if len(table) != size ** arity:
                raise SignatureMismatch(
                    f"table for {sym!r} has {len(table)} entries, expected {size ** arity}")
            if any(not (0 <= v < size) for v in table):
                raise ElementOutOfRange(f"table for {sym!r} has an entry out of range")
            fixed[sym] = table
        self.tables = fixed
        self.label = label
        if element_names is not None:
            element_names = tuple(element_names)
            if len(element_names) != size:
                raise ElementOutOfRange("element_names length must equal size")
        self.element_names = element_names
        self._hash = hash((signature.operations, size,
                           tuple(sorted(self.tables.items()))))

    def apply(self, sym: str, *args: int) -> int:
        table = self.tables[sym]
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return table[idx]

    def elements(self) -> range:
        return range(self.size)

    def name_of(self, e: int) -> str:
        if self.element_names:
            return self.element_names[e]
        return str(e)

    def is_trivial(self) -> bool:
        return self.size == 1

    def same_signature(self, other: "FiniteAlgebra") -> bool:
        return self.signature.same_operations(other.signature)

    def __eq__(self, other):
        return (isinstance(other, FiniteAlgebra)
                and self.signature.operations == other.signature.operations
                and self.size == other.size and self.tables == other.tables)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        label = self.label or "algebra"
        return f"<{label}: {self.size} elements, signature {self.signature.name}>"


def trivial_algebra(signature: Signature, label: str = "trivial") -> FiniteAlgebra:
    tables = {sym: [0] * (1 ** k) for sym, k in signature.operations}
    return FiniteAlgebra(signature, 1, tables, label=label)


# ---------------------------------------------------------------------------
# term evaluation


def eval_term(algebra: FiniteAlgebra, term: Term, assignment) -> int:
    """Value of `term` under `assignment` (mapping var index -> element)."""
    if term.var is not None:
        try:
            value = assignment[term.var]
        except (KeyError, IndexError):
            raise UnassignedVariable(f"variable x{term.var} unassigned")
        if not (0 <= value < algebra.size):
            raise ElementOutOfRange(f"assignment maps x{term.var} out of range")
        return value
    arity = algebra.signature.arity(term.op)
    if arity != len(term.args):
        raise SignatureMismatch(f"{term.op!r} applied to {len(term.args)} arguments")
    args = [eval_term(algebra, a, assignment) for a in term.args]
    return algebra.apply(term.op, *args)


# ---------------------------------------------------------------------------
# subalgebras


def generate_subalgebra(algebra: FiniteAlgebra, seed) -> Tuple[int, ...]:
    """Least subuniverse containing `seed` and all constants, sorted."""
    for e in seed:
        if not (0 <= e < algebra.size):
            raise ElementOutOfRange(f"element {e} outside the universe")
    current = set(seed)
    for sym, arity in algebra.signature.operations:
        if arity == 0:
            current.add(algebra.tables[sym][0])
    frontier = sorted(current)
    while frontier:
        fresh = []
        members = sorted(current)
        for sym, arity in algebra.signature.operations:
            if arity == 0:
                continue
            table = algebra.tables[sym]
            n = algebra.size
            for args in iproduct(members, repeat=arity):
                if not any(a in frontier for a in args):
                    continue
                idx = 0
                for a in args:
                    idx = idx * n + a
                value = table[idx]
                if value not in current:
                    current.add(value)
                    fresh.append(value)
        frontier = fresh
    return tuple(sorted(current))


def subalgebra_on(algebra: FiniteAlgebra, universe: Sequence[int],
                  label: str = "") -> Tuple[FiniteAlgebra, Dict[int, int]]:
    """Restrict to a subuniverse; returns the algebra plus old->new indexing."""
    universe = tuple(sorted(universe))
    index = {e: i for i, e in enumerate(universe)}
    tables = {}
    for sym, arity in algebra.signature.operations:
        entries = []
        for args in iproduct(universe, repeat=arity):
            value = algebra.apply(sym, *args)
            if value not in index:
                raise ElementOutOfRange(f"{universe} not closed under {sym!r}")
            entries.append(index[value])
        tables[sym] = entries
    names = None
    if algebra.element_names:
        names = [algebra.element_names[e] for e in universe]
    sub = FiniteAlgebra(algebra.signature, len(universe), tables,
                        label=label or f"{algebra.label}-sub", element_names=names)
    return sub, index


def subuniverses(algebra: FiniteAlgebra, limit: Optional[int] = None) -> List[Tuple[int, ...]]:
    """All nonempty subuniverses, smallest first, deterministic order."""
    base = generate_subalgebra(algebra, ())
    seeds = [base] if base else [generate_subalgebra(algebra, (e,))
                                 for e in algebra.elements()]
    seen = set()
    queue: List[Tuple[int, ...]] = []
    for s in seeds:
        if s and s not in seen:
            seen.add(s)
            queue.append(s)
    out: List[Tuple[int, ...]] = []
    while queue:
        queue.sort(key=lambda u: (len(u), u))
        current = queue.pop(0)
        out.append(current)
        if limit is not None and len(out) >= limit:
            break
        inside = set(current)
        for e in algebra.elements():
            if e in inside:
                continue
            bigger = generate_subalgebra(algebra, current + (e,))
            if bigger not in seen:
                seen.add(bigger)
                queue.append(bigger)
    return out


# ---------------------------------------------------------------------------
# homomorphisms


class Homomorphism:
    """A table-checked homomorphism between algebras of one signature."""

    __slots__ = ("source", "target", "map")

    def __init__(self, source: FiniteAlgebra, target: FiniteAlgebra,
                 mapping: Sequence[int], check: bool = True):
        if not source.same_signature(target):
            raise SignatureMismatch("source/target signatures differ")
        mapping = tuple(mapping)
        if len(mapping) != source.size:
            raise ElementOutOfRange("map must be total on the source universe")
        if any(not (0 <= v < target.size) for v in mapping):
            raise ElementOutOfRange("map hits elements outside the target")
        if check:
            for sym, arity in source.signature.operations:
                for args in iproduct(range(source.size), repeat=arity):
                    image_args = tuple(mapping[a] for a in args)
                    if mapping[source.apply(sym, *args)] != target.apply(sym, *image_args):
                        raise SignatureMismatch(
                            f"map is not a homomorphism at {sym}{args}")
        self.source = source
        self.target = target
        self.map = mapping

    def __call__(self, e: int) -> int:
        return self.map[e]

    def is_injective(self) -> bool:
        return len(set(self.map)) == self.source.size

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.size

    def compose(self, then: "Homomorphism") -> "Homomorphism":
        """self followed by `then`."""
        if then.source is not self.target and not then.source == self.target:
            raise SignatureMismatch("composition targets do not line up")
        return Homomorphism(self.source, then.target,
                            tuple(then.map[v] for v in self.map), check=False)

    def kernel(self) -> "Congruence":
        classes: Dict[int, List[int]] = {}
        for e, v in enumerate(self.map):
            classes.setdefault(v, []).append(e)
        return congruence_from_classes(self.source, classes.values())

    def image(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.map)))

    def image_subalgebra(self) -> FiniteAlgebra:
        sub, _ = subalgebra_on(self.target, self.image(),
                               label=f"im({self.source.label})")
        return sub

    def __eq__(self, other):
        return (isinstance(other, Homomorphism) and self.map == other.map
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"<hom {self.source.label or '?'} -> {self.target.label or '?'}: {self.map}>"


def identity_homomorphism(algebra: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(algebra, algebra, tuple(algebra.elements()), check=False)


# ---------------------------------------------------------------------------
# congruences


class Congruence:
    """Partition of the universe, compatibility-checked at construction.

    `blocks` maps each element to its block id; ids are numbered by the least
    member of each block, in ascending order.
    """

    __slots__ = ("algebra", "blocks", "block_count")

    def __init__(self, algebra: FiniteAlgebra, blocks: Sequence[int],
                 check: bool = True):
        blocks = _normalize_blocks(blocks)
        if len(blocks) != algebra.size:
            raise ElementOutOfRange("block function must be total")
        self.algebra = algebra
        self.blocks = blocks
        self.block_count = max(blocks) + 1 if blocks else 0
        if check and not _compatible(algebra, blocks):
            raise SignatureMismatch("partition is not compatible with the operations")

    def related(self, a: int, b: int) -> bool:
        return self.blocks[a] == self.blocks[b]

    def classes(self) -> List[Tuple[int, ...]]:
        out: List[List[int]] = [[] for _ in range(self.block_count)]
        for e, b in enumerate(self.blocks):
            out[b].append(e)
        return [tuple(c) for c in out]

    def is_identity(self) -> bool:
        return self.block_count == self.algebra.size

    def is_total(self) -> bool:
        return self.block_count == 1

    def meet(self, other: "Congruence") -> "Congruence":
        keys = {}
        joined = []
        for a, b in zip(self.blocks, other.blocks):
            joined.append(keys.setdefault((a, b), len(keys)))
        return Congruence(self.algebra, joined, check=False)

    def join(self, other: "Congruence") -> "Congruence":
        pairs = []
        for cls in other.classes():
            pairs.extend((cls[0], e) for e in cls[1:])
        return congruence_generated(self.algebra, pairs, base=self)

    def leq(self, other: "Congruence") -> bool:
        """self refines other (self <= other as congruences)."""
        seen = {}
        for a, b in zip(self.blocks, other.blocks):
            if seen.setdefault(a, b) != b:
                return False
        return True

    def __eq__(self, other):
        return (isinstance(other, Congruence) and self.blocks == other.blocks
                and self.algebra == other.algebra)

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"<congruence {self.blocks}>"


def _normalize_blocks(blocks: Sequence[int]) -> Tuple[int, ...]:
    relabel: Dict[int, int] = {}
    out = []
    for b in blocks:
        out.append(relabel.setdefault(b, len(relabel)))
    return tuple(out)


def _compatible(algebra: FiniteAlgebra, blocks: Sequence[int]) -> bool:
    # single-coordinate substitution suffices (chain coordinates by transitivity)
    classes: Dict[int, List[int]] = {}
    for e, b in enumerate(blocks):
        classes.setdefault(b, []).append(e)
    n = algebra.size
    for sym, arity in algebra.signature.operations:
        if arity == 0:
            continue
        for args in iproduct(range(n), repeat=arity):
            value_block = blocks[algebra.apply(sym, *args)]
            for pos in range(arity):
                for alt in classes[blocks[args[pos]]]:
                    if alt == args[pos]:
                        continue
                    changed = args[:pos] + (alt,) + args[pos + 1:]
                    if blocks[algebra.apply(sym, *changed)] != value_block:
                        return False
    return True


def congruence_from_classes(algebra: FiniteAlgebra, classes) -> Congruence:
    blocks = [0] * algebra.size
    for i, cls in enumerate(classes):
        for e in cls:
            blocks[e] = i
    return Congruence(algebra, blocks, check=False)


def identity_congruence(algebra: FiniteAlgebra) -> Congruence:
    return Congruence(algebra, range(algebra.size), check=False)


def total_congruence(algebra: FiniteAlgebra) -> Congruence:
    return Congruence(algebra, [0] * algebra.size, check=False)


def congruence_generated(algebra: FiniteAlgebra, pairs,
                         base: Optional[Congruence] = None) -> Congruence:
    """Mal'cev closure: union-find seeded with `pairs`, operation closure to
    fixpoint."""
    n = algebra.size
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> bool:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        parent[rb] = ra
        return True

    if base is not None:
        for cls in base.classes():
            for e in cls[1:]:
                union(cls[0], e)
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise ElementOutOfRange(f"pair ({a}, {b}) outside the universe")
        union(a, b)

    binary_like = [(sym, arity) for sym, arity in algebra.signature.operations
                   if arity >= 1]
    changed = True
    while changed:
        changed = False
        for sym, arity in binary_like:
            table = algebra.tables[sym]
            rep: Dict[Tuple[int, ...], int] = {}
            if arity == 1:
                for a in range(n):
                    key = (find(a),)
                    value = find(table[a])
                    prev = rep.setdefault(key, value)
                    if prev != value and union(prev, value):
                        changed = True
            else:
                for idx, value in enumerate(table):
                    args = []
                    rest = idx
                    for _ in range(arity):
                        rest, digit = divmod(rest, n)
                        args.append(digit)
                    key = tuple(find(d) for d in reversed(args))
                    value = find(value)
                    prev = rep.setdefault(key, value)
                    if prev != value and union(prev, value):
                        changed = True
    return Congruence(algebra, [find(e) for e in range(n)], check=False)


from functools import lru_cache


@lru_cache(maxsize=512)
def congruence_lattice(algebra: FiniteAlgebra,
                       caps: Caps = DEFAULT_CAPS) -> List[Congruence]:
    """All congruences: join closure of the principal ones.

    Sorted by (number of blocks, lexicographic block function), so the total
    congruence comes first and the identity last.  Cached; callers must not
    mutate the returned list.
    """
    n = algebra.size
    found: Dict[Tuple[int, ...], Congruence] = {}

    def add(c: Congruence) -> bool:
        if c.blocks in found:
            return False
        if len(found) >= caps.congruence_count:
            raise SizeCapExceeded("congruence count", caps.congruence_count,
                                  len(found) + 1)
        found[c.blocks] = c
        return True

    add(identity_congruence(algebra))
    principals = []
    for a in range(n):
        for b in range(a + 1, n):
            c = congruence_generated(algebra, [(a, b)])
            if add(c):
                principals.append(c)

    frontier = list(principals)
    while frontier:
        fresh = []
        current = list(found.values())
        for new in frontier:
            for old in current:
                if new.leq(old) or old.leq(new):
                    continue
                joined = new.join(old)
                if add(joined):
                    fresh.append(joined)
        frontier = fresh
    return sorted(found.values(), key=lambda c: (c.block_count, c.blocks))


# ---------------------------------------------------------------------------
# quotients and products


def quotient(algebra: FiniteAlgebra, theta: Congruence) -> Tuple[FiniteAlgebra, Homomorphism]:
    """Block algebra plus the natural surjection; blocks numbered by least
    member."""
    if theta.algebra != algebra:
        raise SignatureMismatch("congruence belongs to a different algebra")
    classes = theta.classes()
    reps = [cls[0] for cls in classes]
    tables = {}
    for sym, arity in algebra.signature.operations:
        entries = []
        for args in iproduct(reps, repeat=arity):
            entries.append(theta.blocks[algebra.apply(sym, *args)])
        tables[sym] = entries
    names = None
    if algebra.element_names:
        names = ["|".join(algebra.element_names[e] for e in cls) for cls in classes]
    block_algebra = FiniteAlgebra(algebra.signature, len(classes), tables,
                                  label=f"{algebra.label}/theta", element_names=names)
    surjection = Homomorphism(algebra, block_algebra, theta.blocks, check=False)
    return block_algebra, surjection


def direct_product(factors: Sequence[FiniteAlgebra],
                   caps: Caps = DEFAULT_CAPS) -> FiniteAlgebra:
    """Componentwise product; element encoding is the mixed-radix index with
    the last factor least significant."""
    if not factors:
        raise SignatureMismatch("empty product not supported; pass the trivial algebra")
    first = factors[0]
    for other in factors[1:]:
        if not first.same_signature(other):
            raise SignatureMismatch("product factors must share a signature")
    size = 1
    for f in factors:
        size *= f.size
        if size > caps.product_size:
            raise SizeCapExceeded("product size", caps.product_size, size)
    sizes = [f.size for f in factors]
    tables = {}
    for sym, arity in first.signature.operations:
        entries = []
        for args in iproduct(range(size), repeat=arity):
            coords = [product_decode(a, sizes) for a in args]
            value = [factors[i].apply(sym, *(c[i] for c in coords))
                     for i in range(len(factors))]
            entries.append(product_encode(value, sizes))
        tables[sym] = entries
    label = " x ".join(f.label or "?" for f in factors)
    names = None
    if all(f.element_names for f in factors):
        names = []
        for e in range(size):
            coords = product_decode(e, sizes)
            names.append("(" + ",".join(factors[i].element_names[c]
                                        for i, c in enumerate(coords)) + ")")
    return FiniteAlgebra(first.signature, size, tables, label=label,
                         element_names=names)


def product_decode(index: int, sizes: Sequence[int]) -> Tuple[int, ...]:
    out = []
    for s in reversed(sizes):
        index, digit = divmod(index, s)
        out.append(digit)
    return tuple(reversed(out))


def product_encode(coords: Sequence[int], sizes: Sequence[int]) -> int:
    index = 0
    for c, s in zip(coords, sizes):
        index = index * s + c
    return index


def projection(factors: Sequence[FiniteAlgebra], prod: FiniteAlgebra,
               i: int) -> Homomorphism:
    sizes = [f.size for f in factors]
    mapping = [product_decode(e, sizes)[i] for e in range(prod.size)]
    return Homomorphism(prod, factors[i], mapping, check=False)


# ---------------------------------------------------------------------------
# subdirect structure


@dataclass(frozen=True)
class SIStatus:
    kind: str                      # trivial | not_si | si | rsi
    monolith: Optional[Congruence] = None

    def is_irreducible(self) -> bool:
        return self.kind in ("si", "rsi")


def si_status(algebra: FiniteAlgebra, relative_to: Optional[Sequence[FiniteAlgebra]] = None,
              caps: Caps = DEFAULT_CAPS) -> SIStatus:
    """Absolute or relative subdirect irreducibility.

    The relative case keeps only congruences whose quotient lies in ISP of
    the given generators, and requires the algebra itself to be a member.
    """
    if algebra.is_trivial():
        return SIStatus("trivial")
    lattice = congruence_lattice(algebra, caps)
    if relative_to is not None:
        from .errors import NotInQuasivariety
        ok, _ = in_isp(algebra, relative_to, caps=caps)
        if not ok:
            raise NotInQuasivariety(
                f"{algebra.label or 'algebra'} is not in ISP of the given generators")
        kept = []
        for theta in lattice:
            block_algebra, _ = quotient(algebra, theta)
            member, _ = in_isp(block_algebra, relative_to, caps=caps)
            if member:
                kept.append(theta)
        lattice = kept
    nontrivial = [c for c in lattice if not c.is_identity()]
    minimal = [c for c in nontrivial
               if not any(o.leq(c) and o != c for o in nontrivial)]
    if len(minimal) == 1:
        return SIStatus("rsi" if relative_to is not None else "si", minimal[0])
    return SIStatus("not_si")


def in_isp(algebra: FiniteAlgebra, generators: Sequence[FiniteAlgebra],
           caps: Caps = DEFAULT_CAPS) -> Tuple[bool, List[Homomorphism]]:
    """Membership in ISP(generators) for a finite algebra, by separating the
    points of `algebra` with homomorphisms into the generators."""
    from .homs import iter_homomorphisms

    n = algebra.size
    if n == 1:
        return True, []
    blocks = [0] * n
    witnesses: List[Homomorphism] = []
    count = 1
    for target in generators:
        if not algebra.same_signature(target):
            raise SignatureMismatch("in_isp requires a common signature")
        for hom in iter_homomorphisms(algebra, target, caps=caps):
            keys: Dict[Tuple[int, int], int] = {}
            refined = []
            for e in range(n):
                refined.append(keys.setdefault((blocks[e], hom.map[e]), len(keys)))
            if len(keys) > count:
                blocks = refined
                count = len(keys)
                witnesses.append(hom)
                if count == n:
                    return True, witnesses
    return False, []


def subdirect_decomposition(algebra: FiniteAlgebra, caps: Caps = DEFAULT_CAPS
                            ) -> List[Tuple[Congruence, FiniteAlgebra]]:
    """Meet-irreducible congruences with meet the identity, each with its
    subdirectly irreducible quotient; only inclusion-minimal ones are kept."""
    if algebra.is_trivial():
        raise TrivialAlgebra("the trivial algebra has no subdirect decomposition")
    lattice = congruence_lattice(algebra, caps)
    irreducible = []
    for theta in lattice:
        strictly_above = [c for c in lattice if theta.leq(c) and c != theta]
        if not strictly_above:
            continue  # the total congruence
        least = [c for c in strictly_above
                 if all(c.leq(o) for o in strictly_above)]
        if least:
            irreducible.append(theta)
    minimal = [c for c in irreducible
               if not any(o.leq(c) and o != c for o in irreducible)]
    meet = minimal[0]
    for c in minimal[1:]:
        meet = meet.meet(c)
    assert meet.is_identity(), "meet-irreducibles must separate the algebra"
    return [(theta, quotient(algebra, theta)[0]) for theta in minimal]
