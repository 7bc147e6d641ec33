"""Lattice- and residuated-chain-specific predicates: projectivity condition
(W), semidistributivity, flatness, prime-filter unifiers, chain identities.
"""

from __future__ import annotations

from typing import Dict, Optional, Tuple

from .caps import DEFAULT_CAPS, Caps
from .catalog import builtin
from .clauses import parse_clause, holds_in
from .core import (
    FiniteAlgebra,
    Homomorphism,
    Term,
    congruence_lattice,
    eval_term,
    quotient,
    subalgebra_on,
    subuniverses,
)
from .errors import NotAChain, SignatureMismatch

WHITMAN = (r"x /\ y <= u \/ v => "
           r"x <= u \/ v | y <= u \/ v | x /\ y <= u | x /\ y <= v")
SD_MEET = r"x /\ y = x /\ z => x /\ y = x /\ (y \/ z)"
SD_JOIN = r"x \/ y = x \/ z => x \/ y = x \/ (y /\ z)"


def _require_lattice_ops(algebra: FiniteAlgebra):
    symbols = algebra.signature.symbols
    if "meet" not in symbols or "join" not in symbols:
        raise SignatureMismatch("a lattice signature (meet/join) is required")


def check_whitman(algebra: FiniteAlgebra, caps: Caps = DEFAULT_CAPS
                  ) -> Tuple[bool, Optional[Dict[str, str]]]:
    """The four-variable projectivity condition for lattices; on failure the
    offending quadruple, with element names."""
    _require_lattice_ops(algebra)
    clause = parse_clause(WHITMAN, algebra.signature)
    ok, assignment = holds_in(algebra, clause, caps)
    if ok:
        return True, None
    return False, {v: algebra.name_of(e) for v, e in assignment.items()}


def check_semidistributive(algebra: FiniteAlgebra, side: str = "both",
                           caps: Caps = DEFAULT_CAPS
                           ) -> Tuple[bool, Optional[Dict[str, str]]]:
    _require_lattice_ops(algebra)
    texts = {"meet": (SD_MEET,), "join": (SD_JOIN,), "both": (SD_MEET, SD_JOIN)}
    if side not in texts:
        raise ValueError(f"side must be meet/join/both, not {side!r}")
    for text in texts[side]:
        clause = parse_clause(text, algebra.signature)
        ok, assignment = holds_in(algebra, clause, caps)
        if not ok:
            return False, {v: algebra.name_of(e) for v, e in assignment.items()}
    return True, None


def is_flat(algebra: FiniteAlgebra, caps: Caps = DEFAULT_CAPS
            ) -> Tuple[bool, Optional[FiniteAlgebra]]:
    """No simple algebra other than the two-element bounded lattice among the
    homomorphic images of subalgebras; returns an offender on failure."""
    _require_lattice_ops(algebra)
    if "0" not in algebra.signature.symbols or "1" not in algebra.signature.symbols:
        raise SignatureMismatch("flatness is defined for bounded lattices")
    for universe in subuniverses(algebra):
        sub, _ = subalgebra_on(algebra, universe)
        for theta in congruence_lattice(sub, caps):
            block_algebra, _ = quotient(sub, theta)
            if block_algebra.size <= 2:
                continue
            if len(congruence_lattice(block_algebra, caps)) == 2:
                return False, block_algebra
    return True, None


def prime_filter_unifier(algebra: FiniteAlgebra, caps: Caps = DEFAULT_CAPS
                         ) -> Optional[Homomorphism]:
    """Indicator homomorphism of a prime filter onto the two-element bounded
    lattice; None when no prime filter exists.

    Every filter of a finite lattice is principal, so the maximal proper
    filters are those of the atoms, and a principal filter is prime exactly
    when its generator is join-prime."""
    _require_lattice_ops(algebra)
    symbols = algebra.signature.symbols
    if "0" not in symbols or "1" not in symbols:
        raise SignatureMismatch("prime-filter unifiers target bounded lattices")
    if algebra.is_trivial():
        return None
    two_b = builtin("two_b")
    n = algebra.size
    meet = lambda a, b: algebra.apply("meet", a, b)
    join = lambda a, b: algebra.apply("join", a, b)
    bottom = algebra.tables["0"][0]
    leq = lambda a, b: meet(a, b) == a

    def join_prime(g: int) -> bool:
        for a in range(n):
            for b in range(n):
                if leq(g, join(a, b)) and not leq(g, a) and not leq(g, b):
                    return False
        return True

    atoms = [e for e in range(n) if e != bottom
             and all(x == bottom or x == e or not leq(x, e) for x in range(n))]
    candidates = atoms + [e for e in range(n) if e != bottom and e not in atoms]
    for g in candidates:
        if join_prime(g):
            mapping = [1 if leq(g, e) else 0 for e in range(n)]
            return Homomorphism(algebra, two_b, mapping, check=True)
    return None


# ---------------------------------------------------------------------------
# residuated-chain identities


def _fl_terms():
    x, y = Term.v(0), Term.v(1)
    zero = Term.app("0")
    neg = lambda t: Term.app("imp", t, zero)
    mul = lambda s, t: Term.app("mul", s, t)
    plus = lambda s, t: neg(mul(neg(s), neg(t)))
    return x, y, neg, mul, plus


IDENTITY_NAMES = ("DL", "pseudocomplemented", "kleene",
                  "representability-witness", "perfect-chain")


def validate_identity(algebra: FiniteAlgebra, name: str,
                      caps: Caps = DEFAULT_CAPS
                      ) -> Tuple[bool, Optional[Dict[str, str]]]:
    """Named identity checks for residuated chains; `perfect-chain` is the
    no-small-negation scan (no element of finite order above its negation)."""
    symbols = algebra.signature.symbols
    if name in ("DL", "pseudocomplemented", "kleene", "representability-witness"):
        needed = {"DL": ("mul", "imp", "0"),
                  "pseudocomplemented": ("meet", "imp", "0"),
                  "kleene": ("meet", "join", "imp", "0"),
                  "representability-witness": ("imp", "join", "1")}[name]
        if any(op not in symbols for op in needed):
            raise SignatureMismatch(f"identity {name!r} needs operations {needed}")
        x, y, neg, mul, plus = _fl_terms()
        if name == "DL":
            lhs = mul(plus(x, x), plus(x, x))
            rhs = plus(mul(x, x), mul(x, x))
            eqs = [(lhs, rhs)]
            nvars = 1
        elif name == "pseudocomplemented":
            eqs = [(Term.app("meet", x, neg(x)), Term.app("0"))]
            nvars = 1
        elif name == "kleene":
            lo = Term.app("meet", x, neg(x))
            hi = Term.app("join", y, neg(y))
            eqs = [(Term.app("meet", lo, hi), lo)]
            nvars = 2
        else:
            lhs = Term.app("join", Term.app("imp", x, y), Term.app("imp", y, x))
            eqs = [(lhs, Term.app("1"))]
            nvars = 2
        from itertools import product as iproduct
        for asgn in iproduct(range(algebra.size), repeat=nvars):
            for lhs, rhs in eqs:
                if eval_term(algebra, lhs, asgn) != eval_term(algebra, rhs, asgn):
                    names = ("x", "y")
                    return False, {names[i]: algebra.name_of(asgn[i])
                                   for i in range(nvars)}
        return True, None

    if name == "perfect-chain":
        if any(op not in symbols for op in ("mul", "imp", "meet", "0")):
            raise SignatureMismatch("the perfect-chain test needs a residuated chain")
        meet = lambda a, b: algebra.apply("meet", a, b)
        n = algebra.size
        for a in range(n):
            for b in range(n):
                if meet(a, b) not in (a, b):
                    raise NotAChain("the perfect-chain test requires a chain")
        zero = algebra.tables["0"][0]
        neg = lambda a: algebra.apply("imp", a, zero)

        def finite_order(a: int) -> bool:
            power = a
            for _ in range(n):
                if power == zero:
                    return True
                power = algebra.apply("mul", power, a)
            return power == zero

        for a in range(n):
            if finite_order(a) and meet(a, neg(a)) == neg(a):
                return False, {"x": algebra.name_of(a)}
        return True, None

    raise ValueError(f"unknown identity {name!r}; choose from {IDENTITY_NAMES}")
