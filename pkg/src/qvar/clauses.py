"""Clause syntax and semantics: the ASCII DSL, validity, admissibility,
activity, trivializing premises, blocking quasiequations.

DSL tokens bind to operation symbols through the ambient signature:
/\\ -> meet,  \\/ -> join,  * -> mul,  -> -> imp,  ~ -> the unique unary
operation,  0/1 -> the constants of those names.  `s <= t` is sugar for
s /\\ t = s.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .caps import DEFAULT_CAPS, Caps
from .core import (
    FiniteAlgebra,
    Signature,
    Term,
    eval_term,
    direct_product,
    product_encode,
)
from .errors import NotRSI, ParseError, SignatureMismatch, SizeCapExceeded
from .free import (
    FreeAlgebra,
    Presentation,
    free_algebra,
    presentation_congruence,
    satisfying_columns,
    smallest_free,
    unifiable_set,
    var_name,
)


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def pair(self) -> Tuple[Term, Term]:
        return (self.lhs, self.rhs)


@dataclass(frozen=True)
class Clause:
    premises: Tuple[Equation, ...]
    conclusions: Tuple[Equation, ...]
    var_names: Tuple[str, ...]

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    def is_quasiequation(self) -> bool:
        return len(self.conclusions) == 1

    def is_negative(self) -> bool:
        return not self.conclusions

    def show(self, signature: Optional[Signature] = None) -> str:
        lhs = ", ".join(show_equation(e, self.var_names) for e in self.premises)
        rhs = " | ".join(show_equation(e, self.var_names) for e in self.conclusions)
        return f"{lhs} => {rhs}".strip()


# ---------------------------------------------------------------------------
# DSL


_TOKEN = re.compile(
    r"\s*(?:(?P<op>/\\|\\/|->|<=|=>|[=~*,|()])|(?P<const>[01])|"
    r"(?P<name>[A-Za-z_][A-Za-z0-9_']*))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        pos = m.end()
        if m.group("op"):
            out.append(("op", m.group("op"), m.start("op")))
        elif m.group("const"):
            out.append(("const", m.group("const"), m.start("const")))
        else:
            out.append(("name", m.group("name"), m.start("name")))
    out.append(("end", "", len(text)))
    return out


def _unary_symbol(signature: Signature) -> str:
    unary = [s for s, k in signature.operations if k == 1]
    if len(unary) != 1:
        raise ParseError("the signature has no unique unary operation for '~'", 0)
    return unary[0]


class _Parser:
    def __init__(self, text: str, signature: Signature):
        self.tokens = _tokenize(text)
        self.i = 0
        self.signature = signature
        self.vars: List[str] = []
        self.strict_vars = False

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if kind and tok[0] != kind or value and tok[1] != value:
            raise ParseError(f"expected {value or kind}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def bind(self, dsl: str) -> str:
        table = {"/\\": "meet", "\\/": "join", "*": "mul", "->": "imp"}
        sym = table[dsl] if dsl in table else _unary_symbol(self.signature)
        if sym not in self.signature.symbols:
            raise ParseError(f"operation {dsl!r} not in signature "
                             f"{self.signature.name}", self.peek()[2])
        return sym

    def clause(self) -> Clause:
        premises = []
        if self.peek()[1] != "=>":
            premises.append(self.equation())
            while self.peek()[1] == ",":
                self.take()
                premises.append(self.equation())
        self.take("op", "=>")
        conclusions = []
        if self.peek()[0] != "end":
            conclusions.append(self.equation())
            while self.peek()[1] == "|":
                self.take()
                conclusions.append(self.equation())
        self.take("end")
        return Clause(tuple(premises), tuple(conclusions), tuple(self.vars))

    def equation(self) -> Equation:
        lhs = self.term()
        tok = self.take("op")
        if tok[1] == "=":
            return Equation(lhs, self.term())
        if tok[1] == "<=":
            rhs = self.term()
            return Equation(Term.app(self.bind("/\\"), lhs, rhs), lhs)
        raise ParseError(f"expected '=' or '<=', found {tok[1]!r}", tok[2])

    def term(self) -> Term:
        return self.imp()

    def imp(self) -> Term:
        left = self.disjunct()
        if self.peek()[1] == "->":
            self.take()
            return Term.app(self.bind("->"), left, self.imp())
        return left

    def disjunct(self) -> Term:
        left = self.conjunct()
        while self.peek()[1] == "\\/":
            self.take()
            left = Term.app(self.bind("\\/"), left, self.conjunct())
        return left

    def conjunct(self) -> Term:
        left = self.factor()
        while self.peek()[1] == "/\\":
            self.take()
            left = Term.app(self.bind("/\\"), left, self.factor())
        return left

    def factor(self) -> Term:
        left = self.unary()
        while self.peek()[1] == "*":
            self.take()
            left = Term.app(self.bind("*"), left, self.unary())
        return left

    def unary(self) -> Term:
        tok = self.peek()
        if tok[1] == "~":
            self.take()
            return Term.app(self.bind("~"), self.unary())
        return self.atom()

    def atom(self) -> Term:
        kind, value, pos = self.take()
        if kind == "const":
            if value not in self.signature.symbols:
                raise ParseError(f"constant {value!r} not in signature", pos)
            return Term.app(value)
        if kind == "name":
            if value not in self.vars:
                if self.strict_vars:
                    raise ParseError(f"undeclared variable {value!r}", pos)
                self.vars.append(value)
            return Term.v(self.vars.index(value))
        if value == "(":
            inner = self.term()
            self.take("op", ")")
            return inner
        raise ParseError(f"unexpected token {value!r}", pos)


def parse_clause(text: str, signature: Signature) -> Clause:
    """Parse the clause DSL against a signature; variables are interned in
    first-occurrence order."""
    return _Parser(text, signature).clause()


def parse_equation(text: str, signature: Signature,
                   variables: Optional[Sequence[str]] = None
                   ) -> Tuple[Equation, Tuple[str, ...]]:
    """A single `term = term` (or `term <= term`); with `variables` given,
    the variable order is fixed and unknown names are rejected."""
    parser = _Parser(text, signature)
    if variables is not None:
        parser.vars = list(variables)
        parser.strict_vars = True
    eq = parser.equation()
    parser.take("end")
    return eq, tuple(parser.vars)


from .core import show_term


def show_equation(eq: Equation, names: Sequence[str]) -> str:
    return f"{show_term(eq.lhs, names)} = {show_term(eq.rhs, names)}"


# ---------------------------------------------------------------------------
# semantics


def holds_in(algebra: FiniteAlgebra, clause: Clause,
             caps: Caps = DEFAULT_CAPS) -> Tuple[bool, Optional[Dict[str, int]]]:
    """Exhaustive assignment scan; on failure, the lexicographically least
    failing assignment (by element index, variable order)."""
    n = algebra.size
    if n ** clause.nvars > caps.assignment_cap:
        raise SizeCapExceeded("assignment space", caps.assignment_cap,
                              n ** clause.nvars)
    for asgn in iproduct(range(n), repeat=clause.nvars):
        if not all(eval_term(algebra, e.lhs, asgn) == eval_term(algebra, e.rhs, asgn)
                   for e in clause.premises):
            continue
        if any(eval_term(algebra, e.lhs, asgn) == eval_term(algebra, e.rhs, asgn)
               for e in clause.conclusions):
            continue
        witness = {clause.var_names[i]: asgn[i] for i in range(clause.nvars)}
        return False, witness
    return True, None


@dataclass(frozen=True)
class ValidityResult:
    valid: bool
    collapsed: Optional[Equation] = None
    countermodel: Optional[FiniteAlgebra] = None
    assignment: Optional[Dict[str, int]] = None
    columns: Tuple[Tuple[int, Tuple[int, ...]], ...] = ()


def valid_in_q(generators: Sequence[FiniteAlgebra], clause: Clause,
               caps: Caps = DEFAULT_CAPS) -> ValidityResult:
    """Validity in Q(generators) via the finitely presented algebra on the
    premises: valid iff some conclusion collapses in F(X)/theta(premises).

    Negative clauses are never valid: the trivial algebra satisfies any
    premise set and refutes the empty disjunction."""
    generators = tuple(generators)
    if clause.is_negative():
        from .core import trivial_algebra
        triv = trivial_algebra(generators[0].signature)
        return ValidityResult(False, countermodel=triv,
                              assignment={v: 0 for v in clause.var_names})
    free = free_algebra(generators, clause.nvars, caps)
    theta = presentation_congruence(free, [e.pair() for e in clause.premises])
    gen_asgn = free.generator_elements
    for eq in clause.conclusions:
        lhs = eval_term(free.carrier, eq.lhs, gen_asgn)
        rhs = eval_term(free.carrier, eq.rhs, gen_asgn)
        if theta.blocks[lhs] == theta.blocks[rhs]:
            return ValidityResult(True, collapsed=eq)
    return _countermodel(generators, free, clause, caps)


def _countermodel(generators, free: FreeAlgebra, clause: Clause,
                  caps: Caps) -> ValidityResult:
    """Minimized refuting product: one satisfying column per conclusion,
    chosen to separate that conclusion's sides."""
    good = satisfying_columns(free, [e.pair() for e in clause.premises])
    chosen = []
    for eq in clause.conclusions:
        for c in good:
            alg_idx, asgn = free.columns[c]
            algebra = free.generators[alg_idx]
            if eval_term(algebra, eq.lhs, asgn) != eval_term(algebra, eq.rhs, asgn):
                if c not in chosen:
                    chosen.append(c)
                break
    columns = sorted((free.columns[c] for c in chosen),
                     key=lambda col: (col[0], tuple(-x for x in col[1])))
    factors = [free.generators[i] for i, _ in columns]
    model = direct_product(factors, caps)
    sizes = [f.size for f in factors]
    assignment = {}
    for j, name in enumerate(clause.var_names):
        assignment[name] = product_encode([asgn[j] for _, asgn in columns], sizes)
    return ValidityResult(False, countermodel=model, assignment=assignment,
                          columns=tuple(columns))


@dataclass(frozen=True)
class AdmissibilityVerdict:
    refuted: bool
    rank: Optional[int] = None
    witness: Optional[Dict[str, int]] = None
    bound: Optional[int] = None
    stabilized: bool = False

    def describe(self) -> str:
        if self.refuted:
            return f"RefutedCertified(rank {self.rank})"
        tag = " stabilized (heuristic)" if self.stabilized else ""
        return f"HoldsUpTo({self.bound}){tag}"


def admissible_in(generators: Sequence[FiniteAlgebra], clause: Clause,
                  bound: Optional[int] = None, stabilize: bool = False,
                  caps: Caps = DEFAULT_CAPS) -> AdmissibilityVerdict:
    """Check the clause in free algebras of rank #vars..bound.  A failure is
    a certified refutation (universal sentences descend to subalgebras of
    F(omega)); passing every rank is bounded confirmation only."""
    generators = tuple(generators)
    nvars = max(clause.nvars, 1)
    if bound is None:
        bound = nvars
    bound = max(bound, nvars)
    for rank in range(nvars, bound + 1):
        free = free_algebra(generators, rank, caps)
        ok, witness = holds_in(free.carrier, clause, caps)
        if not ok:
            named = {v: free.carrier.name_of(e) for v, e in witness.items()}
            return AdmissibilityVerdict(True, rank=rank, witness=named)
    stabilized = False
    if stabilize:
        from .core import in_isp
        low = free_algebra(generators, bound, caps)
        high = free_algebra(generators, bound + 1, caps)
        stabilized, _ = in_isp(high.carrier, [low.carrier], caps)
    return AdmissibilityVerdict(False, bound=bound, stabilized=stabilized)


def classify_activity(generators: Sequence[FiniteAlgebra], clause: Clause,
                      caps: Caps = DEFAULT_CAPS) -> Tuple[str, Optional[Dict[str, str]]]:
    """Active iff the premises are unifiable (some assignment into F_Q)."""
    generators = tuple(generators)
    unifier = unifiable_set([e.pair() for e in clause.premises],
                            clause.nvars, generators, caps)
    if unifier is None:
        return "passive", None
    free = smallest_free(generators, caps)
    named = {clause.var_names[i]: free.carrier.name_of(e)
             for i, e in unifier.items()}
    return "active", named


def is_trivializing(generators: Sequence[FiniteAlgebra],
                    premises: Sequence[Equation], nvars: int,
                    caps: Caps = DEFAULT_CAPS) -> bool:
    """Do the premises force x = y for fresh variables x, y in Q(K)?

    The quasiequation with a fresh conclusion is valid in an algebra iff the
    algebra is trivial or no assignment satisfies the premises, and
    quasiequations persist from K to Q(K); so a direct member scan decides
    it without building the free algebra on the enlarged variable set."""
    for algebra in generators:
        if algebra.is_trivial():
            continue
        n = algebra.size
        if n ** nvars > caps.assignment_cap:
            raise SizeCapExceeded("assignment space", caps.assignment_cap,
                                  n ** nvars)
        for asgn in iproduct(range(n), repeat=nvars):
            if all(eval_term(algebra, e.lhs, asgn) == eval_term(algebra, e.rhs, asgn)
                   for e in premises):
                return False
    return True


# ---------------------------------------------------------------------------
# blocking quasiequations


def diagram_presentation(algebra: FiniteAlgebra) -> Tuple[Tuple[int, ...], Tuple[Term, ...], List[Equation]]:
    """Generators, witness terms for every element, and the operation-table
    relations over one variable per generator."""
    from .homs import _plan_for

    plan = _plan_for(algebra)
    terms: Dict[int, Term] = {}
    for depth, steps in enumerate(plan.steps):
        for e, how in steps:
            if how[0] == "const":
                terms[e] = Term.app(how[1])
            elif how[0] == "gen":
                terms[e] = Term.v(how[1])
            else:
                sym, args = how
                terms[e] = Term.app(sym, *(terms[a] for a in args))
    relations = []
    for sym, arity in algebra.signature.operations:
        for args in iproduct(range(algebra.size), repeat=arity):
            value = algebra.apply(sym, *args)
            relations.append(Equation(Term.app(sym, *(terms[a] for a in args)),
                                      terms[value]))
    return plan.generators, tuple(terms[e] for e in range(algebra.size)), relations


def blocking_quasiequation(algebra: FiniteAlgebra,
                           generators: Sequence[FiniteAlgebra],
                           caps: Caps = DEFAULT_CAPS) -> Clause:
    """The quasiequation that fails in the given relative subdirectly
    irreducible algebra but holds in all its proper quotients inside Q(K):
    diagram premises, conclusion the relative monolith's generating pair."""
    from .core import in_isp, quotient, si_status

    generators = tuple(generators)
    status = si_status(algebra, relative_to=generators, caps=caps)
    if status.kind != "rsi":
        raise NotRSI(f"{algebra.label or 'algebra'} is not relative subdirectly "
                     f"irreducible over the given generators")
    gens, terms, relations = diagram_presentation(algebra)
    monolith = status.monolith
    pair = None
    for c in range(algebra.size):
        for d in range(c + 1, algebra.size):
            if monolith.related(c, d):
                pair = (c, d)
                break
        if pair:
            break
    conclusion = Equation(terms[pair[0]], terms[pair[1]])
    names = tuple(var_name(i) for i in range(len(gens)))
    clause = Clause(tuple(relations), (conclusion,), names)

    ok, _ = holds_in(algebra, clause, caps)
    assert not ok, "the blocking quasiequation must fail in its own algebra"
    from .core import congruence_lattice
    for theta in congruence_lattice(algebra, caps):
        if theta.is_identity():
            continue
        block_algebra, _ = quotient(algebra, theta)
        member, _ = in_isp(block_algebra, generators, caps=caps)
        if not member:
            continue
        ok, _ = holds_in(block_algebra, clause, caps)
        assert ok, "proper quotients inside Q(K) must satisfy the blocking clause"
    return clause
