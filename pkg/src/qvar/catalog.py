"""Built-in algebras.

Lattices are entered by their cover relations and elaborated into dense
meet/join tables; element names follow the figures they come from, so
witnesses in reports can be read against the diagrams.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .core import FiniteAlgebra, Signature
from .errors import UnknownKey

LAT = Signature("lattice", (("meet", 2), ("join", 2)))
BLAT = Signature("bounded-lattice", (("meet", 2), ("join", 2), ("0", 0), ("1", 0)))
DM = Signature("de-morgan", (("meet", 2), ("join", 2), ("neg", 1)))
BA = Signature("boolean", (("meet", 2), ("join", 2), ("neg", 1), ("0", 0), ("1", 0)))
ST = Signature("stone", (("meet", 2), ("join", 2), ("star", 1), ("0", 0), ("1", 0)))
FL = Signature("fl-chain", (("mul", 2), ("imp", 2), ("meet", 2), ("join", 2),
                            ("0", 0), ("1", 0)))

SIGNATURES = {s.name: s for s in (LAT, BLAT, DM, BA, ST, FL)}


def lattice_tables(names: Sequence[str], covers: Sequence[Tuple[str, str]]
                   ) -> Tuple[List[int], List[int]]:
    """Meet/join tables from a cover list (lower, upper); asserts lattice."""
    n = len(names)
    index = {name: i for i, name in enumerate(names)}
    leq = [[False] * n for _ in range(n)]
    for i in range(n):
        leq[i][i] = True
    for lo, hi in covers:
        leq[index[lo]][index[hi]] = True
    for k in range(n):  # transitive closure
        for i in range(n):
            if leq[i][k]:
                for j in range(n):
                    if leq[k][j]:
                        leq[i][j] = True
    meet, join = [], []
    for a in range(n):
        for b in range(n):
            lower = [c for c in range(n) if leq[c][a] and leq[c][b]]
            glb = [c for c in lower if all(leq[d][c] for d in lower)]
            upper = [c for c in range(n) if leq[a][c] and leq[b][c]]
            lub = [c for c in upper if all(leq[c][d] for d in upper)]
            assert len(glb) == 1 and len(lub) == 1, \
                f"not a lattice at ({names[a]}, {names[b]})"
            meet.append(glb[0])
            join.append(lub[0])
    return meet, join


def _lattice(names, covers, label, bounded=False):
    meet, join = lattice_tables(names, covers)
    tables = {"meet": meet, "join": join}
    sig = LAT
    if bounded:
        sig = BLAT
        tables["0"] = [0]
        tables["1"] = [len(names) - 1]
    return FiniteAlgebra(sig, len(names), tables, label=label, element_names=names)


def _demorgan(names, covers, neg, label):
    meet, join = lattice_tables(names, covers)
    index = {name: i for i, name in enumerate(names)}
    tables = {"meet": meet, "join": join,
              "neg": [index[neg[x]] for x in names]}
    return FiniteAlgebra(DM, len(names), tables, label=label, element_names=names)


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    algebra: FiniteAlgebra
    family: str
    facts: Tuple[dict, ...] = field(default_factory=tuple)
    heavy: bool = False
    doubling_pair: Optional[Tuple[str, str]] = None


def _fano_lattice() -> FiniteAlgebra:
    # subspace lattice of GF(2)^3: bottom, 7 points, 7 planes, top
    vectors = [v for v in range(1, 8)]
    points = [frozenset([0, v]) for v in vectors]
    planes = []
    for a in range(1, 8):
        plane = frozenset([0] + [v for v in vectors if bin(v & a).count("1") % 2 == 0])
        if plane not in planes:
            planes.append(plane)
    subspaces = [frozenset([0])] + points + sorted(planes, key=sorted) + \
        [frozenset(range(8))]
    names = (["0"] + [f"p{v}" for v in vectors]
             + [f"P{i+1}" for i in range(7)] + ["1"])
    n = len(subspaces)
    meet, join = [], []
    for a in range(n):
        for b in range(n):
            cap = subspaces[a] & subspaces[b]
            meet.append(subspaces.index(cap))
            closure = set(subspaces[a] | subspaces[b])
            changed = True
            while changed:
                changed = False
                for u in list(closure):
                    for v in list(closure):
                        if u ^ v not in closure:
                            closure.add(u ^ v)
                            changed = True
            join.append(subspaces.index(frozenset(closure)))
    return FiniteAlgebra(LAT, n, {"meet": meet, "join": join},
                         label="fano", element_names=names)


# Admissible-but-invalid quasiequation of Kleene lattices.  The first premise
# must read ~x <= x: with x <= ~x the substitution x -> z/\~z, y -> z unifies
# the premises yet fails the conclusion, so that variant is not admissible.
PHI = r"~x <= x, x /\ ~y <= ~x \/ y => ~y <= y"
JOIN_IRREDUCIBLE_TOP = r"x \/ y = 1 => x = 1 | y = 1"
NO_NEG_FIXPOINT = "x = ~x =>"


@lru_cache(maxsize=1)
def _entries() -> Dict[str, CatalogEntry]:
    entries: List[CatalogEntry] = []

    entries.append(CatalogEntry(
        "two", _lattice(["0", "1"], [("0", "1")], "two"), "lattice",
        ({"kind": "size", "value": 2}, {"kind": "simple", "value": True})))
    entries.append(CatalogEntry(
        "c3", _lattice(["0", "a", "1"], [("0", "a"), ("a", "1")], "c3"), "lattice",
        ({"kind": "size", "value": 3}, {"kind": "simple", "value": False})))
    entries.append(CatalogEntry(
        "m3", _lattice(["0", "a", "b", "c", "1"],
                       [("0", "a"), ("0", "b"), ("0", "c"),
                        ("a", "1"), ("b", "1"), ("c", "1")], "m3"), "lattice",
        ({"kind": "size", "value": 5}, {"kind": "simple", "value": True},
         {"kind": "whitman", "value": True},
         {"kind": "semidistributive", "side": "meet", "value": False})))
    entries.append(CatalogEntry(
        "m4", _lattice(["0", "a", "b", "c", "d", "1"],
                       [("0", x) for x in "abcd"] + [(x, "1") for x in "abcd"],
                       "m4"), "lattice",
        ({"kind": "size", "value": 6}, {"kind": "whitman", "value": True})))
    entries.append(CatalogEntry(
        "n5", _lattice(["0", "a", "b", "c", "1"],
                       [("0", "a"), ("a", "1"), ("0", "b"), ("b", "c"), ("c", "1")],
                       "n5"), "lattice",
        ({"kind": "size", "value": 5}, {"kind": "whitman", "value": True},
         {"kind": "semidistributive", "side": "both", "value": True})))

    m33_names = ["0", "a", "b", "c", "m", "d", "e", "1"]
    m33_covers = [("0", "a"), ("0", "b"), ("0", "c"),
                  ("a", "m"), ("b", "m"), ("c", "m"),
                  ("c", "d"), ("c", "e"), ("m", "1"), ("d", "1"), ("e", "1")]
    entries.append(CatalogEntry(
        "m33", _lattice(m33_names, m33_covers, "m33"), "lattice",
        ({"kind": "size", "value": 8}, {"kind": "simple", "value": True},
         {"kind": "whitman", "value": False})))

    m33p_names = ["0", "a", "b", "c", "m", "c+", "m+", "d", "e", "1"]
    m33p_covers = [("0", "a"), ("0", "b"), ("0", "c"),
                   ("a", "m"), ("b", "m"), ("c", "m"),
                   ("c", "c+"), ("m", "m+"), ("c+", "m+"),
                   ("c+", "d"), ("c+", "e"),
                   ("m+", "1"), ("d", "1"), ("e", "1")]
    entries.append(CatalogEntry(
        "m33p", _lattice(m33p_names, m33p_covers, "m33p"), "lattice",
        ({"kind": "size", "value": 10}, {"kind": "whitman", "value": True},
         {"kind": "quotient_by_doubling", "iso_to": "m33"},
         {"kind": "in_isp", "keys": ("two", "m33"), "value": True}),
        doubling_pair=("c", "c+")))

    h_names = ["0", "l1", "r1", "m", "l2", "r2", "s", "1"]
    h_covers = [("0", "l1"), ("0", "r1"), ("l1", "m"), ("r1", "m"),
                ("m", "l2"), ("m", "r2"), ("l2", "1"), ("r2", "1"),
                ("0", "s"), ("s", "1")]
    entries.append(CatalogEntry(
        "h", _lattice(h_names, h_covers, "h"), "lattice",
        ({"kind": "size", "value": 8}, {"kind": "whitman", "value": False})))

    hp_names = ["0", "l1", "r1", "m", "m+", "l2", "r2", "s", "1"]
    hp_covers = [("0", "l1"), ("0", "r1"), ("l1", "m"), ("r1", "m"),
                 ("m", "m+"), ("m+", "l2"), ("m+", "r2"),
                 ("l2", "1"), ("r2", "1"), ("0", "s"), ("s", "1")]
    entries.append(CatalogEntry(
        "h_plus", _lattice(hp_names, hp_covers, "h_plus"), "lattice",
        ({"kind": "size", "value": 9}, {"kind": "whitman", "value": True},
         {"kind": "quotient_by_doubling", "iso_to": "h"}),
        doubling_pair=("m", "m+")))

    entries.append(CatalogEntry(
        "two_b", _lattice(["0", "1"], [("0", "1")], "two_b", bounded=True),
        "bounded-lattice",
        ({"kind": "size", "value": 2}, {"kind": "simple", "value": True},
         {"kind": "flat", "value": True})))
    entries.append(CatalogEntry(
        "m3_b", _lattice(["0", "a", "b", "c", "1"],
                         [("0", "a"), ("0", "b"), ("0", "c"),
                          ("a", "1"), ("b", "1"), ("c", "1")],
                         "m3_b", bounded=True), "bounded-lattice",
        ({"kind": "size", "value": 5}, {"kind": "simple", "value": True},
         {"kind": "flat", "value": False})))
    entries.append(CatalogEntry(
        "n5_b", _lattice(["0", "a", "b", "c", "1"],
                         [("0", "a"), ("a", "1"), ("0", "b"), ("b", "c"), ("c", "1")],
                         "n5_b", bounded=True), "bounded-lattice",
        ({"kind": "size", "value": 5}, {"kind": "flat", "value": True})))

    l13_names = ["0", "x", "a", "b", "c", "ab", "ac", "bc", "1"]
    l13_covers = [("0", "x"), ("x", "a"), ("0", "b"), ("0", "c"),
                  ("a", "ab"), ("a", "ac"), ("b", "ab"), ("b", "bc"),
                  ("c", "ac"), ("c", "bc"), ("ab", "1"), ("ac", "1"), ("bc", "1")]
    entries.append(CatalogEntry(
        "l13_b", _lattice(l13_names, l13_covers, "l13_b", bounded=True),
        "bounded-lattice",
        ({"kind": "size", "value": 9}, {"kind": "flat", "value": True})))

    l14_names = ["0", "a", "b", "c", "ab", "ac", "bc", "y", "1"]
    l14_covers = [("0", "a"), ("0", "b"), ("0", "c"),
                  ("a", "ab"), ("a", "ac"), ("b", "ab"), ("b", "bc"),
                  ("c", "ac"), ("c", "bc"), ("bc", "y"),
                  ("ab", "1"), ("ac", "1"), ("y", "1")]
    entries.append(CatalogEntry(
        "l14_b", _lattice(l14_names, l14_covers, "l14_b", bounded=True),
        "bounded-lattice",
        ({"kind": "size", "value": 9}, {"kind": "flat", "value": True})))

    l15_names = ["0", "u", "z", "m", "a", "c", "m'", "v", "w", "1"]
    l15_covers = [("0", "u"), ("0", "z"), ("u", "a"), ("u", "m"),
                  ("z", "c"), ("z", "m"), ("m", "m'"),
                  ("a", "v"), ("c", "w"), ("m'", "v"), ("m'", "w"),
                  ("v", "1"), ("w", "1")]
    entries.append(CatalogEntry(
        "l15_b", _lattice(l15_names, l15_covers, "l15_b", bounded=True),
        "bounded-lattice",
        ({"kind": "size", "value": 10}, {"kind": "flat", "value": True})))

    entries.append(CatalogEntry(
        "dm2", _demorgan(["0", "1"], [("0", "1")], {"0": "1", "1": "0"}, "dm2"),
        "de-morgan",
        ({"kind": "size", "value": 2},
         {"kind": "clause", "clause": NO_NEG_FIXPOINT, "holds": True})))

    dm4_names = ["x∧¬x", "x", "¬x", "x∨¬x"]
    dm4_covers = [("x∧¬x", "x"), ("x∧¬x", "¬x"), ("x", "x∨¬x"), ("¬x", "x∨¬x")]
    entries.append(CatalogEntry(
        "dm4", _demorgan(dm4_names, dm4_covers,
                         {"x∧¬x": "x∨¬x", "x": "¬x", "¬x": "x", "x∨¬x": "x∧¬x"},
                         "dm4"), "de-morgan",
        ({"kind": "size", "value": 4},
         {"kind": "clause", "clause": NO_NEG_FIXPOINT, "holds": True})))

    entries.append(CatalogEntry(
        "k3", _demorgan(["¬a", "b", "a"], [("¬a", "b"), ("b", "a")],
                        {"¬a": "a", "b": "b", "a": "¬a"}, "k3"), "kleene",
        ({"kind": "size", "value": 3}, {"kind": "simple", "value": True},
         {"kind": "clause", "clause": NO_NEG_FIXPOINT, "holds": False},
         {"kind": "clause", "clause": PHI, "holds": False})))

    entries.append(CatalogEntry(
        "b2", FiniteAlgebra(BA, 2, {"meet": [0, 0, 0, 1], "join": [0, 1, 1, 1],
                                    "neg": [1, 0], "0": [0], "1": [1]},
                            label="b2", element_names=["0", "1"]), "boolean",
        ({"kind": "size", "value": 2}, {"kind": "simple", "value": True})))

    b4_meet, b4_join = lattice_tables(["0", "p", "¬p", "1"],
                                      [("0", "p"), ("0", "¬p"),
                                       ("p", "1"), ("¬p", "1")])
    entries.append(CatalogEntry(
        "b4", FiniteAlgebra(BA, 4, {"meet": b4_meet, "join": b4_join,
                                    "neg": [3, 2, 1, 0], "0": [0], "1": [3]},
                            label="b4", element_names=["0", "p", "¬p", "1"]),
        "boolean", ({"kind": "size", "value": 4},)))

    st_meet, st_join = lattice_tables(["0", "a", "1"], [("0", "a"), ("a", "1")])
    entries.append(CatalogEntry(
        "stone3", FiniteAlgebra(ST, 3, {"meet": st_meet, "join": st_join,
                                        "star": [2, 0, 0], "0": [0], "1": [2]},
                                label="stone3", element_names=["0", "a", "1"]),
        "stone", ({"kind": "size", "value": 3},)))

    entries.append(CatalogEntry(
        "mv2", FiniteAlgebra(FL, 2, {"mul": [0, 0, 0, 1], "imp": [1, 1, 0, 1],
                                     "meet": [0, 0, 0, 1], "join": [0, 1, 1, 1],
                                     "0": [0], "1": [1]},
                             label="mv2", element_names=["0", "1"]), "mv",
        ({"kind": "size", "value": 2}, {"kind": "identity", "name": "DL", "value": True})))

    # 3-element Lukasiewicz chain, elements 0 < 1/2 < 1
    mv3_mul = [0, 0, 0, 0, 0, 1, 0, 1, 2]
    mv3_imp = [2, 2, 2, 1, 2, 2, 0, 1, 2]
    mv3_meet = [0, 0, 0, 0, 1, 1, 0, 1, 2]
    mv3_join = [0, 1, 2, 1, 1, 2, 2, 2, 2]
    entries.append(CatalogEntry(
        "mv3", FiniteAlgebra(FL, 3, {"mul": mv3_mul, "imp": mv3_imp,
                                     "meet": mv3_meet, "join": mv3_join,
                                     "0": [0], "1": [2]},
                             label="mv3", element_names=["0", "1/2", "1"]), "mv",
        ({"kind": "size", "value": 3}, {"kind": "simple", "value": True},
         {"kind": "identity", "name": "DL", "value": False},
         {"kind": "identity", "name": "perfect-chain", "value": False})))

    entries.append(CatalogEntry(
        "fano", _fano_lattice(), "lattice",
        ({"kind": "size", "value": 16}, {"kind": "whitman", "value": False},
         {"kind": "simple", "value": True}),
        heavy=True))

    return {e.key: e for e in entries}


def catalog_keys(include_heavy: bool = True) -> List[str]:
    return [k for k, e in _entries().items() if include_heavy or not e.heavy]


def entry(key: str) -> CatalogEntry:
    table = _entries()
    if key not in table:
        raise UnknownKey(f"unknown catalog key {key!r}; see `catalog list`")
    return table[key]


def builtin(key: str) -> FiniteAlgebra:
    return entry(key).algebra


def element(algebra: FiniteAlgebra, name: str) -> int:
    if algebra.element_names and name in algebra.element_names:
        return algebra.element_names.index(name)
    raise UnknownKey(f"no element named {name!r} in {algebra.label}")
