"""JSON interchange: algebra documents, presentations, reports.

The algebra document has exactly the fields name/signature/size/tables and
optional element_names; unknown fields are rejected.
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional, Sequence, Tuple

from .core import FiniteAlgebra, Signature
from .errors import ParseError, SignatureMismatch

ALGEBRA_FIELDS = {"name", "signature", "size", "tables", "element_names"}


def algebra_to_json(algebra: FiniteAlgebra) -> dict:
    out = {
        "name": algebra.label or "algebra",
        "signature": [{"op": sym, "arity": k}
                      for sym, k in algebra.signature.operations],
        "size": algebra.size,
        "tables": {sym: list(table) for sym, table in algebra.tables.items()},
    }
    if algebra.element_names:
        out["element_names"] = list(algebra.element_names)
    return out


def algebra_from_json(data: dict) -> FiniteAlgebra:
    if not isinstance(data, dict):
        raise SignatureMismatch("algebra document must be a JSON object")
    unknown = set(data) - ALGEBRA_FIELDS
    if unknown:
        raise SignatureMismatch(f"unknown fields in algebra document: {sorted(unknown)}")
    for required in ("name", "signature", "size", "tables"):
        if required not in data:
            raise SignatureMismatch(f"algebra document missing field {required!r}")
    ops = tuple((entry["op"], int(entry["arity"])) for entry in data["signature"])
    signature = _match_signature(ops)
    return FiniteAlgebra(signature, int(data["size"]),
                         {sym: data["tables"][sym] for sym, _ in ops},
                         label=data["name"],
                         element_names=data.get("element_names"))


def _match_signature(ops: Tuple[Tuple[str, int], ...]) -> Signature:
    from .catalog import SIGNATURES

    for sig in SIGNATURES.values():
        if sig.operations == ops:
            return sig
    return Signature("custom", ops)


def load_algebra(path: str) -> FiniteAlgebra:
    with open(path, "r", encoding="utf-8") as fh:
        return algebra_from_json(json.load(fh))


def dump_algebra(algebra: FiniteAlgebra, path: Optional[str] = None) -> str:
    text = json.dumps(algebra_to_json(algebra), indent=2, sort_keys=True,
                      ensure_ascii=False)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text


PRESENTATION_FIELDS = {"vars", "relations", "base"}


def presentation_from_json(data: dict, resolve) -> "Presentation":
    """Build a Presentation; `resolve` maps an algebra name to an algebra."""
    from .clauses import parse_equation
    from .free import Presentation

    unknown = set(data) - PRESENTATION_FIELDS
    if unknown:
        raise SignatureMismatch(f"unknown fields in presentation: {sorted(unknown)}")
    base = tuple(resolve(name) for name in data["base"])
    if not base:
        raise SignatureMismatch("presentation needs a nonempty base")
    variables = tuple(data["vars"])
    relations = []
    for text in data["relations"]:
        eq, _ = parse_equation(text, base[0].signature, variables=variables)
        relations.append(eq.pair())
    return Presentation(variables, tuple(relations), base)
