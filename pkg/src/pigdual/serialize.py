"""JSON documents for algebras and piggyback setups.

Algebra document::

    {"id": str, "size": int,
     "signature": {"ops": [{"name": str, "arity": int}], "meet": str, "join": str},
     "tables": {opname: nested row-major array}}

Setup document::

    {"sorts": [algebra document | {"ref": id}],
     "carriers": {sort_id: [bitvector, ...]},
     "G": [{"dom": id, "cod": id, "map": [...]}] | "all"}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .finalg import AlgebraError, FinAlgebra, Hom, Signature
from .priestley import Carrier


def algebra_to_json(A: FinAlgebra) -> dict:
    return {
        "id": A.id,
        "size": A.size,
        "signature": {
            "ops": [{"name": n, "arity": k} for n, k in A.signature.ops],
            "meet": A.signature.meet,
            "join": A.signature.join,
        },
        "tables": {n: np.asarray(t).tolist() for n, t in A.tables.items()},
    }


def algebra_from_json(doc: Mapping[str, Any]) -> FinAlgebra:
    try:
        sig_doc = doc["signature"]
        sig = Signature(tuple((op["name"], int(op["arity"])) for op in sig_doc["ops"]),
                        sig_doc.get("meet", "meet"), sig_doc.get("join", "join"))
        return FinAlgebra(str(doc["id"]), int(doc["size"]), sig,
                          {name: np.asarray(t, dtype=np.int64) for name, t in doc["tables"].items()})
    except (KeyError, TypeError) as e:
        raise AlgebraError(f"malformed algebra document: {e!r}") from e


def setup_to_json(sorts: Sequence[FinAlgebra], carriers: Mapping[str, Sequence[Carrier]], G) -> dict:
    return {
        "sorts": [algebra_to_json(M) for M in sorts],
        "carriers": {M.id: [list(c.bits) for c in carriers[M.id]] for M in sorts},
        "G": "all" if G is None or G == "all" else [
            {"dom": g.dom_id, "cod": g.cod_id, "map": list(g.map)} for g in G],
    }


def setup_from_json(doc: Mapping[str, Any], library: Mapping[str, FinAlgebra] | None = None):
    """Returns ``(sorts, carriers, G)`` with ``G`` either ``"all"`` or a list of homs."""
    library = dict(library or {})
    try:
        sorts = []
        for s in doc["sorts"]:
            if isinstance(s, str) or "ref" in s:
                ref = s if isinstance(s, str) else s["ref"]
                if ref not in library:
                    raise AlgebraError(f"unknown algebra reference {ref!r}")
                sorts.append(library[ref])
            else:
                sorts.append(algebra_from_json(s))
        carriers = {sid: tuple(Carrier(sid, tuple(int(b) for b in bits)) for bits in cs)
                    for sid, cs in doc["carriers"].items()}
        g = doc.get("G", "all")
        G = "all" if g == "all" else [Hom(h["dom"], h["cod"], tuple(int(v) for v in h["map"])) for h in g]
    except (KeyError, TypeError) as e:
        raise AlgebraError(f"malformed setup document: {e!r}") from e
    return tuple(sorts), carriers, G


def load_json(path: str | Path) -> Any:
    with open(path) as fh:
        return json.load(fh)


def dumps(obj: Any) -> str:
    """Canonical JSON text (sorted keys) so reports are byte-deterministic."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default)


def _default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")
