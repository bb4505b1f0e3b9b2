"""Command-line front end.

Every verb prints a JSON summary to stdout.  Exit status: 0 when all checks
pass, 1 for a certified failure (the report then carries a witness), 2 for
bad input or an exceeded resource bound.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import families
from .finalg import (
    DEFAULT_MAX_CELLS, AlgebraError, FinAlgebra, ResourceLimitExceeded, free_algebra, power,
)
from .natdual import dual_D, duality_check
from .piggyback import (
    HypothesisFailure, add_trivial_sorts, assemble_alter_ego, build_alter_ego,
    check_pointed, check_sep, trivial_algebra,
)
from .priestley import DualityError, double_dual_check, hu_dual, ku_dual
from .reconcile import reconcile_check
from .serialize import algebra_from_json, algebra_to_json, dumps, load_json, setup_from_json, setup_to_json

VERBS = ("check-duality", "reconcile", "dual", "priestley", "free", "family", "relations")


class InputError(Exception):
    pass


def _setup(args):
    """(name, sorts, carriers, G) from --family or --setup."""
    if args.family and args.setup:
        raise InputError("give either --family or --setup, not both")
    if args.family:
        spec = args.family
        if args.no_trivial_sorts and spec.startswith("sugihara-isp-even"):
            spec = spec.replace("sugihara-isp-even", "sugihara-isp-even-bare", 1)
        fs = families.family(spec)
        name, sorts, carriers, G = fs.name, fs.sorts, fs.carriers, fs.G
    elif args.setup:
        sorts, carriers, G = setup_from_json(load_json(args.setup))
        name = Path(args.setup).stem
    else:
        raise InputError("need --family or --setup")
    if args.add_trivial_sorts:
        sorts, carriers = add_trivial_sorts(sorts, carriers)
        if G != "all":
            G = "all"
    return name, tuple(sorts), carriers, G


def _distinct_sorts(sorts) -> list[FinAlgebra]:
    out = []
    for M in sorts:
        if not any(M.size == N.size and all(np.array_equal(M.tables[k], N.tables[k]) for k in M.tables)
                   for N in out):
            out.append(M)
    return out


def _algebra(spec: str, sorts, max_cells: int) -> FinAlgebra:
    kind, _, arg = spec.partition(":")
    if kind == "free":
        return free_algebra(_distinct_sorts(sorts), int(arg or 1), max_cells=max_cells, new_id=f"F({arg or 1})")
    if kind == "trivial":
        return trivial_algebra(sorts[0], "1")
    if kind == "power":
        return power(sorts[0], int(arg or 2))
    if kind == "sort":
        for M in sorts:
            if M.id == arg:
                return M
        raise InputError(f"no sort {arg!r}")
    if kind == "sugihara":
        return families.sugihara_algebra(int(arg))
    if kind == "kleene":
        return families.kleene3()
    if kind == "chain":
        return families.chain(int(arg))
    if kind == "boolean":
        return families.boolean_lattice(int(arg))
    path = Path(spec)
    if not path.exists():
        raise InputError(f"unknown algebra {spec!r}")
    return algebra_from_json(load_json(path))


def _write(args, name: str, text: str) -> str | None:
    if not args.out:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    p = out / name
    p.write_text(text)
    return str(p)


def _failure(report: dict, e: Exception) -> tuple[dict, int]:
    report["verdict"] = "failure"
    report["error"] = type(e).__name__
    report["message"] = str(e)
    if isinstance(e, HypothesisFailure):
        report["hypothesis"] = e.hypothesis
    w = getattr(e, "witness", None)
    report["witness"] = _plain(w)
    return report, 1


def _plain(w):
    if w is None:
        return None
    if hasattr(w, "__dataclass_fields__"):
        return {k: _plain(getattr(w, k)) for k in w.__dataclass_fields__}
    if isinstance(w, (list, tuple)):
        return [_plain(v) for v in w]
    if isinstance(w, (np.integer,)):
        return int(w)
    return w


def _ego(args, sorts, carriers, G):
    if args.uncertified:
        return assemble_alter_ego(sorts, G, carriers, variant=args.variant)
    return build_alter_ego(sorts, G, carriers, variant=args.variant)


def cmd_check_duality(args) -> tuple[dict, int]:
    name, sorts, carriers, G = _setup(args)
    report = {"verb": "check-duality", "setup": name}
    try:
        ego = _ego(args, sorts, carriers, G)
    except HypothesisFailure as e:
        return _failure(report, e)
    A = _algebra(args.algebra or "free:1", sorts, args.max_cells)
    report.update(algebra=A.id, size=A.size)
    try:
        w = duality_check(A, ego, max_nodes=args.max_cells)
    except DualityError as e:
        return _failure(report, e)
    report.update(w.to_json())
    return report, 0


def cmd_reconcile(args) -> tuple[dict, int]:
    name, sorts, carriers, G = _setup(args)
    report = {"verb": "reconcile", "setup": name}
    try:
        ego = _ego(args, sorts, carriers, G)
    except HypothesisFailure as e:
        return _failure(report, e)
    A = _algebra(args.algebra or "free:1", sorts, args.max_cells)
    report.update(algebra=A.id, size=A.size)
    try:
        w = reconcile_check(A, ego)
    except DualityError as e:
        return _failure(report, e)
    report.update(w.to_json())
    if args.emit == "dot":
        report["dot"] = _write(args, f"Z_{_slug(A.id)}.dot", w.Z.to_dot(f"Z({A.id})"))
    return report, 0


def cmd_dual(args) -> tuple[dict, int]:
    name, sorts, carriers, G = _setup(args)
    A = _algebra(args.algebra or "free:1", sorts, args.max_cells)
    ego = assemble_alter_ego(sorts, G, carriers, variant=args.variant)
    X = dual_D(A, ego)
    return {
        "verb": "dual", "setup": name, "algebra": A.id,
        "sizes": X.sizes(),
        "points": {s: [list(h.map) for h in hs] for s, hs in X.points.items()},
    }, 0


def cmd_priestley(args) -> tuple[dict, int]:
    if args.algebra is None:
        raise InputError("priestley needs --algebra")
    sorts = ()
    if args.family or args.setup:
        sorts = _setup(args)[1]
    A = _algebra(args.algebra, sorts, args.max_cells)
    report = {"verb": "priestley", "algebra": A.id, "variant": args.variant}
    H = hu_dual(A, args.variant)
    report["dual"] = H.to_json()
    report["double_dual_size"] = ku_dual(H, args.variant).size
    try:
        report["evaluation"] = double_dual_check(A, args.variant)
        report["verdict"] = "isomorphism"
    except DualityError as e:
        return _failure(report, e)
    if args.emit == "dot":
        report["dot"] = _write(args, f"H_{_slug(A.id)}.dot", H.to_dot(f"H({A.id})"))
    return report, 0


def cmd_free(args) -> tuple[dict, int]:
    name, sorts, carriers, G = _setup(args)
    F = free_algebra(_distinct_sorts(sorts), args.generators, max_cells=args.max_cells,
                     new_id=f"F({args.generators})")
    report = {"verb": "free", "setup": name, "generators": list(F.generators), "size": F.size}
    if args.emit == "json":
        report["algebra"] = algebra_to_json(F)
    if args.check:
        try:
            ego = _ego(args, sorts, carriers, G)
            report["duality"] = duality_check(F, ego, max_nodes=args.max_cells).to_json()
            report["reconcile"] = reconcile_check(F, ego).to_json()
        except (HypothesisFailure, DualityError) as e:
            return _failure(report, e)
    return report, 0


def cmd_family(args) -> tuple[dict, int]:
    name, sorts, carriers, G = _setup(args)
    sep = check_sep(sorts, G, carriers)
    pointing = check_pointed(sorts, carriers)
    return {
        "verb": "family", "setup": name,
        "document": setup_to_json(sorts, carriers, G),
        "sep": _plain(sep), "pointing": _plain(pointing),
    }, 0


def cmd_relations(args) -> tuple[dict, int]:
    name, sorts, carriers, G = _setup(args)
    ego = assemble_alter_ego(sorts, G, carriers, variant=args.variant)
    doc = ego.to_json()
    return {"verb": "relations", "setup": name, "count": len(ego.R), "relations": doc["R"]}, 0


def _slug(s: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in s)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pigdual", description=__doc__.splitlines()[0])
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--family", help="kleene | sugihara-odd:N | sugihara-even:N | sugihara-isp-even:N")
    p.add_argument("--setup", help="piggyback setup JSON file")
    p.add_argument("--algebra", help="FILE | free:k | trivial | power:k | sort:ID | sugihara:k | kleene | chain:n | boolean:k")
    p.add_argument("--no-trivial-sorts", action="store_true", help="omit the 1-element sorts of sugihara-isp-even")
    p.add_argument("--add-trivial-sorts", action="store_true", help="append two 1-element sorts before building")
    p.add_argument("--uncertified", action="store_true", help="build the alter ego without checking hypotheses")
    p.add_argument("--variant", choices=("Du", "D1"), default="Du")
    p.add_argument("--generators", type=int, default=1, help="number of free generators (free verb)")
    p.add_argument("--check", action="store_true", help="free verb: run duality and reconciliation checks")
    p.add_argument("--emit", choices=("dot", "json"))
    p.add_argument("--out", help="directory for emitted files")
    p.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS)
    return p


HANDLERS = {
    "check-duality": cmd_check_duality, "reconcile": cmd_reconcile, "dual": cmd_dual,
    "priestley": cmd_priestley, "free": cmd_free, "family": cmd_family, "relations": cmd_relations,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, status = HANDLERS[args.verb](args)
    except (InputError, AlgebraError, ValueError, json.JSONDecodeError, OSError) as e:
        print(dumps({"verb": args.verb, "verdict": "input-error", "message": str(e)}))
        return 2
    except ResourceLimitExceeded as e:
        print(dumps({"verb": args.verb, "verdict": "resource-limit", "message": str(e)}))
        return 2
    print(dumps(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
