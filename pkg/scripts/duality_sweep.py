"""Run duality and reconciliation checks for one family over a corpus built
from its sorts: each sort, small powers, singly generated subalgebras of the
square, the trivial algebra and free algebras.

    python3 scripts/duality_sweep.py --family sugihara-odd:2 --free 1
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from pigdual import families as F
from pigdual.finalg import ResourceLimitExceeded, free_algebra, power, subalgebra, subuniverse_generated
from pigdual.natdual import duality_check
from pigdual.piggyback import trivial_algebra
from pigdual.priestley import DualityError, join_irreducibles
from pigdual.reconcile import reconcile_check


@dataclass
class SweepConfig:
    family: str = "kleene"
    max_power: int = 2
    free: int = 1
    max_cells: int = 10**6
    json_out: str | None = None


def corpus(cfg: SweepConfig, sorts):
    seen = set()
    for M in sorts:
        key = (M.size, tuple(t.tobytes() for t in M.tables.values()))
        if key in seen:
            continue
        seen.add(key)
        yield M
        for k in range(2, cfg.max_power + 1):
            if M.size ** k <= 64:
                yield power(M, k)
        P = power(M, 2)
        subs = set()
        for g in range(P.size):
            S = subuniverse_generated(P, [g])
            if S.members not in subs and len(S.members) < P.size:
                subs.add(S.members)
                yield subalgebra(P, S, f"<{M.id}^2:{P.decode(g)}>")
    yield trivial_algebra(sorts[0])
    for k in range(1, cfg.free + 1):
        try:
            yield free_algebra(list({M.size: M for M in sorts}.values()), k, max_cells=cfg.max_cells,
                               new_id=f"F({k})")
        except ResourceLimitExceeded as e:
            print(f"skipping F({k}): {e}")


def run(cfg: SweepConfig) -> list[dict]:
    fs = F.family(cfg.family)
    ego = fs.alter_ego()
    rows = []
    for A in corpus(cfg, fs.sorts):
        t0 = time.perf_counter()
        row = {"algebra": A.id, "size": A.size, "ji_plus_2": len(join_irreducibles(A)) + 2}
        try:
            row["ed"] = duality_check(A, ego).ed_size
            row["Z"] = reconcile_check(A, ego).Z.poset.size
            row["ok"] = row["ed"] == A.size and row["Z"] == row["ji_plus_2"]
        except DualityError as e:
            row.update(ok=False, error=f"{type(e).__name__}: {e}")
        row["seconds"] = round(time.perf_counter() - t0, 4)
        rows.append(row)
    return rows


def main(cfg: SweepConfig):
    rows = run(cfg)
    print(f"{'algebra':32} {'|A|':>5} {'|ED|':>5} {'|Z|':>5} {'JI+2':>5}  ok")
    for r in rows:
        print(f"{r['algebra'][:32]:32} {r['size']:>5} {r.get('ed', '-'):>5} {r.get('Z', '-'):>5} "
              f"{r['ji_plus_2']:>5}  {'yes' if r['ok'] else 'NO ' + r.get('error', '')}")
    print(f"{sum(r['ok'] for r in rows)}/{len(rows)} passed")
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2, sort_keys=True)
    return rows


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--family", default=SweepConfig.family)
    p.add_argument("--max-power", type=int, default=SweepConfig.max_power)
    p.add_argument("--free", type=int, default=SweepConfig.free)
    p.add_argument("--max-cells", type=int, default=SweepConfig.max_cells)
    p.add_argument("--json-out")
    a = p.parse_args()
    main(SweepConfig(a.family, a.max_power, a.free, a.max_cells, a.json_out))
