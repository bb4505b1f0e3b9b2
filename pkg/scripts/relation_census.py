"""Count piggyback relations per carrier pair for the built-in families.

    python3 scripts/relation_census.py --families kleene sugihara-odd:1 sugihara-odd:2 sugihara-even:2
"""

from __future__ import annotations

import argparse
import json
import time
from collections import Counter
from dataclasses import asdict, dataclass, field

from pigdual import families as F


@dataclass
class CensusConfig:
    families: list[str] = field(default_factory=lambda: [
        "kleene", "sugihara-odd:1", "sugihara-odd:2", "sugihara-odd:3",
        "sugihara-even:2", "sugihara-even:3", "sugihara-isp-even:2"])
    json_out: str | None = None


def census(spec: str) -> dict:
    t0 = time.perf_counter()
    fs = F.family(spec)
    ego = fs.alter_ego()
    per_pair = Counter(f"{r.dom_sort}/{r.dom_carrier} -> {r.cod_sort}/{r.cod_carrier}" for r in ego.R)
    return {
        "family": spec,
        "sorts": {M.id: M.size for M in ego.sorts},
        "G": len(ego.G),
        "R": len(ego.R),
        "S": [f"{s.sort}:{s.element}" for s in ego.S],
        "per_pair": dict(sorted(per_pair.items())),
        "seconds": round(time.perf_counter() - t0, 3),
    }


def main(cfg: CensusConfig) -> list[dict]:
    rows = [census(spec) for spec in cfg.families]
    print(f"{'family':24} {'sorts':>18} {'|G|':>5} {'|R|':>5} {'|S|':>4} {'s':>7}")
    for r in rows:
        sizes = ",".join(str(v) for v in r["sorts"].values())
        print(f"{r['family']:24} {sizes:>18} {r['G']:>5} {r['R']:>5} {len(r['S']):>4} {r['seconds']:>7.3f}")
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2, sort_keys=True)
    return rows


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--families", nargs="+", default=CensusConfig().families)
    p.add_argument("--json-out")
    a = p.parse_args()
    main(CensusConfig(families=a.families, json_out=a.json_out))
