"""How many copies of Z_2n does the brute-force ISP(Z_2n) setup need?

For each n, every non-constant carrier of the 2n-chain gets its own copy of
Z_2n.  The script drops each copy in turn and reports whether separation
still holds, then checks the pointing with and without the two trivial sorts.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from pigdual import families as F
from pigdual.natdual import duality_check
from pigdual.piggyback import HypothesisFailure, build_alter_ego, check_pointed, check_sep, trivial_algebra
from pigdual.reconcile import reconcile_check


@dataclass
class IspEvenConfig:
    ns: list[int] = field(default_factory=lambda: [2, 3])


def main(cfg: IspEvenConfig):
    for n in cfg.ns:
        bare = F.sugihara_setup("isp-even", n, trivial_sorts=False)
        copies = len(bare.sorts)
        print(f"n={n}: {copies} non-constant carriers on the {2 * n}-chain")
        for drop in range(copies):
            sorts = [M for i, M in enumerate(bare.sorts) if i != drop]
            cs = {M.id: bare.carriers[M.id] for M in sorts}
            w = check_sep(sorts, "all", cs)
            print(f"  without copy {drop} (carrier {bare.carriers[bare.sorts[drop].id][0].bits}): "
                  f"{'separates' if w is None else f'fails at {w}'}")
        p = check_pointed(bare.sorts, bare.carriers)
        print(f"  pointing without trivial sorts: s1={p.s1} s0={p.s0}")
        try:
            build_alter_ego(bare.sorts, "all", bare.carriers)
        except HypothesisFailure as e:
            print(f"  build without trivial sorts: {type(e).__name__}")
        full = F.sugihara_setup("isp-even", n)
        ego = full.alter_ego()
        Z = F.sugihara_algebra(2 * n)
        for A in (Z, trivial_algebra(Z)):
            d = duality_check(A, ego)
            r = reconcile_check(A, ego)
            print(f"  with trivial sorts ({len(full.sorts)} sorts, |R|={len(ego.R)}): "
                  f"{A.id}: |ED|={d.ed_size}, |Z|={r.Z.poset.size}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--ns", nargs="+", type=int, default=IspEvenConfig().ns)
    main(IspEvenConfig(p.parse_args().ns))
