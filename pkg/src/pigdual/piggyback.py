"""Carriers, the separation and pointing conditions, and assembly of the
multisorted piggyback alter ego over distributive lattices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .finalg import (
    AlgebraError, FinAlgebra, Hom, hom_set, is_closed, is_hom, maximal_subuniverses_within,
    one_element_subuniverses, product, subuniverse_generated,
)
from .priestley import Carrier, Variant, is_carrier

CarrierAssignment = Mapping[str, Sequence[Carrier]]


class HypothesisFailure(Exception):
    """A hypothesis of the piggyback duality theorem does not hold."""

    hypothesis = "?"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class SepFailed(HypothesisFailure):
    hypothesis = "G"


class MissingS1(HypothesisFailure):
    hypothesis = "S1"


class MissingS0(HypothesisFailure):
    hypothesis = "S0"


@dataclass(frozen=True)
class SepWitness:
    sort: str
    a: int
    b: int


@dataclass(frozen=True)
class PointWitness:
    sort: str
    element: int
    carrier: int


@dataclass(frozen=True)
class Pointing:
    s1: PointWitness | None
    s0: PointWitness | None


@dataclass(frozen=True)
class PigRelation:
    dom_sort: str
    cod_sort: str
    dom_carrier: int
    cod_carrier: int
    pairs: frozenset[tuple[int, int]]

    @property
    def key(self) -> tuple[str, int, str, int]:
        return (self.dom_sort, self.dom_carrier, self.cod_sort, self.cod_carrier)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


@dataclass(frozen=True)
class Singleton:
    sort: str
    element: int


@dataclass(eq=False)
class AlterEgo:
    sorts: tuple[FinAlgebra, ...]
    G: tuple[Hom, ...]
    R: tuple[PigRelation, ...]
    S: tuple[Singleton, ...]
    carriers: dict[str, tuple[Carrier, ...]]
    pointing: Pointing = field(default_factory=lambda: Pointing(None, None))
    variant: Variant = "Du"

    def sort(self, sort_id: str) -> FinAlgebra:
        return self.sort_map[sort_id]

    @property
    def sort_map(self) -> dict[str, FinAlgebra]:
        return {M.id: M for M in self.sorts}

    def relations_for(self, dom_sort: str, dom_carrier: int, cod_sort: str, cod_carrier: int) -> list[PigRelation]:
        key = (dom_sort, dom_carrier, cod_sort, cod_carrier)
        return [r for r in self.R if r.key == key]

    def to_json(self) -> dict:
        return {
            "sorts": [{"id": M.id, "size": M.size} for M in self.sorts],
            "carriers": {k: [list(c.bits) for c in v] for k, v in self.carriers.items()},
            "G": [{"dom": g.dom_id, "cod": g.cod_id, "map": list(g.map)} for g in self.G],
            "R": [
                {"dom_sort": r.dom_sort, "dom_carrier": r.dom_carrier,
                 "cod_sort": r.cod_sort, "cod_carrier": r.cod_carrier,
                 "pairs": [list(p) for p in r.sorted_pairs()]}
                for r in self.R
            ],
            "S": [{"sort": s.sort, "element": s.element} for s in self.S],
            "variant": self.variant,
        }


def validate_setup(sorts: Sequence[FinAlgebra], carriers: CarrierAssignment, variant: Variant = "Du") -> None:
    ids = [M.id for M in sorts]
    if len(set(ids)) != len(ids):
        raise AlgebraError(f"sort ids must be distinct, got {ids}")
    for M in sorts[1:]:
        if M.signature != sorts[0].signature:
            raise AlgebraError(f"sort {M.id!r} has a different signature")
    for M in sorts:
        cs = carriers.get(M.id, ())
        if not cs:
            raise AlgebraError(f"sort {M.id!r} has no carriers")
        for c in cs:
            if not is_carrier(c, M, variant):
                raise AlgebraError(f"{c.bits} is not a carrier on {M.id!r}")
    extra = set(carriers) - set(ids)
    if extra:
        raise AlgebraError(f"carriers given for unknown sorts {sorted(extra)}")


def all_inter_sort_homs(sorts: Sequence[FinAlgebra]) -> list[Hom]:
    return [h for M in sorts for N in sorts for h in hom_set(M, N)]


def piggyback_relations(M: FinAlgebra, N: FinAlgebra, w: Carrier, w2: Carrier,
                        dom_carrier: int = 0, cod_carrier: int = 0) -> list[PigRelation]:
    """Maximal subuniverses of M × N inside {(a, b) : w(a) ≤ w2(b)}."""
    P = product([M, N])
    allowed = [P.encode((a, b)) for a in range(M.size) for b in range(N.size) if w(a) <= w2(b)]
    out = []
    for sub in maximal_subuniverses_within(P, allowed):
        pairs = frozenset(P.decode(i) for i in sub.members)
        out.append(PigRelation(M.id, N.id, dom_carrier, cod_carrier, pairs))
    return out


def _resolve_G(sorts, G):
    if G is None or G == "all":
        return all_inter_sort_homs(sorts)
    smap = {M.id: M for M in sorts}
    for g in G:
        if g.dom_id not in smap or g.cod_id not in smap:
            raise AlgebraError(f"hom {g.dom_id}->{g.cod_id} does not join listed sorts")
        if not is_hom(g, smap[g.dom_id], smap[g.cod_id]):
            raise AlgebraError(f"map {g.map} is not a homomorphism {g.dom_id}->{g.cod_id}")
    return list(G)


def check_sep(sorts: Sequence[FinAlgebra], G: Sequence[Hom] | str | None,
              carriers: CarrierAssignment) -> SepWitness | None:
    """None when every pair a ≠ b in every sort is split by a carrier of its
    sort or by ω' ∘ u with u ∈ G; otherwise the first unseparated pair."""
    G = _resolve_G(sorts, G)
    by_dom: dict[str, list[Hom]] = {}
    for g in G:
        by_dom.setdefault(g.dom_id, []).append(g)
    for M in sorts:
        tests = [c.bits for c in carriers[M.id]]
        for u in by_dom.get(M.id, ()):
            tests.extend(c.compose(u).bits for c in carriers[u.cod_id])
        sig = np.array(tests, dtype=np.int64).reshape(len(tests), M.size)
        for a in range(M.size):
            for b in range(a + 1, M.size):
                if np.array_equal(sig[:, a], sig[:, b]):
                    return SepWitness(M.id, a, b)
    return None


def check_pointed(sorts: Sequence[FinAlgebra], carriers: CarrierAssignment) -> Pointing:
    """First (sort, d, carrier) with {d} a subuniverse and carrier(d) = 1, and
    likewise for 0, in sort / element / carrier order."""
    s1 = s0 = None
    for M in sorts:
        for d in one_element_subuniverses(M):
            for ci, c in enumerate(carriers[M.id]):
                if s1 is None and c(d) == 1:
                    s1 = PointWitness(M.id, d, ci)
                if s0 is None and c(d) == 0:
                    s0 = PointWitness(M.id, d, ci)
    return Pointing(s1, s0)


def pointing_census(sorts: Sequence[FinAlgebra], carriers: CarrierAssignment) -> dict:
    """Per sort, each 1-element subuniverse {d} with the values of every
    carrier at d.  An absent pointing is certified by this table."""
    return {M.id: {int(d): [int(c(d)) for c in carriers[M.id]] for d in one_element_subuniverses(M)}
            for M in sorts}


def assemble_alter_ego(sorts: Sequence[FinAlgebra], G: Sequence[Hom] | str | None,
                       carriers: CarrierAssignment, *, S: Sequence[Singleton] | None = None,
                       variant: Variant = "Du") -> AlterEgo:
    """Build the alter ego without certifying the theorem's hypotheses.

    With ``S=None`` the singletons come from whatever pointing witnesses
    exist; pass an explicit sequence to override.
    """
    sorts = tuple(sorts)
    validate_setup(sorts, carriers, variant)
    G = tuple(_resolve_G(sorts, G))
    carriers = {M.id: tuple(carriers[M.id]) for M in sorts}
    R = []
    for M in sorts:
        for ci, w in enumerate(carriers[M.id]):
            for N in sorts:
                for cj, w2 in enumerate(carriers[N.id]):
                    R.extend(piggyback_relations(M, N, w, w2, ci, cj))
    pointing = check_pointed(sorts, carriers)
    if variant == "D1":
        pointing = Pointing(pointing.s1, None)
    if S is None:
        S = []
        for w in (pointing.s1, pointing.s0):
            if w is not None and Singleton(w.sort, w.element) not in S:
                S.append(Singleton(w.sort, w.element))
    return AlterEgo(sorts, G, tuple(R), tuple(S), carriers, pointing, variant)


def build_alter_ego(sorts: Sequence[FinAlgebra], G: Sequence[Hom] | str | None,
                    carriers: CarrierAssignment, variant: Variant = "Du") -> AlterEgo:
    """The certified alter ego (N; G, R ∪ S).

    Raises ``SepFailed``, ``MissingS1`` or ``MissingS0`` naming the failed
    hypothesis.  For ``D1`` the bottom-pointing condition is not required.
    """
    sorts = tuple(sorts)
    validate_setup(sorts, carriers, variant)
    G = _resolve_G(sorts, G)
    w = check_sep(sorts, G, carriers)
    if w is not None:
        raise SepFailed(f"no carrier separates {w.a} and {w.b} in sort {w.sort!r}", w)
    pointing = check_pointed(sorts, carriers)
    if pointing.s1 is None:
        raise MissingS1("no sort has a 1-element subalgebra sent to 1 by one of its carriers",
                        pointing_census(sorts, carriers))
    if variant == "Du" and pointing.s0 is None:
        raise MissingS0("no sort has a 1-element subalgebra sent to 0 by one of its carriers",
                        pointing_census(sorts, carriers))
    return assemble_alter_ego(sorts, G, carriers, variant=variant)


def trivial_algebra(like: FinAlgebra, new_id: str = "1") -> FinAlgebra:
    tables = {name: np.zeros((1,) * k, dtype=np.int64) for name, k in like.signature.ops}
    return FinAlgebra(new_id, 1, like.signature, tables)


TRIVIAL_TOP_ID = "T1"
TRIVIAL_BOTTOM_ID = "T0"


def add_trivial_sorts(sorts: Sequence[FinAlgebra], carriers: CarrierAssignment
                      ) -> tuple[tuple[FinAlgebra, ...], dict[str, tuple[Carrier, ...]]]:
    """Append two 1-element sorts carrying the constant-1 and constant-0 maps.

    Does nothing if sorts with those ids are already present.
    """
    sorts = tuple(sorts)
    carriers = {k: tuple(v) for k, v in carriers.items()}
    ids = {M.id for M in sorts}
    for sid, bit in ((TRIVIAL_TOP_ID, 1), (TRIVIAL_BOTTOM_ID, 0)):
        if sid in ids:
            continue
        sorts += (trivial_algebra(sorts[0], sid),)
        carriers[sid] = (Carrier(sid, (bit,)),)
    return sorts, carriers


def check_relation(r: PigRelation, ego: AlterEgo) -> list[str]:
    """Problems with ``r`` (empty if it is a subuniverse, respects its carrier
    pair and is maximal)."""
    M, N = ego.sort(r.dom_sort), ego.sort(r.cod_sort)
    w, w2 = ego.carriers[M.id][r.dom_carrier], ego.carriers[N.id][r.cod_carrier]
    problems = []
    P = product([M, N])
    members = {P.encode(p) for p in r.pairs}
    if not members or not is_closed(P, members):
        problems.append("not a subuniverse")
    if any(w(a) > w2(b) for a, b in r.pairs):
        problems.append("leaves the carrier pre-image of ≤")
    allowed = {P.encode((a, b)) for a in range(M.size) for b in range(N.size) if w(a) <= w2(b)}
    # a strictly larger subuniverse inside allowed would contain the closure of members + e
    for e in sorted(allowed - members):
        if set(subuniverse_generated(P, members | {e}).members) <= allowed:
            problems.append("not maximal")
            break
    return problems
