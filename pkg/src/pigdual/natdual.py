"""Natural duals D(A), the second dual E(D(A)), evaluation maps and the Δ
cross-check that ties a morphism α: D(A) → M~ to a Priestley-dual map."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .finalg import FinAlgebra, Hom, ResourceLimitExceeded, hom_set
from .piggyback import AlterEgo, PigRelation, Singleton
from .priestley import DualityError, PointedPoset, hu_dual


class NotInjective(DualityError):
    pass


class NotSurjective(DualityError):
    pass


class WellDefinednessViolation(DualityError):
    pass


class NotJointlySurjective(DualityError):
    pass


@dataclass(eq=False)
class MultisortedStructure:
    """D(A): for each sort M, the homomorphisms A → M in canonical order."""

    algebra: FinAlgebra
    ego: AlterEgo
    points: dict[str, tuple[Hom, ...]]

    def index(self, sort_id: str, x: Hom) -> int:
        return self._index[sort_id][x.map]

    def __post_init__(self):
        self._index = {s: {h.map: i for i, h in enumerate(hs)} for s, hs in self.points.items()}

    @property
    def total(self) -> int:
        return sum(len(v) for v in self.points.values())

    def sizes(self) -> dict[str, int]:
        return {s: len(v) for s, v in self.points.items()}


def dual_D(A: FinAlgebra, ego: AlterEgo) -> MultisortedStructure:
    return MultisortedStructure(A, ego, {M.id: tuple(hom_set(A, M)) for M in ego.sorts})


def lift_hom(g: Hom, X: MultisortedStructure) -> dict[int, int]:
    """x ↦ g ∘ x, from indices of X_dom to indices of X_cod."""
    return {i: X.index(g.cod_id, g.compose(x)) for i, x in enumerate(X.points[g.dom_id])}


def lift_relation(r: PigRelation, X: MultisortedStructure) -> set[tuple[int, int]]:
    """{(x, x') : (x(a), x'(a)) ∈ r for every a}."""
    xs, ys = X.points[r.dom_sort], X.points[r.cod_sort]
    return {(i, j) for i, x in enumerate(xs) for j, y in enumerate(ys)
            if all((x.map[a], y.map[a]) in r.pairs for a in range(X.algebra.size))}


def lift_singleton(s: Singleton, X: MultisortedStructure) -> set[int]:
    return {i for i, x in enumerate(X.points[s.sort]) if all(v == s.element for v in x.map)}


def lift(item, X: MultisortedStructure):
    if isinstance(item, Hom):
        return lift_hom(item, X)
    if isinstance(item, PigRelation):
        return lift_relation(item, X)
    if isinstance(item, Singleton):
        return lift_singleton(item, X)
    raise TypeError(f"cannot lift {type(item).__name__}")


@dataclass(frozen=True, order=True)
class EgoMorphism:
    """α: D(A) → M~, one image tuple per sort (sorts in ego order)."""

    images: tuple[tuple[int, ...], ...]

    def at(self, sort_pos: int, x: int) -> int:
        return self.images[sort_pos][x]


def _constraints(X: MultisortedStructure):
    """Unary domains and binary constraints over variables (sort_pos, x)."""
    ego = X.ego
    pos = {M.id: k for k, M in enumerate(ego.sorts)}
    variables = [(pos[M.id], i) for M in ego.sorts for i in range(len(X.points[M.id]))]
    var_id = {v: n for n, v in enumerate(variables)}
    domains = [set(range(ego.sorts[sp].size)) for sp, _ in variables]
    binary: dict[tuple[int, int], set[tuple[int, int]]] = {}

    def add(u: int, v: int, allowed: set[tuple[int, int]]):
        if u == v:
            domains[u] &= {a for a, b in allowed if a == b}
            return
        if u > v:
            u, v = v, u
            allowed = {(b, a) for a, b in allowed}
        if (u, v) in binary:
            binary[(u, v)] &= allowed
        else:
            binary[(u, v)] = set(allowed)

    for s in ego.S:
        for i in lift_singleton(s, X):
            domains[var_id[(pos[s.sort], i)]] &= {s.element}
    for g in ego.G:
        graph = {(a, g.map[a]) for a in range(len(g.map))}
        for i, j in lift_hom(g, X).items():
            add(var_id[(pos[g.dom_id], i)], var_id[(pos[g.cod_id], j)], graph)
    for r in ego.R:
        for i, j in lift_relation(r, X):
            add(var_id[(pos[r.dom_sort], i)], var_id[(pos[r.cod_sort], j)], set(r.pairs))
    return variables, domains, binary


def ego_morphisms(X: MultisortedStructure, *, max_nodes: int = 10**6) -> list[EgoMorphism]:
    """All structure-preserving sort-preserving maps D(A) → M~, canonically sorted.

    Backtracking with forward checking; singletons are folded into the
    domains up front, G and R act as binary constraints.
    """
    variables, domains, binary = _constraints(X)
    n = len(variables)
    nbrs: list[list[tuple[int, dict[int, set[int]]]]] = [[] for _ in range(n)]
    for (u, v), allowed in binary.items():
        fwd: dict[int, set[int]] = {}
        bwd: dict[int, set[int]] = {}
        for a, b in allowed:
            fwd.setdefault(a, set()).add(b)
            bwd.setdefault(b, set()).add(a)
        nbrs[u].append((v, fwd))
        nbrs[v].append((u, bwd))
    assign = [-1] * n
    found: list[tuple[int, ...]] = []
    nodes = 0

    def rec(k: int, doms: list[set[int]]):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise ResourceLimitExceeded(f"morphism search exceeded max_nodes={max_nodes}")
        if k == n:
            found.append(tuple(assign))
            return
        for a in sorted(doms[k]):
            assign[k] = a
            new = doms
            ok = True
            copied = False
            for v, table in nbrs[k]:
                if v <= k:
                    continue
                allowed = table.get(a, set())
                cut = doms[v] & allowed
                if len(cut) != len(doms[v]):
                    if not copied:
                        new = list(doms)
                        copied = True
                    new[v] = cut
                    if not cut:
                        ok = False
                        break
            if ok:
                rec(k + 1, new)
        assign[k] = -1

    # earlier-assigned neighbours were already enforced by forward checking
    if all(domains):
        rec(0, [set(d) for d in domains])
    sizes = [len(X.points[M.id]) for M in X.ego.sorts]
    out = []
    for flat in found:
        parts, start = [], 0
        for s in sizes:
            parts.append(tuple(flat[start:start + s]))
            start += s
        out.append(EgoMorphism(tuple(parts)))
    out.sort()
    return out


def preserves_structure(alpha: EgoMorphism, X: MultisortedStructure) -> bool:
    ego = X.ego
    pos = {M.id: k for k, M in enumerate(ego.sorts)}
    for s in ego.S:
        if any(alpha.at(pos[s.sort], i) != s.element for i in lift_singleton(s, X)):
            return False
    for g in ego.G:
        for i, j in lift_hom(g, X).items():
            if g.map[alpha.at(pos[g.dom_id], i)] != alpha.at(pos[g.cod_id], j):
                return False
    for r in ego.R:
        for i, j in lift_relation(r, X):
            if (alpha.at(pos[r.dom_sort], i), alpha.at(pos[r.cod_sort], j)) not in r.pairs:
                return False
    return True


def evaluation(a: int, X: MultisortedStructure) -> EgoMorphism:
    """e_A(a) = (x ↦ x(a))."""
    return EgoMorphism(tuple(tuple(x.map[a] for x in X.points[M.id]) for M in X.ego.sorts))


@dataclass(eq=False)
class SecondDual:
    algebra: FinAlgebra
    morphisms: tuple[EgoMorphism, ...]


def ed_algebra(A: FinAlgebra, ego: AlterEgo, *, X: MultisortedStructure | None = None,
               max_nodes: int = 10**6) -> SecondDual:
    """E(D(A)) with pointwise operations inherited from ∏ M^{X_M}."""
    X = X or dual_D(A, ego)
    morphs = ego_morphisms(X, max_nodes=max_nodes)
    index = {m: i for i, m in enumerate(morphs)}
    sig = A.signature
    tables = {}
    n = len(morphs)
    if n == 0:
        # E(D(A)) is empty only if something is badly wrong; keep the error explicit
        raise NotSurjective(f"no morphisms D({A.id}) → M~")
    for name, k in sig.ops:
        t = np.empty((n,) * k, dtype=np.int64)
        for combo in itertools.product(range(n), repeat=k):
            parts = []
            for sp, M in enumerate(ego.sorts):
                tab = M.tables[name]
                npts = len(X.points[M.id])
                parts.append(tuple(int(tab[tuple(morphs[c].images[sp][x] for c in combo)]) for x in range(npts)))
            m = EgoMorphism(tuple(parts))
            if m not in index:
                raise DualityError(f"E(D({A.id})) is not closed under {name}", witness=combo)
            t[combo] = index[m]
        tables[name] = t
    alg = FinAlgebra(f"ED({A.id})", n, sig, tables, validate=False)
    return SecondDual(alg, tuple(morphs))


@dataclass
class DualityWitness:
    algebra_id: str
    sizes: dict[str, int]
    ed_size: int
    evaluation: list[int]

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra_id,
            "sizes": self.sizes,
            "ed_size": self.ed_size,
            "verdict": "isomorphism",
            "witness": self.evaluation,
        }


def duality_check(A: FinAlgebra, ego: AlterEgo, *, max_nodes: int = 10**6) -> DualityWitness:
    """Verify that e_A: A → E(D(A)) is an isomorphism."""
    X = dual_D(A, ego)
    ED = ed_algebra(A, ego, X=X, max_nodes=max_nodes)
    index = {m: i for i, m in enumerate(ED.morphisms)}
    evals = [evaluation(a, X) for a in range(A.size)]
    seen: dict[EgoMorphism, int] = {}
    for a, e in enumerate(evals):
        if e in seen:
            raise NotInjective(f"e_A identifies {seen[e]} and {a}", witness=(seen[e], a))
        seen[e] = a
        if e not in index:
            raise DualityError(f"e_A({a}) does not preserve the alter ego structure", witness=a)
    missed = [m for m in ED.morphisms if m not in seen]
    if missed:
        raise NotSurjective(f"{len(missed)} morphism(s) D(A) → M~ are not evaluations", witness=missed[0])
    ev = [index[e] for e in evals]
    for name, k in A.signature.ops:
        for combo in itertools.product(range(A.size), repeat=k):
            if ev[A.tables[name][combo]] != ED.algebra.tables[name][tuple(ev[c] for c in combo)]:
                raise DualityError(f"e_A does not preserve {name} at {combo}", witness=(name, combo))
    return DualityWitness(A.id, X.sizes(), ED.algebra.size, ev)


def phi(x: Hom, w) -> tuple[int, ...]:
    """Φ_ω(x) = ω ∘ x as a bit vector over A."""
    return tuple(w.bits[v] for v in x.map)


def delta(alpha: EgoMorphism, X: MultisortedStructure, H: PointedPoset | None = None) -> tuple[int, ...]:
    """Δ(α)(ω ∘ x) := ω(α_M(x)), returned as one bit per point of H_u U(A).

    Checks that the definition is consistent, total, order-preserving and
    fixes the distinguished constants.
    """
    ego = X.ego
    H = H or hu_dual(X.algebra, ego.variant)
    where = {c.bits: i for i, c in enumerate(H.labels)}
    value: dict[int, int] = {}
    for sp, M in enumerate(ego.sorts):
        for w in ego.carriers[M.id]:
            for i, x in enumerate(X.points[M.id]):
                y = where[phi(x, w)]
                v = w.bits[alpha.at(sp, i)]
                if value.setdefault(y, v) != v:
                    raise WellDefinednessViolation(
                        f"Δ(α) gets two values at {H.labels[y].bits}", witness=(y, M.id, i))
    missing = sorted(set(range(H.size)) - set(value))
    if missing:
        raise NotJointlySurjective(
            f"{len(missing)} point(s) of H_u U(A) are not of the form ω∘x",
            witness=[H.labels[m].bits for m in missing])
    bits = tuple(value[i] for i in range(H.size))
    for i in range(H.size):
        for j in range(H.size):
            if H.leq[i, j] and bits[i] > bits[j]:
                raise DualityError("Δ(α) is not order-preserving", witness=(i, j))
    if H.top is not None and bits[H.top] != 1:
        raise DualityError("Δ(α) does not send the top to 1")
    if H.bottom is not None and bits[H.bottom] != 0:
        raise DualityError("Δ(α) does not send the bottom to 0")
    return bits
