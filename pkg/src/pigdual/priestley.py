"""Finite-level Priestley duality for distributive lattices without bounds
(doubly-pointed duals) and with a top only (upper-pointed duals).

At finite scale every space is discrete, so a dual is just a finite poset
with distinguished extremes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .finalg import AlgebraError, FinAlgebra, LATTICE, Hom, hom_set, lattice_reduct

Variant = Literal["Du", "D1"]
VARIANTS = ("Du", "D1")


class DualityError(RuntimeError):
    """A duality certificate failed; carries a human-readable witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, order=True)
class Carrier:
    """A lattice homomorphism from a sort's reduct into 2, as a bit vector."""

    source_id: str
    bits: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.bits[a]

    def compose(self, f: Hom) -> "Carrier":
        """``self ∘ f`` as a carrier on the domain of ``f``."""
        return Carrier(f.dom_id, tuple(self.bits[b] for b in f.map))

    @property
    def is_constant(self) -> bool:
        return len(set(self.bits)) <= 1


def two_chain() -> FinAlgebra:
    """The lattice 2 = ({0,1}; ∧, ∨)."""
    return FinAlgebra("2", 2, LATTICE, {"meet": [[0, 0], [0, 1]], "join": [[0, 1], [1, 1]]})


def is_carrier(c: Carrier | Sequence[int], B: FinAlgebra, variant: Variant = "Du") -> bool:
    bits = np.asarray(c.bits if isinstance(c, Carrier) else c, dtype=np.int64)
    if bits.shape != (B.size,) or not np.isin(bits, (0, 1)).all():
        return False
    if not (np.array_equal(bits[B.meet], np.minimum.outer(bits, bits))
            and np.array_equal(bits[B.join], np.maximum.outer(bits, bits))):
        return False
    return variant == "Du" or bits[B.top] == 1


@dataclass(eq=False)
class PointedPoset:
    size: int
    leq: np.ndarray
    top: int | None = None
    bottom: int | None = None
    labels: tuple | None = None
    variant: Literal["doubly-pointed", "upper-pointed", "lower-pointed", "unpointed"] = "unpointed"

    def __post_init__(self):
        leq = np.asarray(self.leq, dtype=bool)
        if leq.shape != (self.size, self.size):
            raise AlgebraError(f"order matrix has shape {leq.shape}, expected {(self.size, self.size)}")
        if not leq.diagonal().all():
            raise AlgebraError("order is not reflexive")
        if (leq & leq.T & ~np.eye(self.size, dtype=bool)).any():
            raise AlgebraError("order is not antisymmetric")
        if ((leq.astype(np.int64) @ leq.astype(np.int64) > 0) & ~leq).any():
            raise AlgebraError("order is not transitive")
        if self.top is not None and not leq[:, self.top].all():
            raise AlgebraError(f"{self.top} is not the maximum")
        if self.bottom is not None and not leq[self.bottom, :].all():
            raise AlgebraError(f"{self.bottom} is not the minimum")
        leq.setflags(write=False)
        self.leq = leq

    def __len__(self):
        return self.size

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges ``(i, j)`` with i ⋖ j."""
        lt = self.leq & ~np.eye(self.size, dtype=bool)
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        return [(int(i), int(j)) for i, j in np.argwhere(lt & ~between)]

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "covers": [list(e) for e in self.covers()],
            "top": self.top,
            "bottom": self.bottom,
            "labels": [_label_str(l) for l in self.labels] if self.labels is not None else None,
        }

    def to_dot(self, name: str = "P") -> str:
        lines = [f"digraph {_dot_id(name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
        for i in range(self.size):
            label = _label_str(self.labels[i]) if self.labels is not None else str(i)
            attrs = [f'label="{_escape(label)}"']
            if i == self.top:
                attrs.append("shape=doublecircle")
            if i == self.bottom:
                attrs.append("shape=box")
            lines.append(f"  n{i} [{', '.join(attrs)}];")
        for i, j in self.covers():
            lines.append(f"  n{i} -> n{j} [arrowhead=none];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def poset_from_json(doc: dict) -> PointedPoset:
    n = int(doc["size"])
    leq = np.eye(n, dtype=bool)
    for i, j in doc.get("covers", []):
        leq[i, j] = True
    # reflexive-transitive closure by repeated squaring
    while True:
        nxt = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
        if np.array_equal(nxt, leq):
            break
        leq = nxt
    top, bottom = doc.get("top"), doc.get("bottom")
    variant = ("doubly-pointed" if top is not None and bottom is not None
               else "upper-pointed" if top is not None else "unpointed")
    labels = doc.get("labels")
    return PointedPoset(n, leq, top, bottom, tuple(labels) if labels else None, variant)


def _label_str(label) -> str:
    if isinstance(label, Carrier):
        return "".join(map(str, label.bits))
    return str(label)


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _dot_id(name: str) -> str:
    return '"' + _escape(name) + '"'


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def hu_dual(B: FinAlgebra, variant: Variant = "Du") -> PointedPoset:
    """The poset of lattice homomorphisms B → 2 under the pointwise order.

    Computed by generic homomorphism search on the lattice reduct.  For
    ``D1`` only maps sending the top of B to 1 are kept and the dual is
    upper-pointed.
    """
    _check_variant(variant)
    U = lattice_reduct(B)
    homs = hom_set(U, two_chain())
    if variant == "D1":
        homs = [h for h in homs if h.map[B.top] == 1]
    bits = np.array([h.map for h in homs], dtype=np.int64).reshape(len(homs), B.size)
    leq = (bits[:, None, :] <= bits[None, :, :]).all(axis=2)
    labels = tuple(Carrier(B.id, h.map) for h in homs)
    top = labels.index(Carrier(B.id, (1,) * B.size))
    if variant == "Du":
        bottom = labels.index(Carrier(B.id, (0,) * B.size))
        return PointedPoset(len(homs), leq, top, bottom, labels, "doubly-pointed")
    return PointedPoset(len(homs), leq, top, None, labels, "upper-pointed")


def upsets(Y: PointedPoset) -> list[frozenset[int]]:
    """All up-sets of Y, sorted by their bitmask."""
    n = Y.size
    # visit elements from the top down so an element's upper cone is decided first
    height = Y.leq.sum(axis=0)
    order = sorted(range(n), key=lambda i: (-int(height[i]), i))
    above = [np.flatnonzero(Y.leq[i]).tolist() for i in range(n)]
    out = []

    def rec(k: int, chosen: set[int]):
        if k == n:
            out.append(frozenset(chosen))
            return
        x = order[k]
        rec(k + 1, chosen)
        if all(y in chosen for y in above[x] if y != x):
            chosen.add(x)
            rec(k + 1, chosen)
            chosen.discard(x)

    rec(0, set())
    return sorted(out, key=lambda s: sum(1 << i for i in s))


def ku_dual(Y: PointedPoset, variant: Variant = "Du") -> FinAlgebra:
    """The lattice of morphisms Y → 2~, i.e. up-sets containing the top and,
    for ``Du``, omitting the bottom.  Element ``i`` is ``ku_upsets(Y)[i]``."""
    sets = ku_upsets(Y, variant)
    index = {s: i for i, s in enumerate(sets)}
    n = len(sets)
    meet = np.empty((n, n), dtype=np.int64)
    join = np.empty((n, n), dtype=np.int64)
    for i, s in enumerate(sets):
        for j, t in enumerate(sets):
            meet[i, j] = index[s & t]
            join[i, j] = index[s | t]
    return FinAlgebra(f"K({variant})", n, LATTICE, {"meet": meet, "join": join})


def ku_upsets(Y: PointedPoset, variant: Variant = "Du") -> list[frozenset[int]]:
    _check_variant(variant)
    if Y.top is None:
        raise DualityError("dual space has no distinguished top")
    if variant == "Du" and Y.bottom is None:
        raise DualityError("doubly-pointed dual needs a distinguished bottom")
    keep = []
    for s in upsets(Y):
        if Y.top not in s:
            continue
        if variant == "Du" and Y.bottom in s:
            continue
        keep.append(s)
    return keep


def double_dual_check(B: FinAlgebra, variant: Variant = "Du") -> list[int]:
    """Verify the evaluation b ↦ {ω : ω(b) = 1} is a lattice isomorphism
    B → K(H(B)); returns it as a list of element indices of K(H(B))."""
    Y = hu_dual(B, variant)
    sets = ku_upsets(Y, variant)
    index = {s: i for i, s in enumerate(sets)}
    L = ku_dual(Y, variant)
    ev = []
    for b in range(B.size):
        s = frozenset(i for i, w in enumerate(Y.labels) if w.bits[b] == 1)
        if s not in index:
            raise DualityError(f"evaluation of {b} is not an admissible up-set", witness=b)
        ev.append(index[s])
    if len(set(ev)) != B.size:
        a, b = next((a, b) for a in range(B.size) for b in range(a) if ev[a] == ev[b])
        raise DualityError(f"evaluation not injective: {b} and {a} collide", witness=(b, a))
    if len(ev) != L.size:
        missing = sorted(set(range(L.size)) - set(ev))
        raise DualityError(f"evaluation misses {len(missing)} elements", witness=missing)
    for a in range(B.size):
        for b in range(B.size):
            if ev[B.meet[a, b]] != L.meet[ev[a], ev[b]] or ev[B.join[a, b]] != L.join[ev[a], ev[b]]:
                raise DualityError(f"evaluation does not preserve the pair ({a}, {b})", witness=(a, b))
    return ev


def join_irreducibles(B: FinAlgebra) -> list[int]:
    """Non-bottom elements that are not the join of two strictly smaller ones."""
    out = []
    for j in range(B.size):
        if j == B.bottom:
            continue
        below = [x for x in range(B.size) if B.leq[x, j] and x != j]
        if not any(B.join[x, y] == j for x in below for y in below):
            out.append(j)
    return out


def _fingerprint(P: PointedPoset) -> list[tuple[int, int, int]]:
    lt = P.leq & ~np.eye(P.size, dtype=bool)
    covers = np.zeros_like(lt)
    for i, j in P.covers():
        covers[i, j] = True
    # height = length of the longest chain below
    height = [0] * P.size
    for i in sorted(range(P.size), key=lambda i: int(lt[:, i].sum())):
        below = np.flatnonzero(lt[:, i])
        height[i] = 1 + max((height[b] for b in below), default=-1)
    return [(int(covers[:, i].sum()), int(covers[i, :].sum()), height[i]) for i in range(P.size)]


def poset_order_iso(P: PointedPoset, Q: PointedPoset) -> list[int] | None:
    """Least (lexicographic) order-isomorphism P → Q respecting distinguished
    points, or None."""
    if P.size != Q.size:
        return None
    for attr in ("top", "bottom"):
        if (getattr(P, attr) is None) != (getattr(Q, attr) is None):
            return None
    fp, fq = _fingerprint(P), _fingerprint(Q)
    if sorted(fp) != sorted(fq):
        return None
    n = P.size
    forced = {}
    if P.top is not None:
        forced[P.top] = Q.top
    if P.bottom is not None:
        forced[P.bottom] = Q.bottom
    img = [-1] * n
    used = [False] * n

    def rec(i: int) -> bool:
        if i == n:
            return True
        cands = [forced[i]] if i in forced else range(n)
        for q in cands:
            if used[q] or fp[i] != fq[q]:
                continue
            if any(P.leq[i, k] != Q.leq[q, img[k]] or P.leq[k, i] != Q.leq[img[k], q] for k in range(i)):
                continue
            img[i], used[q] = q, True
            if rec(i + 1):
                return True
            img[i], used[q] = -1, False
        return False

    return img if rec(0) else None


def chain_poset(n: int, variant: str = "doubly-pointed") -> PointedPoset:
    leq = np.triu(np.ones((n, n), dtype=bool))
    top = n - 1
    bottom = 0 if variant == "doubly-pointed" else None
    return PointedPoset(n, leq, top, bottom, None, variant)
