"""Recovering the Priestley dual of an algebra's lattice reduct from its
natural dual: the pre-ordered set Y of (point, carrier) pairs, its quotient
Z, and the comparison map Ψ: [(x, ω)] ↦ ω ∘ x."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .finalg import FinAlgebra
from .natdual import MultisortedStructure, NotSurjective, dual_D, lift_relation, phi
from .piggyback import AlterEgo, Pointing
from .priestley import DualityError, PointedPoset, hu_dual


class PreorderViolation(DualityError):
    pass


class WrongPointing(DualityError):
    pass


class NotWellDefined(DualityError):
    pass


class NotOrderReflecting(DualityError):
    pass


@dataclass(frozen=True, order=True)
class YPoint:
    sort: str
    x: int
    carrier: int


@dataclass(eq=False)
class YSpace:
    points: tuple[YPoint, ...]
    prec: np.ndarray
    raw: np.ndarray
    X: MultisortedStructure

    @property
    def raw_reflexive(self) -> bool:
        return bool(self.raw.diagonal().all())

    @property
    def raw_transitive(self) -> bool:
        r = self.raw.astype(np.int64)
        return not (((r @ r) > 0) & ~self.raw).any()


def _transitive_closure(m: np.ndarray) -> np.ndarray:
    m = m | np.eye(m.shape[0], dtype=bool)
    while True:
        nxt = (m.astype(np.int64) @ m.astype(np.int64)) > 0
        if np.array_equal(nxt, m):
            return m
        m = nxt


def build_Y(A: FinAlgebra, ego: AlterEgo, *, X: MultisortedStructure | None = None,
            close: bool = False) -> YSpace:
    """Y = ⋃ X_M × Ω_M with (x,ω) ≼ (x',ω') iff (x,x') lies in the lifting of
    some relation for the carrier pair (ω, ω').

    The generated relation must already be a pre-order unless ``close`` is
    set, in which case its reflexive-transitive closure is taken (useful
    when R has been pruned by hand).
    """
    X = X or dual_D(A, ego)
    points = tuple(YPoint(M.id, i, c) for M in ego.sorts
                   for i in range(len(X.points[M.id])) for c in range(len(ego.carriers[M.id])))
    where = {p: k for k, p in enumerate(points)}
    n = len(points)
    raw = np.zeros((n, n), dtype=bool)
    for r in ego.R:
        for i, j in lift_relation(r, X):
            raw[where[YPoint(r.dom_sort, i, r.dom_carrier)], where[YPoint(r.cod_sort, j, r.cod_carrier)]] = True
    raw.setflags(write=False)
    Y = YSpace(points, raw, raw, X)
    if close:
        Y.prec = _transitive_closure(raw)
        return Y
    if not Y.raw_reflexive:
        k = int(np.flatnonzero(~raw.diagonal())[0])
        raise PreorderViolation(f"{points[k]} is not related to itself", witness=(points[k],))
    if not Y.raw_transitive:
        r = raw.astype(np.int64)
        i, k = map(int, np.argwhere(((r @ r) > 0) & ~raw)[0])
        j = int(np.flatnonzero(raw[i] & raw[:, k])[0])
        raise PreorderViolation("≼ is not transitive", witness=(points[i], points[j], points[k]))
    return Y


@dataclass(eq=False)
class QuotientPoset:
    poset: PointedPoset
    classes: tuple[tuple[int, ...], ...]
    member_class: tuple[int, ...]
    Y: YSpace

    def to_dot(self, name: str = "Z") -> str:
        labels = tuple(
            "{" + ", ".join(f"({p.sort},x{p.x},w{p.carrier})" for p in (self.Y.points[m] for m in cls)) + "}"
            for cls in self.classes
        )
        P = self.poset
        return PointedPoset(P.size, P.leq, P.top, P.bottom, labels, P.variant).to_dot(name)


def quotient_Z(Y: YSpace, pointing: Pointing | None = None) -> QuotientPoset:
    """Collapse ≈ = ≼ ∩ ≽ (the strongly connected components of ≼) and point
    the quotient with the classes of the constant maps onto the pointing
    singletons."""
    n = len(Y.points)
    if n:
        ncomp, labels = connected_components(csr_matrix(Y.prec), directed=True, connection="strong")
    else:
        ncomp, labels = 0, np.zeros(0, dtype=np.int64)
    # renumber classes by their least member
    first: dict[int, int] = {}
    for k, lab in enumerate(labels):
        first.setdefault(int(lab), k)
    order = sorted(first, key=first.get)
    renum = {lab: c for c, lab in enumerate(order)}
    member_class = tuple(renum[int(lab)] for lab in labels)
    classes = tuple(tuple(k for k in range(n) if member_class[k] == c) for c in range(ncomp))
    reps = [cls[0] for cls in classes]
    leq = Y.prec[np.ix_(reps, reps)] if reps else np.zeros((0, 0), dtype=bool)
    if ncomp and (leq & leq.T & ~np.eye(ncomp, dtype=bool)).any():
        raise DualityError("quotient order is not antisymmetric")

    top = bottom = None
    variant = "unpointed"
    if pointing is not None:
        X = Y.X
        where = {p: k for k, p in enumerate(Y.points)}

        def cls_of(w) -> int:
            x = next(i for i, h in enumerate(X.points[w.sort]) if all(v == w.element for v in h.map))
            return member_class[where[YPoint(w.sort, x, w.carrier)]]

        if pointing.s1 is not None:
            top = cls_of(pointing.s1)
            if not leq[:, top].all():
                raise WrongPointing(f"z_1 = class {top} is not the maximum", witness=top)
            variant = "upper-pointed"
        if pointing.s0 is not None:
            bottom = cls_of(pointing.s0)
            if not leq[bottom, :].all():
                raise WrongPointing(f"z_0 = class {bottom} is not the minimum", witness=bottom)
            variant = "doubly-pointed" if top is not None else "lower-pointed"
    P = PointedPoset(ncomp, leq, top, bottom, None, variant)
    return QuotientPoset(P, classes, member_class, Y)


@dataclass(eq=False)
class ReconcileWitness:
    Z: QuotientPoset
    H: PointedPoset
    psi: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "Y": len(self.Z.Y.points),
            "Z": self.Z.poset.size,
            "verdict": "isomorphism",
            "psi": [
                {"class": c, "members": [list((p.sort, p.x, p.carrier)) for p in (self.Z.Y.points[m] for m in cls)],
                 "image": "".join(map(str, self.H.labels[self.psi[c]].bits))}
                for c, cls in enumerate(self.Z.classes)
            ],
        }


def psi_images(Y: YSpace) -> list[tuple[int, ...]]:
    """ω ∘ x for every point (x, ω) of Y."""
    ego = Y.X.ego
    return [phi(Y.X.points[p.sort][p.x], ego.carriers[p.sort][p.carrier]) for p in Y.points]


def reconcile_check(A: FinAlgebra, ego: AlterEgo, *, close: bool = False) -> ReconcileWitness:
    """Verify Ψ: Z → H_u U(A) is a well-defined order-isomorphism sending
    z_1 ↦ 1̄ and z_0 ↦ 0̄."""
    Y = build_Y(A, ego, close=close)
    H = hu_dual(A, ego.variant)
    where = {c.bits: i for i, c in enumerate(H.labels)}
    Zu = quotient_Z(Y)
    imgs = [where[b] for b in psi_images(Y)]
    psi = []
    for c, cls in enumerate(Zu.classes):
        vals = {imgs[m] for m in cls}
        if len(vals) != 1:
            raise NotWellDefined(f"class {c} maps to {len(vals)} different carriers", witness=c)
        psi.append(vals.pop())
    missing = sorted(set(range(H.size)) - set(psi))
    if missing:
        raise NotSurjective(f"Ψ misses {len(missing)} point(s) of H_u U(A)",
                            witness=[H.labels[m].bits for m in missing])
    if len(set(psi)) != len(psi):
        raise NotOrderReflecting("Ψ identifies two classes")
    for i in range(len(psi)):
        for j in range(len(psi)):
            if bool(Zu.poset.leq[i, j]) != bool(H.leq[psi[i], psi[j]]):
                raise NotOrderReflecting(f"classes {i}, {j} compare differently under Ψ", witness=(i, j))
    Z = quotient_Z(Y, ego.pointing)
    if Z.poset.top is not None and psi[Z.poset.top] != H.top:
        raise WrongPointing("Ψ(z_1) is not the constant 1")
    if Z.poset.bottom is not None and psi[Z.poset.bottom] != H.bottom:
        raise WrongPointing("Ψ(z_0) is not the constant 0")
    return ReconcileWitness(Z, H, tuple(psi))
