"""Concrete algebras and duality setups: chains, Boolean lattices, the Kleene
3-chain, Sugihara chains Z_k and their piggyback configurations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .finalg import LATTICE, FinAlgebra, Hom, Signature, power, product
from .piggyback import (
    AlterEgo, MissingS0, MissingS1, SepFailed, add_trivial_sorts, all_inter_sort_homs,
    build_alter_ego, check_pointed, check_sep, trivial_algebra,
)
from .priestley import Carrier, hu_dual

KLEENE = Signature((("meet", 2), ("join", 2), ("neg", 1)))
SUGIHARA = Signature((("meet", 2), ("join", 2), ("neg", 1), ("imp", 2)))


def chain(n: int, new_id: str | None = None) -> FinAlgebra:
    """The n-element chain 0 < 1 < ... < n-1 as a lattice."""
    idx = np.arange(n)
    return FinAlgebra(new_id or f"C{n}", n, LATTICE,
                      {"meet": np.minimum.outer(idx, idx), "join": np.maximum.outer(idx, idx)})


def boolean_lattice(k: int) -> FinAlgebra:
    return power(chain(2), k).renamed(f"2^{k}")


def kleene3(new_id: str = "3") -> FinAlgebra:
    """{0 < a < 1} with ¬0 = 1, ¬a = a, ¬1 = 0; indices 0, 1, 2."""
    idx = np.arange(3)
    return FinAlgebra(new_id, 3, KLEENE, {
        "meet": np.minimum.outer(idx, idx),
        "join": np.maximum.outer(idx, idx),
        "neg": idx[::-1].copy(),
    })


def sugihara_values(k: int) -> list[int]:
    if k < 2:
        raise ValueError("Sugihara chains need k >= 2")
    n = k // 2
    return [v for v in range(-n, n + 1) if k % 2 or v != 0]


def sugihara_imp(a: int, b: int) -> int:
    """a → b on the integers: (−a) ∨ b if a ≤ b, else (−a) ∧ b."""
    return max(-a, b) if a <= b else min(-a, b)


def sugihara_algebra(k: int, new_id: str | None = None) -> FinAlgebra:
    """Z_k: the k-element symmetric integer chain (0 omitted when k is even)
    with ¬a = −a and the Sugihara implication.  Index i holds
    ``sugihara_values(k)[i]``."""
    vals = sugihara_values(k)
    pos = {v: i for i, v in enumerate(vals)}
    idx = np.arange(k)
    imp = np.array([[pos[sugihara_imp(a, b)] for b in vals] for a in vals])
    return FinAlgebra(new_id or f"Z{k}", k, SUGIHARA, {
        "meet": np.minimum.outer(idx, idx),
        "join": np.maximum.outer(idx, idx),
        "neg": np.array([pos[-v] for v in vals]),
        "imp": imp,
    })


def carrier_from_predicate(M: FinAlgebra, values: list[int], pred) -> Carrier:
    return Carrier(M.id, tuple(int(bool(pred(v))) for v in values))


@dataclass(eq=False)
class FamilySetup:
    name: str
    sorts: tuple[FinAlgebra, ...]
    carriers: dict[str, tuple[Carrier, ...]]
    G: tuple[Hom, ...]
    notes: str = ""
    certified: bool = True
    extras: dict = field(default_factory=dict)

    def alter_ego(self) -> AlterEgo:
        return build_alter_ego(self.sorts, self.G, self.carriers)

    def to_json(self) -> dict:
        from .serialize import setup_to_json
        return setup_to_json(self.sorts, self.carriers, self.G)


def _certify(setup: FamilySetup, pointed: bool = True) -> FamilySetup:
    w = check_sep(setup.sorts, setup.G, setup.carriers)
    if w is not None:
        raise SepFailed(f"{setup.name}: separation fails at {w}", w)
    if pointed:
        p = check_pointed(setup.sorts, setup.carriers)
        if p.s1 is None:
            raise MissingS1(f"{setup.name}: no pointing for 1")
        if p.s0 is None:
            raise MissingS0(f"{setup.name}: no pointing for 0")
    return setup


def kleene_setup() -> FamilySetup:
    """Two copies 3-, 3+ of the Kleene chain; α- sends a to 1, α+ sends a to 0;
    G holds the identity maps between the copies."""
    lo, hi = kleene3("3-"), kleene3("3+")
    carriers = {
        "3-": (Carrier("3-", (0, 1, 1)),),
        "3+": (Carrier("3+", (0, 0, 1)),),
    }
    G = (Hom("3-", "3+", (0, 1, 2)), Hom("3+", "3-", (0, 1, 2)))
    return _certify(FamilySetup("kleene", (lo, hi), carriers, G,
                                notes="Kleene lattices, two sorts, one carrier each"))


def _odd_sorts(k: int, prefix: str = "P"):
    lo, hi = sugihara_algebra(k, f"{prefix}-"), sugihara_algebra(k, f"{prefix}+")
    vals = sugihara_values(k)
    carriers = {
        lo.id: (carrier_from_predicate(lo, vals, lambda v: v >= 0),),
        hi.id: (carrier_from_predicate(hi, vals, lambda v: v >= 1),),
    }
    return [lo, hi], carriers


def sugihara_setup(mode: str, n: int, *, trivial_sorts: bool = True, G=None) -> FamilySetup:
    """Sugihara configurations.

    ``odd``: sorts P-, P+ ≅ Z_{2n+1}, α-(a) = 1 iff a ≥ 0, α+(a) = 1 iff a ≥ 1.
    ``even``: P-, P+ ≅ Z_{2n-1} with the odd carriers plus Q ≅ Z_{2n} with
    β(a) = 1 iff a > 0.
    ``isp-even``: one copy of Z_{2n} per non-constant carrier, plus two
    1-element sorts unless ``trivial_sorts`` is False.
    G defaults to all homomorphisms between sorts.
    """
    if mode == "odd":
        if n < 1:
            raise ValueError("odd Sugihara setups need n >= 1")
        sorts, carriers = _odd_sorts(2 * n + 1)
        setup = FamilySetup(f"sugihara-odd:{n}", tuple(sorts), carriers,
                            tuple(all_inter_sort_homs(sorts)) if G is None else tuple(G),
                            notes=f"ISP(Z_{2 * n + 1}), two sorts")
        return _certify(setup)
    if mode == "even":
        if n < 2:
            raise ValueError("even Sugihara setups need n >= 2")
        sorts, carriers = _odd_sorts(2 * n - 1)
        Q = sugihara_algebra(2 * n, "Q")
        carriers["Q"] = (carrier_from_predicate(Q, sugihara_values(2 * n), lambda v: v > 0),)
        sorts.append(Q)
        setup = FamilySetup(f"sugihara-even:{n}", tuple(sorts), carriers,
                            tuple(all_inter_sort_homs(sorts)) if G is None else tuple(G),
                            notes=f"HSP(Z_{2 * n}) = ISP(Z_{2 * n}, Z_{2 * n - 1}), three sorts")
        return _certify(setup)
    if mode == "isp-even":
        if n < 2:
            raise ValueError("even Sugihara setups need n >= 2")
        Z = sugihara_algebra(2 * n)
        nonconst = [c for c in hu_dual(Z).labels if not c.is_constant]
        sorts, carriers = [], {}
        for i, c in enumerate(nonconst):
            sid = f"Z{2 * n}#{i}"
            sorts.append(Z.renamed(sid))
            carriers[sid] = (Carrier(sid, c.bits),)
        if trivial_sorts:
            sorts, carriers = add_trivial_sorts(sorts, carriers)
        sorts = tuple(sorts)
        setup = FamilySetup(
            f"sugihara-isp-even:{n}", sorts, carriers,
            tuple(all_inter_sort_homs(sorts)) if G is None else tuple(G),
            notes=f"ISP(Z_{2 * n}) brute force: {len(nonconst)} copies of Z_{2 * n}"
                  + (" plus two 1-element sorts" if trivial_sorts else ""),
            certified=trivial_sorts,
        )
        return _certify(setup, pointed=trivial_sorts)
    raise ValueError(f"unknown Sugihara mode {mode!r}")


def single_sort_setup(M: FinAlgebra, *, nonconstant_only: bool = True) -> FamilySetup:
    """One sort carrying all (non-constant) carriers; not certified."""
    cs = tuple(c for c in hu_dual(M).labels if not (nonconstant_only and c.is_constant))
    cs = tuple(Carrier(M.id, c.bits) for c in cs)
    return FamilySetup(f"single:{M.id}", (M,), {M.id: cs}, tuple(all_inter_sort_homs([M])),
                       notes="single sort, all non-constant carriers", certified=False)


def family(spec: str) -> FamilySetup:
    """Parse ``kleene``, ``sugihara-odd:N``, ``sugihara-even:N``,
    ``sugihara-isp-even:N`` or ``sugihara-isp-even-bare:N``."""
    name, _, arg = spec.partition(":")
    if name == "kleene":
        return kleene_setup()
    if name == "sugihara-odd":
        return sugihara_setup("odd", int(arg or 1))
    if name == "sugihara-even":
        return sugihara_setup("even", int(arg or 2))
    if name == "sugihara-isp-even":
        return sugihara_setup("isp-even", int(arg or 2))
    if name == "sugihara-isp-even-bare":
        return sugihara_setup("isp-even", int(arg or 2), trivial_sorts=False)
    raise ValueError(f"unknown family {spec!r}")


__all__ = [
    "KLEENE", "SUGIHARA", "FamilySetup", "boolean_lattice", "chain", "family", "kleene3",
    "kleene_setup", "product", "single_sort_setup", "sugihara_algebra", "sugihara_imp",
    "sugihara_setup", "sugihara_values", "trivial_algebra",
]
