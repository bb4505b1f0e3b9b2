"""Finite algebras given by operation tables.

Elements of an algebra of size ``n`` are the indices ``0..n-1``.  Every
signature carries two binary operations that must form a distributive
lattice; all other operations are arbitrary total tables.

The search primitives here (closure, homomorphism enumeration, maximal
subuniverses inside a prescribed set) are what the duality modules are
built from.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class AlgebraError(ValueError):
    """Malformed algebra, signature mismatch or bad argument."""


class ResourceLimitExceeded(RuntimeError):
    """A search or construction would exceed its configured size bound."""


@dataclass(frozen=True)
class Signature:
    ops: tuple[tuple[str, int], ...]
    meet: str = "meet"
    join: str = "join"

    def __post_init__(self):
        names = [name for name, _ in self.ops]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate operation names in {names}")
        arities = dict(self.ops)
        for name in (self.meet, self.join):
            if arities.get(name) != 2:
                raise AlgebraError(f"lattice operation {name!r} must be declared binary")
        if any(k < 0 for k in arities.values()):
            raise AlgebraError("arities must be non-negative")

    def arity(self, name: str) -> int:
        return dict(self.ops)[name]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.ops)


LATTICE = Signature((("meet", 2), ("join", 2)))


@dataclass(eq=False)
class FinAlgebra:
    """A finite algebra with a distributive-lattice reduct.

    ``tables[name]`` is an integer array of shape ``(size,) * arity``.
    """

    id: str
    size: int
    signature: Signature
    tables: dict[str, np.ndarray]
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.size < 1:
            raise AlgebraError("an algebra needs at least one element")
        tables = {}
        for name, k in self.signature.ops:
            if name not in self.tables:
                raise AlgebraError(f"{self.id}: missing table for {name!r}")
            t = np.asarray(self.tables[name], dtype=np.int64)
            if t.shape != (self.size,) * k:
                raise AlgebraError(
                    f"{self.id}: table {name!r} has shape {t.shape}, expected {(self.size,) * k}"
                )
            if t.size and (t.min() < 0 or t.max() >= self.size):
                raise AlgebraError(f"{self.id}: table {name!r} has entries out of range")
            t.setflags(write=False)
            tables[name] = t
        extra = set(self.tables) - set(self.signature.names)
        if extra:
            raise AlgebraError(f"{self.id}: tables for undeclared operations {sorted(extra)}")
        self.tables = tables
        if self.validate:
            check_distributive_lattice(self)

    def __repr__(self):
        return f"FinAlgebra({self.id!r}, size={self.size}, ops={list(self.signature.names)})"

    def __len__(self):
        return self.size

    @property
    def meet(self) -> np.ndarray:
        return self.tables[self.signature.meet]

    @property
    def join(self) -> np.ndarray:
        return self.tables[self.signature.join]

    @cached_property
    def leq(self) -> np.ndarray:
        """Lattice order: ``leq[x, y]`` iff ``x ∧ y == x``."""
        m = self.meet
        idx = np.arange(self.size)
        out = m == idx[:, None]
        out.setflags(write=False)
        return out

    @cached_property
    def top(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=0))[0])

    @cached_property
    def bottom(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=1))[0])

    def apply(self, name: str, *args: int) -> int:
        return int(self.tables[name][tuple(args)])

    def renamed(self, new_id: str) -> "FinAlgebra":
        return FinAlgebra(new_id, self.size, self.signature, dict(self.tables), validate=False)


def check_distributive_lattice(A: FinAlgebra) -> None:
    """Raise ``AlgebraError`` unless meet/join form a distributive lattice."""
    m, j = A.meet, A.join
    n = A.size
    idx = np.arange(n)
    problems = []
    if not (np.array_equal(m[idx, idx], idx) and np.array_equal(j[idx, idx], idx)):
        problems.append("idempotence")
    if not (np.array_equal(m, m.T) and np.array_equal(j, j.T)):
        problems.append("commutativity")
    # m[m[x,y], z] vs m[x, m[y,z]]
    if not np.array_equal(m[m[:, :, None], idx[None, None, :]], m[idx[:, None, None], m[None, :, :]]):
        problems.append("meet associativity")
    if not np.array_equal(j[j[:, :, None], idx[None, None, :]], j[idx[:, None, None], j[None, :, :]]):
        problems.append("join associativity")
    if not (np.array_equal(m[idx[:, None], j], np.broadcast_to(idx[:, None], (n, n)))
            and np.array_equal(j[idx[:, None], m], np.broadcast_to(idx[:, None], (n, n)))):
        problems.append("absorption")
    # x ∧ (y ∨ z) == (x ∧ y) ∨ (x ∧ z)
    lhs = m[idx[:, None, None], j[None, :, :]]
    rhs = j[m[:, :, None], m[:, None, :]]
    if not np.array_equal(lhs, rhs):
        problems.append("distributivity")
    if problems:
        raise AlgebraError(f"{A.id}: lattice reduct fails {', '.join(problems)}")


def lattice_reduct(A: FinAlgebra) -> FinAlgebra:
    """The ∧/∨ reduct, with operations renamed to ``meet``/``join``."""
    return FinAlgebra(
        f"U({A.id})", A.size, LATTICE,
        {"meet": A.meet, "join": A.join}, validate=False,
    )


def _same_signature(A: FinAlgebra, B: FinAlgebra) -> None:
    if A.signature != B.signature:
        raise AlgebraError(f"signature mismatch between {A.id!r} and {B.id!r}")


# -- homomorphisms ---------------------------------------------------------

@dataclass(frozen=True, order=True)
class Hom:
    dom_id: str
    cod_id: str
    map: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.map[a]

    def compose(self, other: "Hom") -> "Hom":
        """``self ∘ other``."""
        return Hom(other.dom_id, self.cod_id, tuple(self.map[b] for b in other.map))


def is_hom(f: Hom | Sequence[int], A: FinAlgebra, B: FinAlgebra) -> bool:
    _same_signature(A, B)
    fmap = np.asarray(f.map if isinstance(f, Hom) else f, dtype=np.int64)
    if fmap.shape != (A.size,):
        raise AlgebraError(f"map has length {fmap.size}, expected {A.size}")
    if fmap.min() < 0 or fmap.max() >= B.size:
        return False
    for name, k in A.signature.ops:
        ta, tb = A.tables[name], B.tables[name]
        if k == 0:
            if fmap[ta[()]] != tb[()]:
                return False
            continue
        # f(t_A(a1..ak)) == t_B(f(a1)..f(ak)) for all tuples
        lhs = fmap[ta]
        rhs = tb[np.ix_(*([fmap] * k))]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def _propagate(A: FinAlgebra, B: FinAlgebra, img: np.ndarray) -> bool:
    """Extend the partial map ``img`` (-1 = unset) to the subuniverse its
    domain generates.  Returns False on an operation violation."""
    while True:
        known = np.flatnonzero(img >= 0)
        grew = False
        for name, k in A.signature.ops:
            ta, tb = A.tables[name], B.tables[name]
            if k == 0:
                vals = np.array([ta[()]])
                imgs = np.array([tb[()]])
            else:
                if known.size == 0:
                    continue
                vals = ta[np.ix_(*([known] * k))].ravel()
                imgs = tb[np.ix_(*([img[known]] * k))].ravel()
            fresh = img[vals] < 0
            if fresh.any():
                img[vals[fresh]] = imgs[fresh]
                grew = True
            if not np.array_equal(img[vals], imgs):
                return False
        if not grew:
            return True


def generating_set(A: FinAlgebra) -> list[int]:
    """Greedy generating set: keep adding the least element outside the closure."""
    gens: list[int] = []
    covered = np.zeros(A.size, dtype=bool)
    # constants generate something even with no generators
    base = _closure(A, np.zeros(A.size, dtype=bool))
    covered |= base
    while not covered.all():
        g = int(np.flatnonzero(~covered)[0])
        gens.append(g)
        covered[g] = True
        covered = _closure(A, covered)
    return gens


def hom_set(A: FinAlgebra, B: FinAlgebra) -> list[Hom]:
    """All homomorphisms A → B, sorted lexicographically by map."""
    _same_signature(A, B)
    gens = generating_set(A)
    out: list[Hom] = []

    def search(i: int, img: np.ndarray) -> None:
        if i == len(gens):
            out.append(Hom(A.id, B.id, tuple(int(v) for v in img)))
            return
        g = gens[i]
        if img[g] >= 0:  # already forced by earlier generators
            search(i + 1, img)
            return
        for b in range(B.size):
            trial = img.copy()
            trial[g] = b
            if _propagate(A, B, trial):
                search(i + 1, trial)

    start = np.full(A.size, -1, dtype=np.int64)
    if _propagate(A, B, start):
        search(0, start)
    out.sort()
    return out


# -- subuniverses ----------------------------------------------------------

@dataclass(frozen=True)
class SubUniverse:
    parent_id: str
    members: tuple[int, ...]

    def __len__(self):
        return len(self.members)

    def __contains__(self, a):
        return a in self.members


def _closure(A: FinAlgebra, mask: np.ndarray) -> np.ndarray:
    mask = mask.copy()
    while True:
        members = np.flatnonzero(mask)
        grew = False
        for name, k in A.signature.ops:
            t = A.tables[name]
            if k == 0:
                vals = np.array([t[()]])
            elif members.size == 0:
                continue
            else:
                vals = t[np.ix_(*([members] * k))].ravel()
            if not mask[vals].all():
                mask[vals] = True
                grew = True
        if not grew:
            return mask


def _mask(A: FinAlgebra, elems: Iterable[int]) -> np.ndarray:
    mask = np.zeros(A.size, dtype=bool)
    for a in elems:
        if not 0 <= a < A.size:
            raise AlgebraError(f"element {a} outside {A.id!r}")
        mask[a] = True
    return mask


def subuniverse_generated(A: FinAlgebra, seed: Iterable[int]) -> SubUniverse:
    seed = list(seed)
    if not seed:
        raise AlgebraError("seed must be non-empty")
    mask = _closure(A, _mask(A, seed))
    return SubUniverse(A.id, tuple(int(a) for a in np.flatnonzero(mask)))


def is_closed(A: FinAlgebra, elems: Iterable[int]) -> bool:
    mask = _mask(A, elems)
    return bool(np.array_equal(_closure(A, mask), mask))


def _violation(A: FinAlgebra, mask: np.ndarray) -> tuple[int, ...] | None:
    """Arguments of one operation instance with arguments inside ``mask`` and
    value outside, or None if ``mask`` is closed.  A nullary violation
    returns the empty tuple."""
    members = np.flatnonzero(mask)
    for name, k in A.signature.ops:
        t = A.tables[name]
        if k == 0:
            if not mask[t[()]]:
                return ()
            continue
        if members.size == 0:
            continue
        block = t[np.ix_(*([members] * k))]
        bad = np.argwhere(~mask[block])
        if bad.size:
            return tuple(int(members[i]) for i in bad[0])
    return None


def one_element_subuniverses(A: FinAlgebra) -> tuple[int, ...]:
    out = []
    for d in range(A.size):
        ok = True
        for name, k in A.signature.ops:
            if A.tables[name][(d,) * k] != d:
                ok = False
                break
        if ok:
            out.append(d)
    return tuple(out)


def maximal_subuniverses_within(A: FinAlgebra, allowed: Iterable[int]) -> list[SubUniverse]:
    """Inclusion-maximal non-empty subuniverses of A contained in ``allowed``.

    Branch-and-remove: a closed candidate is a result; otherwise some
    operation instance has all arguments inside and its value outside, so
    every subuniverse of the candidate misses at least one of those
    arguments, and we branch on which one.
    """
    start = frozenset(int(a) for a in allowed)
    for a in start:
        if not 0 <= a < A.size:
            raise AlgebraError(f"element {a} outside {A.id!r}")
    seen: set[frozenset[int]] = set()
    closed: list[frozenset[int]] = []
    stack = [start]
    while stack:
        cand = stack.pop()
        if cand in seen or not cand:
            continue
        seen.add(cand)
        if any(cand <= c for c in closed):
            continue
        witness = _violation(A, _mask(A, cand))
        if witness is None:
            closed.append(cand)
            continue
        for a in sorted(set(witness), reverse=True):
            stack.append(cand - {a})
    maximal = [c for c in closed if not any(c < d for d in closed)]
    return sorted(
        (SubUniverse(A.id, tuple(sorted(c))) for c in set(maximal)),
        key=lambda s: s.members,
    )


def subuniverses(A: FinAlgebra) -> list[SubUniverse]:
    """All non-empty subuniverses, ordered by size then members."""
    found: set[tuple[int, ...]] = set()
    frontier = [subuniverse_generated(A, [a]).members for a in range(A.size)]
    while frontier:
        nxt = []
        for s in frontier:
            if s in found:
                continue
            found.add(s)
            inside = set(s)
            for a in range(A.size):
                if a not in inside:
                    nxt.append(subuniverse_generated(A, s + (a,)).members)
        frontier = nxt
    return [SubUniverse(A.id, s) for s in sorted(found, key=lambda s: (len(s), s))]


def subalgebra(A: FinAlgebra, sub: SubUniverse | Iterable[int], new_id: str | None = None) -> FinAlgebra:
    """The subalgebra on ``sub``, re-indexed in increasing member order."""
    members = sub.members if isinstance(sub, SubUniverse) else tuple(sorted(set(sub)))
    if not is_closed(A, members):
        raise AlgebraError(f"{members} is not a subuniverse of {A.id!r}")
    pos = np.full(A.size, -1, dtype=np.int64)
    pos[list(members)] = np.arange(len(members))
    idx = np.asarray(members)
    tables = {}
    for name, k in A.signature.ops:
        t = A.tables[name]
        tables[name] = pos[t] if k == 0 else pos[t[np.ix_(*([idx] * k))]]
    return FinAlgebra(new_id or f"{A.id}|{list(members)}", len(members), A.signature, tables, validate=False)


# -- products and free algebras --------------------------------------------

@dataclass(eq=False, repr=False)
class ProductAlgebra(FinAlgebra):
    factors: tuple[FinAlgebra, ...] = ()

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(F.size for F in self.factors)

    def encode(self, t: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(t), self.shape))

    def decode(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in np.unravel_index(i, self.shape))


def product(algebras: Sequence[FinAlgebra], new_id: str | None = None) -> ProductAlgebra:
    algebras = tuple(algebras)
    if not algebras:
        raise AlgebraError("product of an empty family")
    for B in algebras[1:]:
        _same_signature(algebras[0], B)
    sig = algebras[0].signature
    shape = tuple(B.size for B in algebras)
    n = int(np.prod(shape))
    coords = np.unravel_index(np.arange(n), shape)  # per factor: coordinate of each element
    tables = {}
    for name, k in sig.ops:
        if k == 0:
            tables[name] = np.asarray(
                np.ravel_multi_index(tuple(B.tables[name][()] for B in algebras), shape))
            continue
        parts = []
        for i, B in enumerate(algebras):
            c = coords[i]
            parts.append(B.tables[name][np.ix_(*([c] * k))])
        tables[name] = np.ravel_multi_index(tuple(parts), shape)
    pid = new_id or "×".join(B.id for B in algebras)
    return ProductAlgebra(pid, n, sig, tables, validate=False, factors=algebras)


def power(A: FinAlgebra, k: int) -> ProductAlgebra:
    if k < 1:
        raise AlgebraError("power exponent must be positive")
    return product([A] * k, new_id=f"{A.id}^{k}")


@dataclass(eq=False, repr=False)
class FreeAlgebra(FinAlgebra):
    generators: tuple[int, ...] = ()
    vectors: tuple[tuple[int, ...], ...] = ()


DEFAULT_MAX_CELLS = 10**7


def free_algebra(sorts: Sequence[FinAlgebra], k: int, *, max_cells: int = DEFAULT_MAX_CELLS,
                 new_id: str | None = None) -> FreeAlgebra:
    """Free algebra on ``k`` generators in ISP(sorts).

    Realised as the subalgebra of ∏_M M^(M^k) generated by the coordinate
    projections.  The closure runs on coordinate vectors so the ambient power
    is never tabulated; ``max_cells`` bounds both the coordinate count and the
    operation tables of the result.
    """
    sorts = tuple(sorts)
    if k < 1:
        raise AlgebraError("need at least one generator")
    if not sorts:
        raise AlgebraError("need at least one sort")
    for B in sorts[1:]:
        _same_signature(sorts[0], B)
    sig = sorts[0].signature
    ncoords = sum(B.size ** k for B in sorts)
    if ncoords > max_cells:
        raise ResourceLimitExceeded(f"free algebra needs {ncoords} coordinates > max_cells={max_cells}")
    max_arity = max([a for _, a in sig.ops] + [1])

    # coordinate blocks, one per sort; block i holds all k-tuples over sort i
    blocks = [np.array(list(itertools.product(range(B.size), repeat=k)), dtype=np.int64).reshape(-1, k)
              for B in sorts]
    gens = [np.concatenate([blk[:, g] for blk in blocks]) for g in range(k)]
    bounds = np.cumsum([0] + [blk.shape[0] for blk in blocks])

    def apply(name: str, args: list[np.ndarray]) -> np.ndarray:
        # args: (rows, ncoords) arrays; evaluated block by block
        out = np.empty(args[0].shape, dtype=np.int64) if args else None
        for i, B in enumerate(sorts):
            lo, hi = bounds[i], bounds[i + 1]
            out[:, lo:hi] = B.tables[name][tuple(x[:, lo:hi] for x in args)]
        return out

    def constant(name: str) -> np.ndarray:
        out = np.empty(ncoords, dtype=np.int64)
        for i, B in enumerate(sorts):
            out[bounds[i]:bounds[i + 1]] = B.tables[name][()]
        return out

    # rows are deduplicated through a random linear hash; every hash hit is
    # confirmed by comparing the rows themselves
    weights = np.random.default_rng(0).integers(1, 2**62, size=ncoords, dtype=np.int64)
    rows: list[np.ndarray] = []
    by_hash: dict[int, list[int]] = {}

    def hashes(m: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            return (m * weights).sum(axis=1)

    def add_rows(m: np.ndarray) -> list[int]:
        hm = hashes(m)
        _, first, inv = np.unique(hm, return_index=True, return_inverse=True)
        inv = inv.reshape(-1)
        # rows sharing a hash with their batch representative but differing from it
        clash = np.flatnonzero(~(m == m[first[inv]]).all(axis=1))
        keep = np.concatenate([first, clash])
        added = []
        for v, h in zip(m[keep], hm[keep].tolist()):
            bucket = by_hash.setdefault(h, [])
            if any(np.array_equal(rows[j], v) for j in bucket):
                continue
            bucket.append(len(rows))
            added.append(len(rows))
            rows.append(v.copy())
            if len(rows) ** max_arity > max_cells:
                raise ResourceLimitExceeded(
                    f"free algebra exceeds max_cells={max_cells} (more than {len(rows)} elements)")
        return added

    chunk = max(1, (1 << 22) // max(ncoords, 1))

    def combos(pools: list[np.ndarray]):
        """Chunks of index tuples from the product of ``pools``."""
        shape = tuple(len(q) for q in pools)
        total = int(np.prod(shape)) if shape else 1
        for start in range(0, total, chunk):
            flat = np.arange(start, min(total, start + chunk))
            yield [q[i] for q, i in zip(pools, np.unravel_index(flat, shape))]

    new = add_rows(np.stack(gens))
    for name, a in sig.ops:
        if a == 0:
            new += add_rows(constant(name)[None, :])
    # semi-naive closure: position p holds the first new argument
    while new:
        E = np.stack(rows)
        n_all, new_arr = len(rows), np.array(new)
        old_arr = np.setdiff1d(np.arange(n_all), new_arr)
        fresh = []
        for name, a in sig.ops:
            for p in range(a):
                pools = [old_arr] * p + [new_arr] + [np.arange(n_all)] * (a - p - 1)
                for idx in combos(pools):
                    fresh += add_rows(apply(name, [E[i] for i in idx]))
        new = fresh

    E = np.stack(rows)
    order = np.lexsort(E.T[::-1])
    E = E[order]
    vecs = tuple(tuple(int(x) for x in v) for v in E)
    h = hashes(E)
    h_order = np.argsort(h, kind="stable")
    h_sorted = h[h_order]

    def locate(m: np.ndarray) -> np.ndarray:
        hm = hashes(m)
        pos = np.searchsorted(h_sorted, hm)
        idx = h_order[np.minimum(pos, len(h_sorted) - 1)]
        bad = ~(E[idx] == m).all(axis=1)
        for r in np.flatnonzero(bad):
            idx[r] = next(j for j in range(len(E)) if np.array_equal(E[j], m[r]))
        return idx

    tables = {}
    for name, a in sig.ops:
        if a == 0:
            tables[name] = np.asarray(int(locate(constant(name)[None, :])[0]))
            continue
        t = np.empty(len(vecs) ** a, dtype=np.int64)
        pos = 0
        for idx in combos([np.arange(len(vecs))] * a):
            res = locate(apply(name, [E[i] for i in idx]))
            t[pos:pos + len(res)] = res
            pos += len(res)
        tables[name] = t.reshape((len(vecs),) * a)
    index = {v: i for i, v in enumerate(vecs)}
    gen_idx = tuple(index[tuple(int(x) for x in g)] for g in gens)
    fid = new_id or f"F({','.join(B.id for B in sorts)};{k})"
    return FreeAlgebra(fid, len(vecs), sig, tables, validate=False,
                       generators=gen_idx, vectors=tuple(vecs))
