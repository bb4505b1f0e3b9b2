import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import hom_pairs, lattices, with_unary
from pigdual import families as F
from pigdual.finalg import (
    LATTICE, AlgebraError, FinAlgebra, Hom, ResourceLimitExceeded, free_algebra, generating_set,
    hom_set, is_closed, is_hom, maximal_subuniverses_within, one_element_subuniverses, power,
    product, subalgebra, subuniverse_generated, subuniverses,
)


# --- construction -----------------------------------------------------------

def test_rejects_non_lattice():
    bad = np.array([[0, 0], [1, 1]])
    with pytest.raises(AlgebraError):
        FinAlgebra("bad", 2, LATTICE, {"meet": bad, "join": bad})


def test_rejects_non_distributive_lattice():
    # M3: bottom 0, atoms 1,2,3, top 4
    n = 5
    meet = np.zeros((n, n), dtype=int)
    join = np.full((n, n), 4)
    for i in range(n):
        meet[i, i] = join[i, i] = i
        meet[i, 4] = meet[4, i] = i
        join[i, 0] = join[0, i] = i
    with pytest.raises(AlgebraError):
        FinAlgebra("M3", n, LATTICE, {"meet": meet, "join": join})


def test_rejects_out_of_range_table():
    with pytest.raises(AlgebraError):
        FinAlgebra("x", 2, LATTICE, {"meet": np.array([[0, 0], [0, 2]]), "join": np.array([[0, 1], [1, 1]])})


def test_tables_read_only(K3):
    with pytest.raises(ValueError):
        K3.tables["neg"][0] = 1


def test_kleene_order(K3):
    assert K3.bottom == 0 and K3.top == 2
    assert K3.leq[0, 1] and K3.leq[1, 2] and not K3.leq[2, 1]


# --- is_hom -----------------------------------------------------------------

def test_is_hom_identity(K3):
    assert is_hom(Hom("3", "3", (0, 1, 2)), K3, K3)


def test_is_hom_constant_a(K3):
    assert is_hom(Hom("3", "3", (1, 1, 1)), K3, K3)


def test_is_hom_negation_map_fails(K3):
    assert not is_hom(Hom("3", "3", (2, 1, 0)), K3, K3)


# --- subuniverses -----------------------------------------------------------

def test_generated_singleton_a(K3):
    assert subuniverse_generated(K3, [1]).members == (1,)


def test_generated_zero_in_z3():
    Z3 = F.sugihara_algebra(3)
    assert subuniverse_generated(Z3, [1]).members == (1,)  # index 1 holds the value 0


def test_generated_in_cube(K3):
    P = power(K3, 3)
    sub = subuniverse_generated(P, [P.encode((0, 1, 2))])
    assert sorted(P.decode(m) for m in sub.members) == [(0, 1, 0), (0, 1, 2), (2, 1, 0), (2, 1, 2)]


def test_generated_empty_seed(K3):
    with pytest.raises(AlgebraError):
        subuniverse_generated(K3, [])


def test_one_element_subuniverses():
    assert one_element_subuniverses(F.kleene3()) == (1,)
    assert one_element_subuniverses(F.sugihara_algebra(3)) == (1,)
    assert one_element_subuniverses(F.sugihara_algebra(4)) == ()


@given(lattices(), st.data())
def test_closure_is_closed_idempotent_monotone(L, data):
    A = data.draw(with_unary(L))
    s = data.draw(st.sets(st.integers(0, A.size - 1), min_size=1))
    t = data.draw(st.sets(st.integers(0, A.size - 1), min_size=1))
    cs = subuniverse_generated(A, s).members
    assert is_closed(A, cs)
    assert set(s) <= set(cs)
    assert subuniverse_generated(A, cs).members == cs
    assert set(cs) <= set(subuniverse_generated(A, s | t).members)


@given(st.data())
def test_subuniverses_match_oracle(data):
    A = data.draw(with_unary(data.draw(lattices())))
    assert {frozenset(S.members) for S in subuniverses(A)} == set(oracles.brute_subuniverses(A))


# --- hom_set ----------------------------------------------------------------

def test_hom_set_kleene():
    K = F.kleene3()
    assert [h.map for h in hom_set(K, K)] == [(0, 1, 2), (1, 1, 1)]
    assert [h.map for h in hom_set(K, K)] == oracles.brute_homs(K, K)


def test_hom_set_z3():
    Z3 = F.sugihara_algebra(3)
    assert [h.map for h in hom_set(Z3, Z3)] == [(0, 1, 2), (1, 1, 1)]
    assert [h.map for h in hom_set(Z3, Z3)] == oracles.brute_homs(Z3, Z3)


def test_hom_set_z4_rigid():
    Z4 = F.sugihara_algebra(4)
    assert [h.map for h in hom_set(Z4, Z4)] == [(0, 1, 2, 3)]


def test_hom_set_z4_to_z3():
    Z3, Z4 = F.sugihara_algebra(3), F.sugihara_algebra(4)
    assert [h.map for h in hom_set(Z4, Z3)] == oracles.brute_homs(Z4, Z3) == [(0, 1, 1, 2), (1, 1, 1, 1)]


def test_hom_set_signature_mismatch():
    with pytest.raises(AlgebraError):
        hom_set(F.chain(2), F.kleene3())


@given(hom_pairs())
def test_hom_set_matches_full_map_filter(pair):
    A, B = pair
    got = [h.map for h in hom_set(A, B)]
    assert got == oracles.brute_homs(A, B)
    assert all(is_hom(Hom(A.id, B.id, f), A, B) for f in got)


@given(st.data())
def test_generating_set_generates(data):
    A = data.draw(with_unary(data.draw(lattices())))
    gens = generating_set(A)
    assert subuniverse_generated(A, gens).members == tuple(range(A.size))


# --- maximal subuniverses ---------------------------------------------------

def test_maximal_full_universe(K3):
    assert [S.members for S in maximal_subuniverses_within(K3, range(3))] == [(0, 1, 2)]


def test_maximal_kleene_alpha_minus(K3):
    P = product([K3, K3])
    am = (0, 1, 1)
    allowed = [P.encode((a, b)) for a in range(3) for b in range(3) if am[a] <= am[b]]
    got = maximal_subuniverses_within(P, allowed)
    assert len(got) == 1
    assert sorted(P.decode(m) for m in got[0].members) == [(0, 0), (0, 1), (1, 1), (2, 1), (2, 2)]


def test_maximal_z3_minus_plus():
    # P^- carrier: a >= 0, P^+ carrier: a >= 1, values (-1, 0, 1)
    Z3 = F.sugihara_algebra(3)
    P = product([Z3, Z3])
    am, ap = (0, 1, 1), (0, 0, 1)
    allowed = [P.encode((a, b)) for a in range(3) for b in range(3) if am[a] <= ap[b]]
    got = [sorted(P.decode(m) for m in S.members) for S in maximal_subuniverses_within(P, allowed)]
    assert got == [[(0, 0), (2, 2)]]
    assert {frozenset(P.encode(p) for p in S) for S in got} == oracles.brute_maximal_within(P, allowed)


def _all_allowed_sets(n):
    for mask in range(1, 1 << n):
        yield [i for i in range(n) if mask >> i & 1]


@pytest.mark.parametrize("base", ["kleene", "z3"])
def test_maximal_exhaustive_on_squares(base):
    M = F.kleene3() if base == "kleene" else F.sugihara_algebra(3)
    P = power(M, 2)
    subs = oracles.brute_subuniverses(P)
    for allowed in _all_allowed_sets(P.size):
        got = {frozenset(S.members) for S in maximal_subuniverses_within(P, allowed)}
        assert got == oracles.brute_maximal_within(P, allowed, subs), allowed


@given(st.data())
def test_maximal_within_random(data):
    A = data.draw(with_unary(data.draw(lattices())))
    allowed = data.draw(st.sets(st.integers(0, A.size - 1)))
    got = {frozenset(S.members) for S in maximal_subuniverses_within(A, allowed)}
    assert got == oracles.brute_maximal_within(A, allowed)


# --- products ---------------------------------------------------------------

def test_product_of_two_chains():
    P = product([F.chain(2), F.chain(2)])
    assert P.size == 4
    assert oracles.lattice_homs_to_2(P) == oracles.lattice_homs_to_2(F.boolean_lattice(2))


def test_componentwise_meet(K3):
    P = power(K3, 2)
    assert P.decode(P.meet[P.encode((0, 2)), P.encode((2, 0))]) == (0, 0)


@given(st.lists(st.sampled_from([F.chain(2), F.chain(3), F.kleene3()]), min_size=1, max_size=3).filter(
    lambda fs: len({f.signature for f in fs}) == 1))
def test_product_codec_round_trip(factors):
    P = product(factors)
    for t in itertools.product(*(range(f.size) for f in factors)):
        assert P.decode(P.encode(t)) == t
    for name, k in P.signature.ops:
        for args in itertools.product(range(P.size), repeat=k):
            want = tuple(f.tables[name][tuple(P.decode(a)[i] for a in args)] for i, f in enumerate(factors))
            assert P.decode(P.tables[name][args]) == want


def test_subalgebra_reindexes(K3):
    P = power(K3, 2)
    sub = subuniverse_generated(P, [P.encode((0, 2))])
    S = subalgebra(P, sub, "S")
    assert S.size == len(sub.members)
    assert oracles.brute_homs(S, P)  # the inclusion at least


# --- free algebras ----------------------------------------------------------

def test_free_kleene_one():
    Fr = free_algebra([F.kleene3()], 1)
    assert Fr.size == 4 == oracles.free_size(F.kleene3(), 1)


def test_free_two_chain():
    assert free_algebra([F.chain(2)], 1).size == 1
    assert free_algebra([F.chain(2)], 2).size == 4


def test_free_distributive_lattices():
    # unbounded free distributive lattices on 1..4 generators
    assert [free_algebra([F.chain(2)], k).size for k in (1, 2, 3, 4)] == [1, 4, 18, 166]


def test_free_kleene_two_matches_oracle():
    assert free_algebra([F.kleene3()], 2).size == oracles.free_size(F.kleene3(), 2) == 82


@pytest.mark.parametrize("M", [F.kleene3(), F.sugihara_algebra(3), F.chain(3)], ids=lambda M: M.id)
def test_free_universal_property_one(M):
    Fr = free_algebra([M], 1)
    assert len(hom_set(Fr, M)) == M.size


def test_free_generators_are_projections():
    Fr = free_algebra([F.kleene3()], 2)
    x, y = (Fr.vectors[g] for g in Fr.generators)
    assert x == tuple(a for a in range(3) for _ in range(3))
    assert y == tuple(b for _ in range(3) for b in range(3))


def test_free_resource_limit():
    with pytest.raises(ResourceLimitExceeded):
        free_algebra([F.kleene3()], 3, max_cells=10**4)
    with pytest.raises(ResourceLimitExceeded):
        free_algebra([F.kleene3()], 9, max_cells=10**4)


def test_free_multisorted_dedupes_identical_coordinates(kleene):
    assert free_algebra(kleene.sorts, 1).size == 4
