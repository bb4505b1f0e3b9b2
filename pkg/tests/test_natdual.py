import itertools

import pytest

import oracles
from pigdual import families as F
from pigdual.finalg import Hom, power, subalgebra, subuniverses
from pigdual.natdual import (
    NotSurjective, delta, dual_D, duality_check, ed_algebra, ego_morphisms, evaluation, lift,
    preserves_structure,
)
from pigdual.piggyback import Singleton, add_trivial_sorts, assemble_alter_ego, build_alter_ego, trivial_algebra
from pigdual.priestley import hu_dual


def test_dual_of_kleene_three(kleene_ego, K3):
    X = dual_D(K3, kleene_ego)
    assert {s: [h.map for h in hs] for s, hs in X.points.items()} == {
        "3-": [(0, 1, 2), (1, 1, 1)], "3+": [(0, 1, 2), (1, 1, 1)]}
    assert X.total == 4


def test_dual_of_trivial(kleene_ego, K3):
    X = dual_D(trivial_algebra(K3), kleene_ego)
    assert {s: [h.map for h in hs] for s, hs in X.points.items()} == {"3-": [(1,)], "3+": [(1,)]}


def test_dual_of_z3(odd1):
    X = dual_D(F.sugihara_algebra(3), odd1.alter_ego())
    assert X.sizes() == {"P-": 2, "P+": 2}


def test_lift_identity(kleene_ego, K3):
    X = dual_D(K3, kleene_ego)
    assert lift(Hom("3-", "3+", (0, 1, 2)), X) == {0: 0, 1: 1}


def test_lift_singleton(kleene_ego, K3):
    X = dual_D(K3, kleene_ego)
    assert lift(Singleton("3-", 1), X) == {1}


def test_lift_relation_on_trivial(kleene_ego, K3):
    X = dual_D(trivial_algebra(K3), kleene_ego)
    for r in kleene_ego.R:
        assert lift(r, X) == ({(0, 0)} if (1, 1) in r.pairs else set())


def test_lift_rejects_unknown(kleene_ego, K3):
    with pytest.raises(TypeError):
        lift("x", dual_D(K3, kleene_ego))


@pytest.mark.parametrize("A,size", [
    (F.kleene3(), 3), (trivial_algebra(F.kleene3()), 1), (power(F.kleene3(), 2), 9)], ids=["3", "1", "3^2"])
def test_second_dual_size(kleene_ego, A, size):
    assert ed_algebra(A, kleene_ego).algebra.size == size


def _kleene_instances():
    K = F.kleene3()
    P = power(K, 2)
    subs = [subalgebra(P, S, f"S{i}") for i, S in enumerate(subuniverses(P))]
    return [K, trivial_algebra(K)] + subs


@pytest.mark.parametrize("A", _kleene_instances(), ids=lambda A: A.id)
def test_morphisms_match_exhaustive_search(kleene_ego, A):
    X = dual_D(A, kleene_ego)
    got = sorted(m.images for m in ego_morphisms(X))
    assert got == oracles.ego_morphisms_brute(X)
    assert all(preserves_structure(m, X) for m in ego_morphisms(X))


def test_morphisms_match_exhaustive_search_odd(odd1):
    ego = odd1.alter_ego()
    for A in (F.sugihara_algebra(3), power(F.sugihara_algebra(3), 2)):
        X = dual_D(A, ego)
        assert sorted(m.images for m in ego_morphisms(X)) == oracles.ego_morphisms_brute(X)


def test_duality_kleene(kleene_ego, K3):
    w = duality_check(K3, kleene_ego)
    assert w.ed_size == 3 and sorted(w.evaluation) == [0, 1, 2]


def test_duality_z5(odd2):
    assert duality_check(F.sugihara_algebra(5), odd2.alter_ego()).ed_size == 5


def test_stripped_singletons_break_trivial(kleene):
    ego = assemble_alter_ego(kleene.sorts, kleene.G, kleene.carriers, S=())
    with pytest.raises(NotSurjective):
        duality_check(trivial_algebra(F.kleene3()), ego)


def test_evaluation_injective_without_pointing():
    fs = F.single_sort_setup(F.sugihara_algebra(4))
    ego = assemble_alter_ego(fs.sorts, fs.G, fs.carriers)
    for A in (F.sugihara_algebra(4), power(F.sugihara_algebra(4), 2)):
        X = dual_D(A, ego)
        evs = [evaluation(a, X) for a in range(A.size)]
        assert len(set(evs)) == A.size


def test_duality_beyond_certified_hypotheses():
    # single-sort {Z_4} fails (S1)/(S0) yet still dualises these algebras
    fs = F.single_sort_setup(F.sugihara_algebra(4))
    ego = assemble_alter_ego(fs.sorts, fs.G, fs.carriers)
    assert duality_check(F.sugihara_algebra(4), ego).ed_size == 4
    assert duality_check(trivial_algebra(F.sugihara_algebra(4)), ego).ed_size == 1


# --- Δ ----------------------------------------------------------------------

def _delta_is_k(A, ego):
    X = dual_D(A, ego)
    H = hu_dual(A, ego.variant)
    for a in range(A.size):
        assert delta(evaluation(a, X), X, H) == tuple(c.bits[a] for c in H.labels)


def test_delta_kleene_at_a(kleene_ego, K3):
    X = dual_D(K3, kleene_ego)
    H = hu_dual(K3)
    bits = delta(evaluation(1, X), X, H)
    value = {c.bits: b for c, b in zip(H.labels, bits)}
    assert value == {(0, 0, 0): 0, (0, 0, 1): 0, (0, 1, 1): 1, (1, 1, 1): 1}


@pytest.mark.parametrize("A", _kleene_instances(), ids=lambda A: A.id)
def test_delta_of_evaluation_is_priestley_evaluation(kleene_ego, A):
    _delta_is_k(A, kleene_ego)


def test_delta_on_trivial(kleene_ego, K3):
    A = trivial_algebra(K3)
    X = dual_D(A, kleene_ego)
    H = hu_dual(A)
    for m in ego_morphisms(X):
        bits = delta(m, X, H)
        assert bits[H.top] == 1 and bits[H.bottom] == 0 and len(bits) == 2


def test_delta_on_every_morphism_is_monotone(kleene_ego):
    A = power(F.kleene3(), 2)
    X = dual_D(A, kleene_ego)
    H = hu_dual(A)
    for m in ego_morphisms(X):
        bits = delta(m, X, H)
        for i, j in itertools.product(range(H.size), repeat=2):
            if H.leq[i, j]:
                assert bits[i] <= bits[j]


def test_delta_sugihara_with_trivial_sorts():
    fs = F.single_sort_setup(F.sugihara_algebra(4))
    sorts, cs = add_trivial_sorts(fs.sorts, fs.carriers)
    ego = build_alter_ego(sorts, "all", cs)
    for A in (F.sugihara_algebra(4), trivial_algebra(F.sugihara_algebra(4))):
        _delta_is_k(A, ego)
        assert duality_check(A, ego).ed_size == A.size


def test_witness_json(kleene_ego, K3):
    doc = duality_check(K3, kleene_ego).to_json()
    assert doc["verdict"] == "isomorphism" and doc["ed_size"] == 3
