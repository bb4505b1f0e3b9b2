import json

import numpy as np
import pytest
from hypothesis import given

from conftest import lattices
from pigdual import families as F
from pigdual.finalg import AlgebraError, Hom
from pigdual.piggyback import build_alter_ego
from pigdual.serialize import algebra_from_json, algebra_to_json, dumps, setup_from_json, setup_to_json


@given(lattices())
def test_algebra_round_trip(A):
    B = algebra_from_json(json.loads(dumps(algebra_to_json(A))))
    assert B.id == A.id and B.size == A.size
    assert all(np.array_equal(A.tables[k], B.tables[k]) for k in A.tables)


def test_sugihara_round_trip():
    A = F.sugihara_algebra(5)
    B = algebra_from_json(algebra_to_json(A))
    assert B.signature == A.signature
    assert np.array_equal(B.tables["imp"], A.tables["imp"])


def test_malformed_algebra():
    with pytest.raises(AlgebraError):
        algebra_from_json({"id": "x"})
    doc = algebra_to_json(F.chain(2))
    doc["tables"]["meet"] = [[0, 1], [1, 1]]
    with pytest.raises(AlgebraError):
        algebra_from_json(doc)


def test_setup_round_trip(kleene):
    doc = json.loads(dumps(setup_to_json(kleene.sorts, kleene.carriers, kleene.G)))
    sorts, carriers, G = setup_from_json(doc)
    assert [M.id for M in sorts] == ["3-", "3+"]
    assert G == [Hom("3-", "3+", (0, 1, 2)), Hom("3+", "3-", (0, 1, 2))]
    ego = build_alter_ego(sorts, G, carriers)
    assert len(ego.R) == 4


def test_setup_with_references(kleene):
    doc = {"sorts": [{"ref": "K"}], "carriers": {"K": [[0, 1, 1], [0, 0, 1]]}, "G": "all"}
    sorts, carriers, G = setup_from_json(doc, {"K": F.kleene3("K")})
    assert G == "all" and len(carriers["K"]) == 2
    with pytest.raises(AlgebraError):
        setup_from_json(doc)


def test_dumps_is_canonical():
    a = dumps({"b": 1, "a": (np.int64(2), frozenset({3, 1}))})
    assert a == dumps({"a": [2, [1, 3]], "b": 1})
    with pytest.raises(TypeError):
        dumps({"x": object()})
