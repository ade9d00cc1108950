import json

import pytest
from hypothesis import given, strategies as st

from helpers import instance
from lsalgebroid.bialgebroid import BialgebroidCandidate, SymTensor
from lsalgebroid.corpus import idempotent_point, tangent
from lsalgebroid.errors import SchemaError
from lsalgebroid.presymplectic import PreSymplecticStructure, Subbundle, explicit_from, star
from lsalgebroid.algebroid import semidirect_symplectic
from lsalgebroid.scalar import Base
from lsalgebroid.serialize import (
    algebroid_from_json,
    algebroid_to_json,
    christoffel_from_json,
    dumps,
    presymplectic_from_json,
    presymplectic_to_json,
    subbundle_from_json,
    subbundle_to_json,
    symmetric_from_json,
    symmetric_to_json,
)


def roundtrip(doc):
    return json.loads(dumps(doc))


def test_algebroid_roundtrip():
    for alg in (idempotent_point(), tangent(("x1", "x2"))):
        assert algebroid_from_json(roundtrip(algebroid_to_json(alg))) == alg


@given(st.integers(0, 5))
def test_random_instances_roundtrip(seed):
    alg = instance(seed)
    assert algebroid_from_json(roundtrip(algebroid_to_json(alg))) == alg


def test_parameters_field():
    doc = {"$schema_version": 1, "kind": "left-symmetric", "variables": ["x"], "parameters": ["t"],
           "rank": 1, "products": {"1,1": {"1": "t*x"}}}
    alg = algebroid_from_json(doc)
    assert alg.base.parameters == ("t",)
    assert algebroid_to_json(alg)["parameters"] == ["t"]


@pytest.mark.parametrize("doc, pointer", [
    ({"kind": "lie", "variables": [], "rank": 1}, ""),
    ({"$schema_version": 2, "kind": "lie", "variables": [], "rank": 1}, "/$schema_version"),
    ({"$schema_version": 1, "kind": "left-symmetric", "variables": [], "rank": 2,
      "products": {"1,3": {"1": "1"}}}, "/products/1,3"),
    ({"$schema_version": 1, "kind": "left-symmetric", "variables": ["x"], "rank": 1,
      "products": {"1,1": {"1": "y"}}}, "/products/1,1/1"),
    ({"$schema_version": 1, "kind": "left-symmetric", "variables": ["x"], "rank": 1,
      "anchor": {"1": {"y": "1"}}}, "/anchor/1/y"),
])
def test_schema_errors_carry_pointers(doc, pointer):
    with pytest.raises(SchemaError) as exc:
        algebroid_from_json(doc)
    assert exc.value.pointer == pointer
    assert str(exc.value).startswith(pointer or "/")


def test_symmetric_and_subbundle():
    b = Base(("x",))
    H = SymTensor.from_rows(b, [["x", 1], [1, "1/x"]])
    assert symmetric_from_json(roundtrip(symmetric_to_json(H)), b) == H
    with pytest.raises(SchemaError):
        symmetric_from_json({"$schema_version": 1, "matrix": [["1", "2"], ["3", "4"]]}, b)
    E = PreSymplecticStructure.from_bialgebroid(BialgebroidCandidate.trivial_dual(idempotent_point()))
    F = Subbundle.Astar(E)
    G = subbundle_from_json(roundtrip(subbundle_to_json(F)), E.base, E.size)
    assert G.matrix() == F.matrix()
    with pytest.raises(SchemaError):
        subbundle_from_json({"$schema_version": 1, "sections": [["1", "0"]]}, E.base, E.size)


def test_presymplectic_sources(tmp_path):
    cand = BialgebroidCandidate.trivial_dual(idempotent_point())
    E = PreSymplecticStructure.from_bialgebroid(cand)
    assert presymplectic_from_json(roundtrip(presymplectic_to_json(E))) == E
    S = PreSymplecticStructure.from_lie(*semidirect_symplectic(tangent(("x",))))
    assert presymplectic_from_json(roundtrip(presymplectic_to_json(S))) == S
    X = explicit_from(E)
    Y = presymplectic_from_json(roundtrip(presymplectic_to_json(X)))
    assert all(star(Y, Y.basis(a), Y.basis(b)) == star(X, X.basis(a), X.basis(b))
               for a in range(4) for b in range(4))
    (tmp_path / "A.json").write_text(dumps(algebroid_to_json(cand.A)))
    (tmp_path / "As.json").write_text(dumps(algebroid_to_json(cand.Astar)))
    doc = {"$schema_version": 1, "source": "bialgebroid", "A": "A.json", "Astar": "As.json"}
    assert presymplectic_from_json(doc, where=tmp_path) == E


def test_christoffel():
    b = Base(("x",))
    table = christoffel_from_json({"$schema_version": 1, "1,1": {"1": "1"}}, b)
    assert table[0][0][0] == b.one


def test_dumps_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
