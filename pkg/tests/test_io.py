from __future__ import annotations

import json

import pytest

from uflpmc import io
from uflpmc.battery import corpus
from uflpmc.field import field_new
from uflpmc.gfmatrix import GFMatrix
from uflpmc.matroid import (
    Bond,
    DirectSum,
    Dual,
    Free,
    Graphic,
    Linear,
    Multicolored,
    Partition,
    Restriction,
    Truncation,
    UnionFree,
    Uniform,
)
from uflpmc.reductions import clique_to_uflp
from uflpmc.uflp import make_solution

GF4 = field_new(2, 2)

MATROIDS = [
    Uniform([1, 2, 3], 2),
    Partition([([1, 2], 1), ([3], 1)]),
    Multicolored([[1], [2, 3]]),
    Free([4, 5]),
    Graphic(3, [(0, 1), (1, 2), (0, 2)], [1, 2, 3]),
    Bond(3, [(0, 1), (1, 2), (0, 2)], [1, 2, 3]),
    Linear(GFMatrix(GF4, [1, 2, 3], [[1, 0, 1], [0, 1, GF4([0, 1])]])),
    Dual(Uniform([1, 2, 3], 1)),
    Truncation(Free([1, 2, 3]), 2),
    UnionFree(Uniform([1, 2], 1), [3]),
    DirectSum([Uniform([1], 1), Free([2])]),
    Restriction(Uniform([1, 2, 3], 2), [1, 3]),
]


def _subsets(ground):
    items = sorted(ground)
    for mask in range(1 << len(items)):
        yield {items[i] for i in range(len(items)) if mask >> i & 1}


@pytest.mark.parametrize("m", MATROIDS, ids=lambda m: type(m).__name__)
def test_matroid_round_trip(m):
    doc = io.matroid_to_json(m)
    jsonschema_ok = io._validate(doc, io.SCHEMAS["matroid"], "test")
    assert jsonschema_ok is None
    back = io.matroid_from_json(json.loads(json.dumps(doc)))
    assert back.ground == m.ground
    assert all(back.is_independent(s) == m.is_independent(s) for s in _subsets(m.ground))


@pytest.mark.parametrize("name,inst", corpus(0), ids=lambda x: x if isinstance(x, str) else "")
def test_instance_round_trip(name, inst):
    doc = io.instance_to_json(inst)
    io._validate(doc, io.SCHEMAS["instance"], name)
    back = io.instance_from_json(json.loads(io.dumps(doc)))
    assert back.n == inst.n and back.costs == inst.costs and back.profits == inst.profits
    assert io.instance_to_json(back) == doc


def test_clique_instance_rebuilds_oracle():
    inst = clique_to_uflp("abc", [("a", "b"), ("b", "c"), ("a", "c")], 2)
    back = io.instance_from_json(json.loads(io.dumps(io.instance_to_json(inst))))
    assert len(back.client_matroids) == len(inst.client_matroids)
    s = {4, 5, 6, 7}
    assert back.client_matroids[-1].is_independent(s) == inst.client_matroids[-1].is_independent(s)


def test_solution_round_trip():
    inst = corpus(0)[0][1]
    sol = make_solution(inst, [1], [3], probabilistic=True, epsilon=1e-6, seed=4)
    back = io.solution_from_json(io.solution_to_json(sol))
    assert back == sol


def test_schema_error_reports_path(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "costs": [0, "x"], "profits": []}))
    with pytest.raises(io.InputError, match=r"\$\.costs\[1\]"):
        io.load_json(path, "instance")


def test_json_syntax_error_reports_location(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"n": 2,')
    with pytest.raises(io.InputError, match="broken.json:1"):
        io.load_json(path, "instance")


def test_missing_file(tmp_path):
    with pytest.raises(io.InputError):
        io.load_json(tmp_path / "nope.json", "instance")


def test_unknown_matroid_kind():
    with pytest.raises(io.InputError):
        io._validate({"kind": "mystery"}, io.SCHEMAS["matroid"], "x")
