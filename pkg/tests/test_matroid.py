from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uflpmc.field import field_new, next_prime
from uflpmc.gfmatrix import GFMatrix
from uflpmc.matroid import (
    Bond,
    DirectSum,
    Dual,
    FieldTooSmall,
    Free,
    Graphic,
    Linear,
    Multicolored,
    Oracle,
    Partition,
    Restriction,
    Truncation,
    UnionFree,
    Uniform,
    axioms_check,
    compile_linear,
    truncate_randomized,
    truncate_same_field,
    union_with_free,
)
from uflpmc.reductions import clique_client_matroid

K3 = [(0, 1), (1, 2), (0, 2)]


def subsets(labels):
    labels = sorted(labels)
    for k in range(len(labels) + 1):
        yield from (frozenset(s) for s in itertools.combinations(labels, k))


def same_as_matrix(m, mat: GFMatrix) -> bool:
    return all(m.is_independent(s) == mat.columns_independent(sorted(s)) for s in subsets(m.ground))


def test_uniform_independence():
    m = Uniform(range(5), 2)
    assert not m.is_independent({0, 1, 2})
    assert m.is_independent({3, 4})


def test_outside_ground_raises():
    with pytest.raises(ValueError):
        Uniform([1, 2], 1).is_independent({3})


def test_graphic_triangle():
    g = Graphic(3, K3, "xyz")
    assert all(g.is_independent(s) for s in itertools.combinations("xyz", 2))
    assert not g.is_independent("xyz")


def test_bond_triangle():
    b = Bond(3, K3, "xyz")
    assert all(b.is_independent({e}) for e in "xyz")
    assert not any(b.is_independent(s) for s in itertools.combinations("xyz", 2))


def test_bond_rejects_disconnected_graph():
    with pytest.raises(ValueError):
        Bond(4, [(0, 1), (2, 3)])


def test_compile_uniform_is_vandermonde():
    gf5 = field_new(5)
    mat = compile_linear(Uniform([1, 2, 3], 2), gf5)
    assert [[int(x) for x in row] for row in mat.data] == [[1, 1, 1], [1, 2, 3]]
    assert same_as_matrix(Uniform([1, 2, 3], 2), mat)


def test_compile_free_is_identity():
    mat = compile_linear(Free("ab"), field_new(2))
    assert [[int(x) for x in row] for row in mat.data] == [[1, 0], [0, 1]]


def test_compile_graphic_k3_over_gf3():
    g = Graphic(3, K3, "xyz")
    mat = compile_linear(g, field_new(3))
    assert mat.rank() == 2
    assert same_as_matrix(g, mat)


def test_field_too_small_for_uniform():
    with pytest.raises(FieldTooSmall):
        compile_linear(Uniform(range(6), 3), field_new(5))


def test_oracle_does_not_compile():
    with pytest.raises(TypeError):
        compile_linear(Oracle([1, 2], lambda s: len(s) <= 1), field_new(5))


def test_union_with_free_examples():
    u = Uniform("ab", 1)
    assert union_with_free(u, []).is_independent("a")
    assert not union_with_free(u, []).is_independent("ab")
    m = union_with_free(u, "c")
    assert m.is_independent("ac") and not m.is_independent("ab")
    freed = union_with_free(u, "b")
    assert freed.is_independent("ab")
    gf5 = field_new(5)
    for mm in (m, freed):
        assert same_as_matrix(mm, compile_linear(mm, gf5))


def random_structured(seed: int):
    rng = np.random.default_rng(seed)
    labels = list(range(int(rng.integers(2, 8))))
    kind = int(rng.integers(0, 6))
    if kind == 0:
        return Uniform(labels, int(rng.integers(0, len(labels) + 1)))
    if kind == 1:
        cut = int(rng.integers(1, len(labels)))
        return Partition([(labels[:cut], int(rng.integers(0, cut + 1))), (labels[cut:], 1)])
    if kind == 2:
        return Multicolored([labels[:1], labels[1:]])
    verts = int(rng.integers(2, 5))
    edges = [(int(rng.integers(0, verts)), int(rng.integers(0, verts))) for _ in labels]
    if kind == 3:
        return Graphic(verts, edges, labels)
    if kind == 4:
        # spanning path keeps the graph connected
        verts = min(verts, len(labels) + 1)
        path = [(i, i + 1) for i in range(verts - 1)]
        extra = edges[: max(0, len(labels) - len(path))]
        return Bond(verts, path + extra, labels[: len(path) + len(extra)])
    return DirectSum([Uniform(labels[:2], 1), Free(labels[2:])])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_compiled_matches_definition(seed):
    m = random_structured(seed)
    ctx = field_new(next_prime(max(11, len(m.ground) + 1)))
    assert same_as_matrix(m, compile_linear(m, ctx, rng=seed))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_dual_of_dual(seed):
    m = random_structured(seed)
    dd = Dual(Dual(m))
    assert all(dd.is_independent(s) == m.is_independent(s) for s in subsets(m.ground))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_dual_bases_are_complements(seed):
    m = random_structured(seed)
    d = Dual(m)
    r = m.rank()
    assert d.rank() == len(m.ground) - r
    for s in itertools.combinations(sorted(m.ground), r):
        assert m.is_independent(s) == d.is_independent(m.ground - set(s))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_structured_matroids_satisfy_axioms(seed):
    m = random_structured(seed)
    assert axioms_check(m).ok
    assert axioms_check(Dual(m)).ok


def test_restriction_and_truncation_semantics():
    m = Uniform(range(5), 3)
    r = Restriction(m, [0, 1])
    assert r.ground == frozenset({0, 1}) and r.is_independent({0, 1})
    t = Truncation(m, 2)
    assert t.is_independent({0, 1}) and not t.is_independent({0, 1, 2})


def test_axioms_check_examples():
    assert axioms_check(Uniform(range(5), 2)).ok
    bad = axioms_check(Oracle([1, 2], lambda s: len(s) == 1))
    assert not bad.ok and bad.axiom == 1
    not_closed = axioms_check(Oracle([1, 2], lambda s: len(s) != 1))
    assert not not_closed.ok and not_closed.axiom == 2
    with pytest.raises(ValueError):
        axioms_check(Free(range(17)))


def test_axioms_check_catches_exchange_failure():
    # {1,2} and {3} maximal: 3 cannot be exchanged into {1} or {2}
    sets = {frozenset(), frozenset({1}), frozenset({2}), frozenset({3}), frozenset({1, 2})}
    rep = axioms_check(Oracle([1, 2, 3], lambda s: s in sets))
    assert not rep.ok and rep.axiom == 3


def test_clique_oracle_is_a_matroid_on_k3():
    m = clique_client_matroid([0, 1, 2], K3, 2)
    assert len(m.ground) == 6
    assert axioms_check(m).ok


def _same_truncation(rep: GFMatrix, trunc: GFMatrix, k: int) -> bool:
    return all(
        trunc.columns_independent(s) == (len(s) <= k and rep.columns_independent(s))
        for s in subsets(rep.labels)
    )


def test_truncate_full_rank_keeps_matroid():
    rep = compile_linear(Graphic(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)], range(5)), field_new(7))
    out = truncate_randomized(rep, rep.rank(), rng=0)
    assert out.rank() == rep.rank()
    assert _same_truncation(rep, out, rep.rank())


def test_truncate_free_gives_uniform():
    rep = GFMatrix.identity(field_new(3), range(5))
    out = truncate_randomized(rep, 2, rng=1, eps_t=1e-6)
    assert out.rows == 2
    assert _same_truncation(rep, out, 2)


def test_truncate_uniform_4_3_to_2():
    rep = compile_linear(Uniform(range(4), 3), field_new(5))
    out = truncate_randomized(rep, 2, rng=2)
    assert _same_truncation(rep, out, 2)


def test_truncate_rank_too_large():
    rep = GFMatrix.identity(field_new(3), range(3))
    with pytest.raises(ValueError):
        truncate_randomized(rep, 4)


def test_truncate_same_field_shares_ctx():
    gf2 = field_new(2)
    a = GFMatrix.identity(gf2, range(4))
    b = GFMatrix(gf2, range(4), [[1, 1, 0, 0], [0, 1, 1, 1]])
    out = truncate_same_field([a, b], 2, rng=3, eps_t=1e-4)
    assert out[0].ctx == out[1].ctx
    assert out[0].ctx.order > 2
    assert all(o.rank() == 2 for o in out)


def test_truncate_same_field_uniform_ranks_3_and_4():
    gf7 = field_new(7)
    reps = [compile_linear(Uniform(range(6), 3), gf7), compile_linear(Uniform(range(6), 4), gf7)]
    out = truncate_same_field(reps, 2, rng=4)
    for rep, o in zip(reps, out):
        assert _same_truncation(rep, o, 2)


def test_linear_leaf_and_direct_sum():
    gf5 = field_new(5)
    mat = GFMatrix(gf5, "ab", [[1, 2]])
    m = DirectSum([Linear(mat), Free("c")])
    assert m.is_independent("ac") and not m.is_independent("ab")
    with pytest.raises(ValueError):
        DirectSum([Free("a"), Free("ab")])
    assert same_as_matrix(m, compile_linear(m, gf5))


def test_union_free_node_compiles():
    gf7 = field_new(7)
    m = UnionFree(Graphic(3, K3, "xyz"), "zw")
    # z is freed, so the triangle no longer closes a cycle
    assert m.is_independent("xyzw")
    assert same_as_matrix(m, compile_linear(m, gf7))
