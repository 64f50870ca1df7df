from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uflpmc.field import field_new
from uflpmc.gfmatrix import GFMatrix, block_diag


def subsets(labels):
    for k in range(len(labels) + 1):
        yield from itertools.combinations(labels, k)


def test_rank_examples():
    gf2, gf5 = field_new(2), field_new(5)
    assert GFMatrix.identity(gf2, "abc").rank() == 3
    assert GFMatrix.zeros(gf5, 2, [1, 2, 3, 4]).rank() == 0
    assert GFMatrix(gf2, [1, 2], [[1, 1], [1, 1]]).rank() == 1


def test_unknown_label_raises():
    m = GFMatrix.identity(field_new(3), [1, 2])
    with pytest.raises((KeyError, ValueError)):
        m.rank([3])


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        GFMatrix(field_new(3), [1, 1], [[1, 0]])


def test_column_independence_examples():
    gf5 = field_new(5)
    vdm = GFMatrix(gf5, [1, 2, 3], [[1, 1, 1], [1, 2, 3]])
    assert GFMatrix.identity(gf5, [1, 2]).columns_independent([1, 2])
    assert vdm.columns_independent([])
    assert vdm.columns_independent([1, 2])
    assert not vdm.columns_independent([1, 2, 3])


def test_wedge_vector_examples():
    gf5 = field_new(5)
    vdm = GFMatrix(gf5, [1, 2, 3], [[1, 1, 1], [1, 2, 3]])
    assert list(vdm.wedge_vector([2])) == [1, 2]
    assert list(vdm.wedge_vector([2, 3])) == [1]
    dep = GFMatrix(gf5, "ab", [[1, 2], [2, 4]])
    assert not np.any(dep.wedge_vector("ab"))
    with pytest.raises(ValueError):
        vdm.wedge_vector([1, 2, 3])


def test_dualize_examples():
    gf2 = field_new(2)
    u12 = GFMatrix(gf2, "ab", [[1, 1]])
    d = u12.dualize()
    assert d.columns_independent("a") and d.columns_independent("b")
    assert not d.columns_independent("ab")
    free = GFMatrix.identity(gf2, "abc").dualize()
    assert free.rows == 0 and free.rank() == 0


def random_matrix(seed, p, rows, cols):
    rng = np.random.default_rng(seed)
    ctx = field_new(p)
    return GFMatrix(ctx, list(range(cols)), rng.integers(0, p, size=(rows, cols)).tolist())


def _independent_sets(m: GFMatrix) -> set:
    return {frozenset(s) for s in subsets(m.labels) if m.columns_independent(s)}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7]), st.integers(1, 4), st.integers(1, 7))
def test_double_dual_is_the_same_matroid(seed, p, rows, cols):
    m = random_matrix(seed, p, rows, cols)
    dd = m.dualize().dualize()
    assert _independent_sets(dd) == _independent_sets(m)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(1, 7))
def test_dual_bases_are_complements(seed, p, rows, cols):
    m = random_matrix(seed, p, rows, cols)
    d = m.dualize()
    r, n = m.rank(), len(m.labels)
    assert d.rank() == n - r
    for s in itertools.combinations(m.labels, r):
        comp = [x for x in m.labels if x not in s]
        assert m.columns_independent(s) == d.columns_independent(comp)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7]), st.integers(1, 5), st.integers(1, 6))
def test_rank_invariant_under_row_operations(seed, p, rows, cols):
    m = random_matrix(seed, p, rows, cols)
    rng = np.random.default_rng(seed + 1)
    while True:
        t = rng.integers(0, p, size=(rows, rows))
        if GFMatrix(m.ctx, list(range(rows)), t.tolist()).rank() == rows:
            break
    moved = m.left_multiply(m.kernel.asarray(t))
    for s in subsets(m.labels):
        assert moved.rank(s) == m.rank(s)
    assert m.rank() <= min(rows, cols)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(1, 6))
def test_wedge_nonzero_iff_independent(seed, p, rows, cols):
    m = random_matrix(seed, p, rows, cols)
    for k in range(1, min(rows, cols) + 1):
        for s in itertools.combinations(m.labels, k):
            assert bool(np.any(m.wedge_vector(s))) == m.columns_independent(s)


def test_wedge_vector_entries_are_minors():
    m = random_matrix(11, 7, 3, 4)
    s = (0, 2)
    vec = m.wedge_vector(s)
    full = np.array(m.data, dtype=np.int64)
    expected = []
    for rows in itertools.combinations(range(3), 2):
        sub = full[np.ix_(rows, s)]
        expected.append(int(round(np.linalg.det(sub))) % 7)
    assert [int(x) for x in vec] == expected


def test_block_diag_shape_and_rank():
    gf3 = field_new(3)
    a = GFMatrix(gf3, "ab", [[1, 1]])
    b = GFMatrix.identity(gf3, "cd")
    m = block_diag([a, b])
    assert m.rows == 3 and m.labels == tuple("abcd")
    assert m.rank() == 3
    assert m.columns_independent("acd") and not m.columns_independent("ab")


def test_block_diag_errors():
    a = GFMatrix.identity(field_new(3), "ab")
    with pytest.raises(ValueError):
        block_diag([a, GFMatrix.identity(field_new(5), "cd")])
    with pytest.raises(ValueError):
        block_diag([a, GFMatrix.identity(field_new(3), "bc")])


def test_extension_field_rank():
    gf4 = field_new(2, 2)
    x = gf4([0, 1])
    m = GFMatrix(gf4, "abc", [[1, 1, 1], [gf4.one(), x, x * x]])
    assert m.rank() == 2
    assert all(m.columns_independent(s) for s in itertools.combinations("abc", 2))
