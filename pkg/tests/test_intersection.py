from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uflpmc.intersection import max_weight_common_independent
from uflpmc.matroid import Bond, Graphic, Partition, Uniform
from uflpmc.oracle import brute_matroid_intersection


def test_size_zero():
    assert max_weight_common_independent(Uniform([1, 2], 1), Uniform([1, 2], 1), {1: 3, 2: 4}, 0) == frozenset()


def test_partition_and_uniform():
    m1 = Partition([([1, 2], 1), ([3], 1)])
    m2 = Uniform([1, 2, 3], 2)
    w = {1: 4, 2: 1, 3: 2}
    assert max_weight_common_independent(m1, m2, w, 2) == frozenset({1, 3})
    assert brute_matroid_intersection(m1, m2, w, 2) == frozenset({1, 3})


def test_rank_bound_infeasible():
    u = Uniform(range(4), 1)
    assert max_weight_common_independent(u, u, lambda x: 1, 2) is None
    assert brute_matroid_intersection(u, u, lambda x: 1, 2) is None


def test_size_above_ground_raises():
    with pytest.raises(ValueError):
        max_weight_common_independent(Uniform([1], 1), Uniform([1], 1), {1: 1}, 2)


def random_matroid(rng: np.random.Generator, labels: list[int]):
    kind = int(rng.integers(0, 4))
    n = len(labels)
    if kind == 0:
        return Uniform(labels, int(rng.integers(1, n + 1)))
    if kind == 1:
        cut = int(rng.integers(1, n))
        return Partition([(labels[:cut], int(rng.integers(1, cut + 1))), (labels[cut:], int(rng.integers(1, 3)))])
    verts = int(rng.integers(2, 5))
    if kind == 2:
        return Graphic(verts, [(int(rng.integers(0, verts)), int(rng.integers(0, verts))) for _ in labels], labels)
    verts = min(verts, n + 1)
    path = [(i, i + 1) for i in range(verts - 1)]
    rest = [(int(rng.integers(0, verts)), int(rng.integers(0, verts))) for _ in labels[len(path):]]
    return Bond(verts, path + rest, labels)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**6))
def test_weight_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    labels = list(range(int(rng.integers(2, 9))))
    m1, m2 = random_matroid(rng, labels), random_matroid(rng, labels)
    w = {x: int(rng.integers(-5, 10)) for x in labels}
    ell = int(rng.integers(0, len(labels) + 1))
    got = max_weight_common_independent(m1, m2, w, ell)
    want = brute_matroid_intersection(m1, m2, w, ell)
    assert (got is None) == (want is None)
    if got is not None:
        assert len(got) == ell and m1.is_independent(got) and m2.is_independent(got)
        assert sum(w[x] for x in got) == sum(w[x] for x in want)
