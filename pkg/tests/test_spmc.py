from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
import numpy as np

from uflpmc.field import field_new
from uflpmc.gfmatrix import GFMatrix
from uflpmc.matroid import Graphic, Linear, Oracle, Partition, Uniform
from uflpmc.oracle import brute_spmc
from uflpmc.spmc import SpmcInstance, dummy_pools, solve_spmc


def test_empty_family_is_infeasible():
    assert solve_spmc(SpmcInstance([Uniform([1, 2], 2)], {}, 1), rng=0) is None


def test_too_few_feasible_sets():
    inst = SpmcInstance([Uniform([1, 2, 3], 1)], {(1,): 1, (2,): 1}, 2)
    assert solve_spmc(inst, rng=0) is None
    assert brute_spmc(inst) is None


def test_rank_blocks_large_union():
    inst = SpmcInstance([Uniform([1, 2, 3, 4], 2)], {(1,): 3, (2,): 1, (3, 4): 5}, 2)
    sol = solve_spmc(inst, rng=0)
    assert sol is not None
    assert sorted(sol.chosen) == [(1,), (2,)] and sol.total_weight == 4
    assert brute_spmc(inst).total_weight == 4


def test_negative_weights():
    inst = SpmcInstance([Uniform([1, 2], 2)], {(1,): -1, (2,): -2}, 2)
    sol = solve_spmc(inst, rng=0)
    assert sol.total_weight == -3


def test_oracle_matroid_rejected():
    inst = SpmcInstance([Oracle([1, 2], lambda s: True)], {(1,): 1}, 1)
    with pytest.raises(TypeError):
        solve_spmc(inst, rng=0)


def test_alpha_must_be_positive():
    with pytest.raises(ValueError):
        SpmcInstance([Uniform([1], 1)], {(1,): 1}, 0)


def test_dummy_pools_are_disjoint_and_reserved():
    pools = dummy_pools(3, 2)
    flat = [x for p in pools for x in p]
    assert len(flat) == len(set(flat)) == 6 and all(x < 0 for x in flat)


def test_explicit_matrix_over_gf2():
    gf2 = field_new(2)
    mat = GFMatrix(gf2, [1, 2, 3, 4], [[1, 0, 1, 1], [0, 1, 1, 0]])
    inst = SpmcInstance([Linear(mat)], {(1,): 2, (2,): 2, (3,): 5, (4,): 7}, 2)
    sol = solve_spmc(inst, rng=1)
    # 4 is parallel to 1, so {3, 4} is the best basis
    assert sol.total_weight == 12 and sorted(sol.chosen) == [(3,), (4,)]


def random_instance(seed: int) -> SpmcInstance:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 8))
    labels = list(range(1, n + 1))
    cut = int(rng.integers(1, n))
    mats = [
        Uniform(labels, int(rng.integers(2, n + 1))),
        Partition([(labels[:cut], int(rng.integers(1, cut + 1))), (labels[cut:], 2)]),
        Graphic(4, [(int(rng.integers(0, 4)), int(rng.integers(0, 4))) for _ in labels], labels),
    ]
    chosen = [mats[i] for i in sorted(set(rng.integers(0, 3, size=2).tolist()))]
    family: dict = {}
    for _ in range(int(rng.integers(1, 8))):
        size = int(rng.integers(1, 3))
        s = tuple(sorted(rng.choice(labels, size=size, replace=False).tolist()))
        family[s] = int(rng.integers(-3, 10))
    return SpmcInstance(chosen, family, int(rng.integers(1, 3)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_matches_brute_force(seed):
    inst = random_instance(seed)
    expected = brute_spmc(inst)
    got = solve_spmc(inst, rng=seed)
    if expected is None:
        assert got is None
        return
    assert got is not None and got.total_weight == expected.total_weight
    union: set = set()
    for h in got.chosen:
        assert h in inst.family and not union & set(h)
        union |= set(h)
    assert all(m.is_independent(union) for m in inst.matroids)
    assert sum(inst.family[h] for h in got.chosen) == got.total_weight
