from __future__ import annotations

import pytest

from uflpmc.matroid import Free, Partition, Uniform
from uflpmc.oracle import (
    BudgetExceeded,
    brute_matroid_intersection,
    brute_spmc,
    brute_stc,
    brute_uflp,
    open_triangles_brute,
    verify_representative,
)
from uflpmc.reductions import StcInstance
from uflpmc.spmc import SpmcInstance
from uflpmc.uflp import UflpInstance, profit


def test_brute_uflp_zero_profits():
    sol = brute_uflp(UflpInstance(3, (1, 1, 1), {}, [], [Uniform([1, 2, 3], 2)]))
    assert sol.profit == 0 and sol.A == () and sol.C == ()


def test_brute_uflp_three_elements():
    inst = UflpInstance(3, (2, 1, 0), {(1, 3): 5, (2, 3): 4}, [], [Uniform([3], 1)])
    sol = brute_uflp(inst)
    assert sol.profit == 3 and profit(inst, sol.A, sol.C) == 3


def test_brute_uflp_no_matroids_is_feasible():
    sol = brute_uflp(UflpInstance(2, (0, 0), {(1, 2): 4}))
    assert sol.profit == 4


def test_brute_uflp_budget():
    n = 40
    with pytest.raises(BudgetExceeded):
        brute_uflp(UflpInstance(n, (0,) * n, {}))


def test_brute_spmc_examples():
    assert brute_spmc(SpmcInstance([Uniform([1, 2], 2)], {}, 1)) is None
    inst = SpmcInstance([Uniform([1, 2, 3, 4], 2)], {(1,): 3, (2,): 1, (3, 4): 5}, 2)
    assert brute_spmc(inst).total_weight == 4
    neg = SpmcInstance([Uniform([1, 2], 2)], {(1,): -1, (2,): -2}, 2)
    assert brute_spmc(neg).total_weight == -3


def test_brute_intersection_examples():
    u = Uniform([1, 2, 3], 2)
    assert brute_matroid_intersection(u, u, {1: 1, 2: 1, 3: 1}, 0) == frozenset()
    part = Partition([([1, 2], 1), ([3], 1)])
    assert brute_matroid_intersection(part, u, {1: 4, 2: 1, 3: 2}, 2) == frozenset({1, 3})
    one = Uniform([1, 2, 3], 1)
    assert brute_matroid_intersection(one, one, {1: 1, 2: 1, 3: 1}, 2) is None


def test_brute_stc_examples():
    assert brute_stc(StcInstance("abc", [("a", "b"), ("b", "c"), ("a", "c")])) == 0
    assert brute_stc(StcInstance("abc", [("a", "b"), ("b", "c")])) == 1
    assert brute_stc(StcInstance("abc", [("a", "b"), ("b", "c")], [["a", "b", "c"]])) == 0
    assert len(open_triangles_brute([(1, 2), (2, 3), (3, 4)])) == 2


FAMILY = {(1,): 1, (2,): 2, (3,): 3}
U3 = [Uniform([1, 2, 3], 2)]


def test_family_represents_itself():
    assert verify_representative(U3, FAMILY, FAMILY, 1).ok


def test_empty_candidate_fails_with_witness():
    check = verify_representative(U3, FAMILY, {}, 1)
    assert not check.ok and check.Y is not None


def test_rep_single_output_passes():
    assert verify_representative(U3, FAMILY, {(3,): 3, (2,): 2}, 1).ok
    # dropping the second-best member loses Y = {3}
    assert not verify_representative(U3, FAMILY, {(3,): 3, (1,): 1}, 1).ok


def test_candidate_must_come_from_family():
    assert not verify_representative(U3, FAMILY, {(1, 2): 9}, 0).ok
    assert not verify_representative(U3, FAMILY, {(1,): 5}, 0).ok


def test_verify_representative_budget():
    big = Free(range(200))
    fam = {(i,): 1 for i in range(200)}
    with pytest.raises(BudgetExceeded):
        verify_representative([big], fam, fam, 4)
