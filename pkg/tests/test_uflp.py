from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uflpmc.battery import random_uflp
from uflpmc.matroid import Free, Oracle, Partition, Uniform
from uflpmc.oracle import brute_uflp
from uflpmc.reductions import maxcover_to_uflp
from uflpmc.uflp import (
    CcInstance,
    RouteTooLarge,
    UflpInstance,
    check_solution,
    make_solution,
    mcc_value,
    profit,
    solve_mcc_linear,
    solve_mcc_uniform,
    solve_uflp_mc,
    trial_count,
)


def three_elements() -> UflpInstance:
    return UflpInstance(3, (2, 1, 0), {(1, 3): 5, (2, 3): 4}, [], [Uniform([3], 1)])


def tiny(facility) -> CcInstance:
    inst = UflpInstance(3, (2, 0, 0), {(1, 3): 5}, [facility], [Uniform([3], 1)])
    return CcInstance(inst, {1: 1, 3: 2}, 1, 1, ({2},))


def test_profit_examples():
    inst = UflpInstance(3, (2, 0, 0), {(1, 3): 5})
    assert profit(inst, [], []) == 0
    assert profit(inst, [1], [3]) == 3
    assert profit(inst, [], [3]) == 0
    with pytest.raises(ValueError):
        profit(inst, [1], [1])
    with pytest.raises(ValueError):
        profit(inst, [4], [])


def test_instance_validation():
    with pytest.raises(ValueError):
        UflpInstance(2, (1,), {})
    with pytest.raises(ValueError):
        UflpInstance(2, (1, -1), {})
    with pytest.raises(ValueError):
        UflpInstance(2, (0, 0), {(1, 3): 1})
    with pytest.raises(ValueError):
        UflpInstance(2, (0, 0), {}, [Free([1, 5])])


def test_cc_instance_validation():
    inst = three_elements()
    with pytest.raises(ValueError):
        CcInstance(inst, {1: 1}, 2, 1, ({3}, {3}))
    with pytest.raises(ValueError):
        CcInstance(inst, {1: 1}, 1, 2, ({2},))
    with pytest.raises(ValueError):
        CcInstance(inst, {1: 4}, 1, 1, ({2},))


def test_mcc_uniform_examples():
    sol = solve_mcc_uniform(tiny(Free([1])))
    assert sol is not None and sol.A == (1,) and sol.C == (3,) and sol.profit == 3
    inst = UflpInstance(3, (2, 0, 0), {(1, 3): 5}, [Free([1])], [Uniform([3], 1)])
    # k = 2 exceeds the client rank 1
    assert solve_mcc_uniform(CcInstance(inst, {1: 1, 2: 2, 3: 3}, 1, 2, ({2, 3},))) is None
    # client color 3 has no element
    assert solve_mcc_uniform(CcInstance(
        UflpInstance(3, (2, 0, 0), {(1, 3): 5}, [Free([1])], [Uniform([2, 3], 2)]),
        {1: 1, 3: 2}, 1, 2, ({2, 3},),
    )) is None


def test_mcc_uniform_rejects_wrong_shape():
    inst = UflpInstance(3, (0, 0, 0), {}, [Free([1]), Free([2])], [Uniform([3], 1)])
    with pytest.raises(ValueError):
        solve_mcc_uniform(CcInstance(inst, {1: 1, 3: 2}, 1, 1, ({2},)))


def test_mcc_linear_examples():
    sol = solve_mcc_linear(tiny(Free([1])), rng=0)
    assert sol is not None and sol.profit == 3
    zero = UflpInstance(3, (0, 0, 0), {(1, 3): 5}, [Free([1])], [Uniform([3], 0)])
    assert solve_mcc_linear(CcInstance(zero, {1: 1, 3: 2}, 1, 1, ({2},)), rng=0) is None
    shared = UflpInstance(4, (0, 0, 0, 0), {(1, 3): 5, (2, 4): 5}, [Uniform([1, 2], 1)], [Uniform([3, 4], 2)])
    cc = CcInstance(shared, {1: 1, 2: 2, 3: 3, 4: 4}, 2, 2, ({3}, {4}))
    assert solve_mcc_linear(cc, rng=0) is None
    assert brute_uflp(shared).profit == 5


def test_mcc_linear_rejects_oracles():
    inst = UflpInstance(3, (0, 0, 0), {}, [Oracle([1], lambda s: True)], [Uniform([3], 1)])
    with pytest.raises(TypeError):
        solve_mcc_linear(CcInstance(inst, {1: 1, 3: 2}, 1, 1, ({2},)), rng=0)


def test_route_too_large():
    n = 12
    inst = UflpInstance(
        n, (0,) * n, {(1, 7): 1},
        [Uniform(range(1, n + 1), 3), Uniform(range(1, n + 1), 4)],
        [Uniform(range(1, n + 1), 3), Uniform(range(1, n + 1), 3)],
    )
    col = {u: (u - 1) % 6 + 1 for u in range(1, n + 1)}
    cc = CcInstance(inst, col, 3, 3, ({4}, {5}, {6}))
    with pytest.raises(RouteTooLarge):
        solve_mcc_linear(cc, rng=0)


def test_trial_count():
    assert trial_count(1, 1, 1, 1e-6) == math.ceil(math.e**2 * math.log(1 / 1e-6))
    assert trial_count(2, 3, 3, 0.01) == math.ceil(math.e**5 * math.log(6 / 0.01))


def test_all_zero_profits():
    inst = UflpInstance(4, (1, 0, 2, 0), {}, [], [Uniform(range(1, 5), 2)])
    sol = solve_uflp_mc(inst)
    assert sol.A == () and sol.C == () and sol.profit == 0


def test_three_element_instance_all_routes():
    for route in ("auto", "uniform", "linear", "brute"):
        sol = solve_uflp_mc(three_elements(), route=route)
        assert sol.profit == 3 and sol.A in ((1,), (2,)) and sol.C == (3,)
        assert check_solution(three_elements(), sol) == []


def test_maxcover_example():
    inst = maxcover_to_uflp([1, 2, 3], [[1, 2], [2, 3]], 1, client_rank=2)
    assert solve_uflp_mc(inst).profit == 2
    assert brute_uflp(inst).profit == 2


def test_missing_client_bound():
    inst = UflpInstance(3, (0, 0, 0), {(1, 2): 1})
    with pytest.raises(ValueError):
        solve_uflp_mc(inst)
    assert solve_uflp_mc(inst, max_clients=2).profit == 1


def test_route_shape_mismatch():
    inst = UflpInstance(3, (0, 0, 0), {}, [], [Partition([([1, 2, 3], 1)])])
    with pytest.raises(ValueError):
        solve_uflp_mc(inst, route="uniform")
    with pytest.raises(ValueError):
        solve_uflp_mc(inst, route="fastest")


def test_check_solution_flags_tampering():
    inst = three_elements()
    good = make_solution(inst, [1], [3])
    assert check_solution(inst, good) == []
    bad = make_solution(inst, [1, 2], [3])
    assert check_solution(inst, bad) == []
    wrong_profit = make_solution(inst, [1], [3]).__class__((1,), (3,), 9, ((3, 1),))
    assert any("profit" in p for p in check_solution(inst, wrong_profit))
    dependent = UflpInstance(3, (0, 0, 0), {}, [], [Uniform([3], 0)])
    assert check_solution(dependent, make_solution(dependent, [1], [3]))


def _mcc_brute(cc: CcInstance) -> int | None:
    """Best color-constrained value by enumerating one facility per facility
    color and one client per client color."""
    import itertools

    inst = cc.inst
    fac_choices = [cc.U(i) for i in range(1, cc.ell + 1)]
    cli_choices = [cc.U(j) for j in range(cc.ell + 1, cc.ell + cc.k + 1)]
    best = None
    for a in itertools.product(*fac_choices):
        if not all(m.ground >= set(a) and m.is_independent(set(a)) for m in inst.facility_matroids):
            continue
        for c in itertools.product(*cli_choices):
            if not all(m.ground >= set(c) and m.is_independent(set(c)) for m in inst.client_matroids):
                continue
            v = mcc_value(cc, a, c)
            best = v if best is None else max(best, v)
    return best


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_mcc_routes_agree_with_enumeration(seed):
    rng = np.random.default_rng(seed)
    inst = random_uflp(rng, 7, 2, 1, 1, uniform_client=True)
    ell = int(rng.integers(1, 3))
    k = int(rng.integers(ell, 3))
    col = {u: int(rng.integers(1, k + ell + 1)) for u in inst.universe}
    client_colors = list(range(ell + 1, ell + k + 1))
    owner = list(range(ell)) + [int(rng.integers(0, ell)) for _ in range(k - ell)]
    rng.shuffle(owner)
    blocks = tuple({c for c, o in zip(client_colors, owner) if o == i} for i in range(ell))
    cc = CcInstance(inst, col, ell, k, blocks)
    want = _mcc_brute(cc)
    uni = solve_mcc_uniform(cc)
    lin = solve_mcc_linear(cc, rng=seed)
    for sol in (uni, lin):
        if want is None:
            assert sol is None
        else:
            assert sol is not None and sol.mcc_value == want
            assert sol.profit >= sol.mcc_value
            assert check_solution(inst, sol) == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(0, 1), (1, 1), (0, 2)]))
def test_solver_matches_brute_force(seed, shape):
    rng = np.random.default_rng(seed)
    a, c = shape
    inst = random_uflp(rng, int(rng.integers(4, 8)), int(rng.integers(1, 3)), a, c, uniform_client=c == 1)
    want = brute_uflp(inst).profit
    sol = solve_uflp_mc(inst, seed=seed)
    assert check_solution(inst, sol) == []
    assert sol.profit == want
    trace: list = []
    solve_uflp_mc(inst, seed=seed, route="linear", trace=trace)
    profits = [step["profit"] for step in trace]
    assert all(x <= y for x, y in zip(profits, profits[1:]))


def test_huge_characteristic_warns():
    from uflpmc.field import FieldCtx
    from uflpmc.gfmatrix import GFMatrix
    from uflpmc.matroid import Linear

    ctx = FieldCtx((1 << 61) - 1)
    mat = GFMatrix(ctx, [1, 2], [[1, 1]])
    inst = UflpInstance(3, (0, 0, 0), {(1, 3): 2, (2, 3): 1}, [Linear(mat)], [Uniform([3], 1)])
    with pytest.warns(RuntimeWarning, match="characteristic"):
        sol = solve_uflp_mc(inst, route="linear")
    assert sol.profit == 2
