"""Small library tour: facility location on both randomized routes, then a
few of the problems built on the same machinery."""

from __future__ import annotations

from uflpmc.matroid import Graphic, Partition, Uniform
from uflpmc.oracle import brute_uflp
from uflpmc.reductions import StcInstance, maxcover_to_uflp, solve_stc
from uflpmc.spmc import SpmcInstance, solve_spmc
from uflpmc.uflp import UflpInstance, solve_uflp_mc


def facility_location() -> None:
    # the facility matroid is a triangle: any two facilities may open, never all three
    inst = UflpInstance(
        n=6,
        costs=(3, 2, 4, 0, 0, 0),
        profits={(1, 4): 5, (1, 5): 2, (2, 5): 6, (3, 4): 4, (3, 6): 7, (2, 6): 1},
        facility_matroids=[Graphic(3, [(0, 1), (1, 2), (0, 2)], [1, 2, 3])],
        client_matroids=[Uniform([4, 5, 6], 2)],
    )
    print("brute force:", brute_uflp(inst).profit)
    for route in ("uniform", "linear"):
        sol = solve_uflp_mc(inst, route=route, seed=1)
        print(f"{route:>8}: A={list(sol.A)} C={list(sol.C)} profit={sol.profit}")


def coverage() -> None:
    inst = maxcover_to_uflp(list("abcde"), [list("abc"), list("cd"), list("de")], budget=2, client_rank=5)
    print("max coverage with two sets:", solve_uflp_mc(inst).profit)


def packing() -> None:
    inst = SpmcInstance(
        [Uniform(range(1, 7), 4), Partition([([1, 2, 3], 2), ([4, 5, 6], 2)])],
        {(1, 2): 6, (3,): 2, (4, 5): 5, (1, 4): 9, (6,): 1},
        alpha=2,
    )
    sol = solve_spmc(inst, rng=0)
    print("set packing:", sol.chosen, "weight", sol.total_weight)


def triadic_closure() -> None:
    edges = [("a", "b"), ("b", "c"), ("c", "d"), ("b", "d"), ("d", "e")]
    for r in (1, 2, 3):
        res = solve_stc(StcInstance("abcde", edges, [["a", "b", "c"]], r))
        print(f"STC r={r}: {'yes' if res.yes else 'no'}, weak edges {res.weak_edges}")


if __name__ == "__main__":
    facility_location()
    coverage()
    packing()
    triadic_closure()
