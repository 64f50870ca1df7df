"""Brute-force reference solvers and verifiers.

These enumerate exhaustively and share nothing with the solvers except the
matroid ``is_independent`` entry point and :func:`uflpmc.uflp.profit`.  Every
function has a hard enumeration budget and raises :class:`BudgetExceeded`
instead of running for hours.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .matroid import Matroid
from .spmc import SpmcInstance, SpmcSolution
from .uflp import UflpInstance, UflpSolution, make_solution

__all__ = [
    "BudgetExceeded",
    "RepCheck",
    "brute_uflp",
    "brute_spmc",
    "brute_matroid_intersection",
    "brute_stc",
    "verify_representative",
    "open_triangles_brute",
]

MAX_SIDE = 16  # facility / client ground sizes enumerated as 2^size masks
MAX_PAIRS = 1 << 28
SPMC_BUDGET = 10**6
REP_BUDGET = 10**7
INTERSECTION_BUDGET = 10**6
STC_MAX_EDGES = 18


class BudgetExceeded(ValueError):
    """The instance is too large for exhaustive enumeration."""


def _indep_all(matroids: Sequence[Matroid], s: set) -> bool:
    return all(s <= m.ground and m.is_independent(s) for m in matroids)


def _feasible_masks(elements: list[int], matroids: Sequence[Matroid]) -> tuple[np.ndarray, np.ndarray]:
    """All subsets of ``elements`` independent in every matroid, as local
    masks (bit i = elements[i]) and as global masks (bit u-1 = element u)."""
    local, glob = [], []
    for mask in range(1 << len(elements)):
        s = {elements[i] for i in range(len(elements)) if mask >> i & 1}
        if _indep_all(matroids, s):
            local.append(mask)
            glob.append(sum(1 << (u - 1) for u in s))
    return np.array(local, dtype=np.int64), np.array(glob, dtype=np.int64)


def _common_ground(universe: Iterable[int], matroids: Sequence[Matroid]) -> list[int]:
    g = set(universe)
    for m in matroids:
        g &= m.ground
    return sorted(g)


def brute_uflp(inst: UflpInstance) -> UflpSolution:
    """Exact optimum over all disjoint (A, C) with A independent in every
    facility matroid and C independent in every client matroid.

    Ties go to the pair found first: facility sets by increasing mask, then
    client sets by increasing mask.
    """
    fac = _common_ground(inst.universe, inst.facility_matroids)
    cli = _common_ground(inst.universe, inst.client_matroids)
    if len(fac) > MAX_SIDE or len(cli) > MAX_SIDE or (1 << len(fac)) * (1 << len(cli)) > MAX_PAIRS:
        raise BudgetExceeded(
            f"exhaustive search over {len(fac)} facility and {len(cli)} client candidates is too large"
        )
    n = inst.n
    fl, fg = _feasible_masks(fac, inst.facility_matroids)
    cl, cg = _feasible_masks(cli, inst.client_matroids)

    # best[a, v] = max over u in A of p[u, v]; cost[a] = sum of c_u over A
    nf = len(fac)
    p = np.zeros((nf, n), dtype=np.int64)
    for i, u in enumerate(fac):
        for v in range(1, n + 1):
            p[i, v - 1] = inst.p(u, v)
    full_best = np.zeros((1 << nf, n), dtype=np.int64)
    full_cost = np.zeros(1 << nf, dtype=np.int64)
    for mask in range(1, 1 << nf):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        full_best[mask] = np.maximum(full_best[rest], p[low])
        full_cost[mask] = full_cost[rest] + inst.cost(fac[low])
    best = full_best[fl]
    cost = full_cost[fl]

    # client indicator matrix over labels
    cmat = np.zeros((len(cl), n), dtype=np.int64)
    for j, mask in enumerate(cg):
        for v in range(1, n + 1):
            if int(mask) >> (v - 1) & 1:
                cmat[j, v - 1] = 1
    if not len(fl) or not len(cl):
        raise ValueError("the empty set is dependent in some matroid")
    top: tuple[int, int, int] | None = None  # (profit, facility index, client index)
    chunk = max(1, 4_000_000 // max(1, len(cl)))
    for start in range(0, len(fl), chunk):
        stop = min(len(fl), start + chunk)
        served = best[start:stop] @ cmat.T
        served[:, :] = np.where((fg[start:stop, None] & cg[None, :]) == 0, served, -(1 << 60))
        served[fg[start:stop] == 0, :] = 0  # an empty facility set serves nobody
        total = served - cost[start:stop, None]
        idx = int(np.argmax(total))
        i, j = divmod(idx, len(cl))
        value = int(total[i, j])
        if top is None or value > top[0]:
            top = (value, start + i, j)
    _, i, j = top
    a = [u for u in range(1, n + 1) if int(fg[i]) >> (u - 1) & 1]
    c = [v for v in range(1, n + 1) if int(cg[j]) >> (v - 1) & 1]
    return make_solution(inst, a, c)


def brute_spmc(inst: SpmcInstance) -> SpmcSolution | None:
    """Best packing of ``alpha`` distinct family members, or None."""
    members = sorted(inst.family)
    if len(members) ** inst.alpha > SPMC_BUDGET:
        raise BudgetExceeded(f"{len(members)}^{inst.alpha} packings exceed the budget")
    best: SpmcSolution | None = None
    for combo in combinations(members, inst.alpha):
        union: set = set()
        disjoint = True
        for h in combo:
            if union & set(h):
                disjoint = False
                break
            union |= set(h)
        if not disjoint or not _indep_all(inst.matroids, union):
            continue
        weight = sum(inst.family[h] for h in combo)
        if best is None or weight > best.total_weight:
            best = SpmcSolution(list(combo), weight)
    return best


def brute_matroid_intersection(
    m1: Matroid, m2: Matroid, w: Mapping[Hashable, int] | Callable[[Hashable], int], ell: int
) -> frozenset | None:
    """Max-weight common independent set of size ``ell``; ties go to the
    lexicographically first set."""
    weight = w if callable(w) else w.__getitem__
    ground = sorted(m1.ground & m2.ground)
    if comb(len(ground), ell) > INTERSECTION_BUDGET:
        raise BudgetExceeded("too many subsets")
    best, best_w = None, None
    for combo in combinations(ground, ell):
        s = set(combo)
        if m1.is_independent(s) and m2.is_independent(s):
            total = sum(weight(x) for x in combo)
            if best_w is None or total > best_w:
                best, best_w = frozenset(combo), total
    return best


@dataclass(frozen=True)
class RepCheck:
    ok: bool
    Y: tuple | None = None
    reason: str = ""


def verify_representative(
    matroids: Sequence[Matroid],
    family: Mapping[Iterable[Hashable], Any],
    candidate: Mapping[Iterable[Hashable], Any],
    q: int,
    universe: Iterable[Hashable] | None = None,
) -> RepCheck:
    """Check that ``candidate`` is a max intersection q-representative of
    ``family``: for every Y of size <= q, if some member X of the family is
    disjoint from Y with X u Y independent in every matroid, then some
    candidate member does the same with weight >= w(X).

    Candidate members must belong to the family and may not claim more than
    their family weight; the check itself uses family weights.
    """
    fam = {tuple(sorted(k)): v for k, v in family.items()}
    cand_claims = {tuple(sorted(k)): v for k, v in candidate.items()}
    for s, v in cand_claims.items():
        if s not in fam:
            return RepCheck(False, None, f"candidate {list(s)} is not in the family")
        if v > fam[s]:
            return RepCheck(False, None, f"candidate {list(s)} claims weight {v}, family says {fam[s]}")
    cand = {s: fam[s] for s in cand_claims}
    if universe is None:
        uni: set = set()
        for m in matroids:
            uni |= m.ground
        universe = uni
    elements = sorted(universe)
    budget = sum(comb(len(elements), j) for j in range(q + 1)) * max(1, len(fam))
    if budget > REP_BUDGET:
        raise BudgetExceeded(f"{budget} checks exceed the budget")
    cache: dict[frozenset, bool] = {}

    def indep(s: frozenset) -> bool:
        if s not in cache:
            cache[s] = _indep_all(matroids, set(s))
        return cache[s]

    def best_extendable(pool: Mapping[tuple, Any], y: frozenset) -> Any:
        top = None
        for x, wx in pool.items():
            xs = frozenset(x)
            if xs & y or not indep(xs | y):
                continue
            if top is None or wx > top:
                top = wx
        return top

    for size in range(q + 1):
        for combo in combinations(elements, size):
            y = frozenset(combo)
            full = best_extendable(fam, y)
            if full is None:
                continue
            rep = best_extendable(cand, y)
            if rep is None or rep < full:
                return RepCheck(False, combo, f"Y = {list(combo)}: family reaches {full}, candidate {rep}")
    return RepCheck(True)


def open_triangles_brute(edges: Sequence[tuple]) -> list[frozenset]:
    """Pairs of edges sharing one endpoint whose other endpoints are not
    adjacent, each as a frozenset of two edges."""
    es = [frozenset(e) for e in edges]
    edge_set = set(es)
    out = []
    for e, f in combinations(es, 2):
        shared = e & f
        if len(shared) != 1:
            continue
        ends = (e | f) - shared
        if frozenset(ends) not in edge_set:
            out.append(frozenset((e, f)))
    return out


def _connected(vertices: set, edges: Iterable[frozenset]) -> bool:
    if not vertices:
        return True
    adj: dict = {v: set() for v in vertices}
    for e in edges:
        a, b = tuple(e)
        adj[a].add(b)
        adj[b].add(a)
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return seen == vertices


def brute_stc(inst: Any) -> int | None:
    """Maximum number of open triangles containing a weak edge over all weak
    edge sets that keep every community connected; None when some community
    is disconnected even with no weak edges.

    ``inst`` needs ``edges`` (vertex pairs) and ``communities`` (vertex sets).
    """
    edges = [frozenset(e) for e in inst.edges]
    if len(edges) > STC_MAX_EDGES:
        raise BudgetExceeded(f"{len(edges)} edges exceed the limit of {STC_MAX_EDGES}")
    triangles = open_triangles_brute([tuple(e) for e in edges])
    comms = [set(x) for x in inst.communities]
    inner = [[e for e in edges if e <= x] for x in comms]
    best = None
    for mask in range(1 << len(edges)):
        weak = {edges[i] for i in range(len(edges)) if mask >> i & 1}
        if not all(_connected(x, [e for e in es if e not in weak]) for x, es in zip(comms, inner)):
            continue
        count = sum(1 for t in triangles if t & weak)
        if best is None or count > best:
            best = count
    return best
