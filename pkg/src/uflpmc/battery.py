"""Acceptance battery: seeded generators plus one check per acceptance criterion.

Every ``criterion_N(scale, seed)`` returns a :class:`Result`.  :func:`run_all`
runs the nine checks in order and prints one pass/fail line per criterion.
``scale="full"`` uses the stated instance counts; ``scale="reduced"`` runs a
smaller sample of each check (the ``selfcheck`` command).
"""

from __future__ import annotations

import contextlib
import io as _stdio
import math
import tempfile
import time
from dataclasses import dataclass, field
from itertools import combinations, permutations
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence, TextIO

import numpy as np

from . import io
from .field import FieldCtx, field_new, next_prime
from .gfmatrix import GFMatrix
from .intersection import max_weight_common_independent
from .matroid import (
    Bond,
    DirectSum,
    Dual,
    FieldTooSmall,
    Free,
    Graphic,
    Linear,
    Matroid,
    Multicolored,
    Oracle,
    Partition,
    Truncation,
    Uniform,
    UnionFree,
    compile_linear,
    truncate_randomized,
)
from .oracle import (
    BudgetExceeded,
    brute_matroid_intersection,
    brute_spmc,
    brute_stc,
    brute_uflp,
    verify_representative,
)
from .reductions import StcInstance, clique_to_uflp, has_clique, maxcover_to_uflp, solve_stc, stc_to_uflp
from .repfam import IUMF, RepEntry, rep_intersection, rep_single, rep_unions
from .spmc import SpmcInstance, solve_spmc
from .uflp import UflpInstance, check_solution, solve_uflp_mc

__all__ = [
    "Result",
    "Scale",
    "SCALES",
    "CRITERIA",
    "run_all",
    "random_structured",
    "random_matrix",
    "random_uflp",
    "small_graphs",
    "corpus",
    "write_corpus",
]


@dataclass(frozen=True)
class Scale:
    name: str
    c1_per_kind: int
    c2_trials: int
    c3_per_kind: int
    c4_instances: int
    c5_pairs: int
    c6_instances: int
    c6_max_rank: int
    c7_graphs: int | None  # None: the whole small-graph corpus
    c7_random: int
    c7_cover: int
    c8_n: int
    c9_limit: int | None


SCALES = {
    "full": Scale("full", 3, 100, 40, 200, 500, 200, 3, None, 50, 60, 300, None),
    "reduced": Scale("reduced", 1, 20, 5, 20, 50, 12, 2, 12, 5, 10, 300, 6),
}


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.title} -- {self.detail} ({self.seconds:.1f} s)"


def _rng(seed: int, criterion: int, *extra: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(criterion, *extra)))


# ---------------------------------------------------------------------------
# Generators

STRUCTURED_KINDS = (
    "uniform",
    "partition",
    "multicolored",
    "free",
    "graphic",
    "bond",
    "dual",
    "direct_sum",
    "union_free",
    "truncation",
)
_BASE_KINDS = ("uniform", "partition", "multicolored", "free", "graphic")


def _blocks(rng: np.random.Generator, labels: list, max_blocks: int = 3) -> list[list]:
    if not labels:
        return []
    count = int(rng.integers(1, min(max_blocks, len(labels)) + 1))
    cuts = sorted(rng.choice(np.arange(1, len(labels)), size=count - 1, replace=False)) if count > 1 else []
    bounds = [0, *cuts, len(labels)]
    return [labels[bounds[i] : bounds[i + 1]] for i in range(count)]


def _graph_edges(rng: np.random.Generator, vertices: int, count: int, loops: bool = True) -> list[tuple[int, int]]:
    out = []
    for _ in range(count):
        a = int(rng.integers(0, vertices))
        b = int(rng.integers(0, vertices))
        if a == b and not (loops and rng.random() < 0.3):
            b = (a + 1) % vertices
        out.append((a, b))
    return out


def random_structured(rng: np.random.Generator, kind: str, labels: Sequence[int]) -> Matroid:
    """A random matroid of the named structured kind on ``labels``."""
    labels = list(labels)
    n = len(labels)
    if kind == "uniform":
        return Uniform(labels, int(rng.integers(0, n + 1)))
    if kind == "partition":
        return Partition([(b, int(rng.integers(0, len(b) + 1))) for b in _blocks(rng, labels)])
    if kind == "multicolored":
        return Multicolored(_blocks(rng, labels, max_blocks=4))
    if kind == "free":
        return Free(labels)
    if kind == "graphic":
        verts = int(rng.integers(2, 6))
        return Graphic(verts, _graph_edges(rng, verts, n), labels)
    if kind == "bond":
        verts = int(rng.integers(2, min(n, 5) + 2)) if n >= 1 else 1
        verts = max(1, min(verts, n + 1))
        tree = [(int(rng.integers(0, v)), v) for v in range(1, verts)]
        extra = _graph_edges(rng, verts, n - len(tree), loops=False)
        return Bond(verts, tree + extra, labels)
    if kind == "dual":
        return Dual(random_structured(rng, str(rng.choice(("uniform", "partition", "graphic"))), labels))
    if kind == "direct_sum":
        return DirectSum([random_structured(rng, str(rng.choice(_BASE_KINDS)), b) for b in _blocks(rng, labels)])
    if kind == "union_free":
        cut_free = int(rng.integers(0, n + 1))
        cut_inner = int(rng.integers(cut_free, n + 1))
        inner = random_structured(rng, str(rng.choice(_BASE_KINDS)), labels[:cut_inner])
        return UnionFree(inner, labels[cut_free:])
    if kind == "truncation":
        inner = random_structured(rng, str(rng.choice(("uniform", "partition", "graphic", "free"))), labels)
        return Truncation(inner, int(rng.integers(0, inner.rank() + 1)))
    raise ValueError(f"unknown kind {kind!r}")


def random_matrix(
    rng: np.random.Generator, ctx: FieldCtx, rows: int, labels: Sequence, density: float = 0.6, exact: bool = True
) -> GFMatrix:
    """Random rows x |labels| matrix; with ``exact`` its rank equals ``rows``."""
    labels = list(labels)
    for _ in range(1000):
        data = [
            [int(rng.integers(1, min(ctx.p, 1 << 30))) if rng.random() < density else 0 for _ in labels]
            for _ in range(rows)
        ]
        mat = GFMatrix(ctx, labels, data)
        if not exact or mat.rank() == rows:
            return mat
    raise RuntimeError("could not draw a full-rank matrix")


def random_uflp(
    rng: np.random.Generator, n: int, r: int, a: int, c: int, uniform_client: bool = False
) -> UflpInstance:
    """Costs in [0, 5], profits in [1, 9] on about 40% of ordered pairs, ``a``
    facility matroids of rank <= 3 and ``c`` client matroids, the first of
    rank ``r``."""
    costs = rng.integers(0, 6, n)
    profits = {}
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if u != v and rng.random() < 0.4:
                profits[(u, v)] = int(rng.integers(1, 10))

    def matroid(rank: int, kind: int | None = None) -> Matroid:
        ground = [x for x in range(1, n + 1) if rng.random() < 0.85]
        kind = int(rng.integers(0, 3)) if kind is None else kind
        if kind == 0 or len(ground) < 2:
            return Uniform(ground, rank)
        if kind == 1:
            cut = int(rng.integers(1, len(ground)))
            return Partition([(ground[:cut], max(1, rank - 1)), (ground[cut:], 1)])
        edges = [(int(rng.integers(0, rank + 1)), int(rng.integers(0, rank + 1))) for _ in ground]
        return Graphic(rank + 1, edges, ground)

    facility = [matroid(int(rng.integers(1, 4))) for _ in range(a)]
    clients = [matroid(r, 0 if uniform_client else None)]
    clients += [matroid(int(rng.integers(r, r + 2))) for _ in range(c - 1)]
    return UflpInstance(n, costs, profits, facility, clients)


def small_graphs(max_vertices: int = 5) -> list[tuple[int, list[tuple[int, int]]]]:
    """All graphs on 1..max_vertices vertices up to isomorphism, as
    (vertex count, edge list) in order of vertices, then edges."""
    out = []
    for nv in range(1, max_vertices + 1):
        pairs = list(combinations(range(nv), 2))
        perms = list(permutations(range(nv)))
        seen: set = set()
        reps = []
        for mask in range(1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            canon = min(tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in edges)) for p in perms)
            if canon not in seen:
                seen.add(canon)
                reps.append((nv, list(canon)))
        reps.sort(key=lambda g: (len(g[1]), g[1]))
        out.extend(reps)
    return out


def _random_connected_subset(rng: np.random.Generator, vertices: list, edges: list, size: int) -> list:
    adj: dict = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    start = vertices[int(rng.integers(0, len(vertices)))]
    chosen = [start]
    while len(chosen) < size:
        frontier = sorted({w for v in chosen for w in adj[v]} - set(chosen))
        if not frontier:
            break
        chosen.append(frontier[int(rng.integers(0, len(frontier)))])
    return chosen


def _random_stc(rng: np.random.Generator, vertices: list, edges: list, communities: int) -> StcInstance:
    comms = []
    for _ in range(communities):
        if not edges:
            break
        comms.append(_random_connected_subset(rng, vertices, edges, int(rng.integers(2, min(4, len(vertices)) + 1))))
    return StcInstance(vertices, edges, comms, 0)


# ---------------------------------------------------------------------------
# Criterion 1: compiled independence equals definitional independence


def _all_subsets(labels: Sequence) -> Iterator[frozenset]:
    labels = list(labels)
    for mask in range(1 << len(labels)):
        yield frozenset(labels[i] for i in range(len(labels)) if mask >> i & 1)


def _compiles(m: Matroid, ctx: FieldCtx, eps_t: float) -> bool:
    try:
        compile_linear(m, ctx, 0, eps_t)
    except FieldTooSmall:
        return False
    return True


def smallest_admissible_prime(m: Matroid, eps_t: float) -> int:
    """Smallest prime p such that ``m`` compiles over GF(p).

    Compilation succeeds exactly when the field is large enough, so the
    predicate "compiles over the first prime >= x" is monotone in x.
    """

    def ok(x: int) -> bool:
        return _compiles(m, FieldCtx(next_prime(x)), eps_t)

    lo, hi = 1, 2
    while not ok(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        lo, hi = (lo, mid) if ok(mid) else (mid, hi)
    return next_prime(hi)


def _larger_field(index: int, p_min: int, rng: np.random.Generator) -> FieldCtx:
    need = max(p_min + 1, 1 << 8)
    choice = index % 3
    if choice == 0:
        return FieldCtx(next_prime(max(need, 1 << 40)))
    base = 2 if choice == 1 else 3
    return field_new(base, max(2, math.ceil(math.log(need, base)) + 1), rng=rng)


def criterion_1(scale: Scale, seed: int) -> Result:
    eps_t = 1e-9
    failures: list[str] = []
    checked = 0
    fields_used: set[str] = set()
    start = time.perf_counter()
    for ki, kind in enumerate(STRUCTURED_KINDS):
        for t in range(scale.c1_per_kind):
            rng = _rng(seed, 1, ki, t)
            n = int(rng.integers(6, 11))
            labels = sorted(int(x) for x in rng.choice(np.arange(1, 40), size=n, replace=False))
            m = random_structured(rng, kind, labels)
            p_min = smallest_admissible_prime(m, eps_t)
            for ctx in (FieldCtx(p_min), _larger_field(ki + t, p_min, rng)):
                fields_used.add(f"GF({ctx.p}^{ctx.d})")
                rep = compile_linear(m, ctx, rng, eps_t)
                for s in _all_subsets(labels):
                    checked += 1
                    if rep.columns_independent(s) != m.is_independent(s):
                        failures.append(f"{kind} #{t} over GF({ctx.p}^{ctx.d}) differs on {sorted(s)}")
                        break
    elapsed = time.perf_counter() - start
    if elapsed >= 60:
        failures.append(f"took {elapsed:.1f} s (target < 60 s)")
    detail = f"{checked} subset checks over {len(fields_used)} fields, {len(failures)} problems"
    return Result(1, "compiled vs definitional independence", not failures, detail, failures=failures)


# ---------------------------------------------------------------------------
# Criterion 2: randomized truncation


TRUNCATION_CONFIGS: tuple[tuple[str, int, int, int, int], ...] = (
    # (name, characteristic, n, rank, k)
    ("GF(5) n=6 rank 4 k=2", 5, 6, 4, 2),
    ("GF(65537) n=8 rank 5 k=3", 65537, 8, 5, 3),
    ("GF(2^31-1) n=8 rank 6 k=4", 2**31 - 1, 8, 6, 4),
)


def _truncation_failures(config: tuple, eps_t: float, trials: int, seed: int, ci: int) -> int:
    _, p, n, rank, k = config
    ctx = FieldCtx(p)
    labels = list(range(1, n + 1))
    subsets = list(_all_subsets(labels))
    failures = 0
    for t in range(trials):
        rng = _rng(seed, 2, ci, int(-math.log10(eps_t)), t)
        rep = random_matrix(rng, ctx, rank, labels)
        out = truncate_randomized(rep, k, rng, eps_t)
        if any(out.columns_independent(s) != (len(s) <= k and rep.columns_independent(s)) for s in subsets):
            failures += 1
    return failures


def criterion_2(scale: Scale, seed: int) -> Result:
    parts = []
    failures: list[str] = []
    for ci, config in enumerate(TRUNCATION_CONFIGS):
        for eps_t, allowed in ((1e-2, 1), (1e-6, 0)):
            bad = _truncation_failures(config, eps_t, scale.c2_trials, seed, ci)
            parts.append(f"{bad}/{scale.c2_trials}")
            if bad > allowed:
                failures.append(f"{config[0]} at eps_t={eps_t}: {bad} failures (allowed {allowed})")
    detail = f"failures per config at eps_t 1e-2/1e-6: {', '.join(parts)}"
    return Result(2, "randomized truncation", not failures, detail, failures=failures)


# ---------------------------------------------------------------------------
# Criterion 3: representative families


def _union_family(members: dict[tuple, int], alpha: int) -> dict[tuple, int]:
    """All disjoint unions of ``alpha`` members, each with its best weight."""
    out: dict[tuple, int] = {}
    for combo in combinations(sorted(members), alpha):
        union: set = set()
        ok = True
        for h in combo:
            if union & set(h):
                ok = False
                break
            union |= set(h)
        if ok:
            key = tuple(sorted(union))
            w = sum(members[h] for h in combo)
            out[key] = max(out.get(key, w), w)
    return out


def _witness_problems(entries: list[RepEntry], members: dict[tuple, int], alpha: int) -> list[str]:
    out = []
    for e in entries:
        parts = e.parts()
        union: set = set()
        for h in parts:
            if h not in members or union & set(h):
                out.append(f"bad witness chain for {list(e.set)}")
                break
            union |= set(h)
        else:
            if len(parts) != alpha or tuple(sorted(union)) != e.set or sum(members[h] for h in parts) != e.weight:
                out.append(f"witness chain of {list(e.set)} does not reproduce it")
    return out


def _random_members(rng: np.random.Generator, labels: list, gamma: int, count: int) -> dict[tuple, int]:
    members: dict[tuple, int] = {}
    for _ in range(count):
        h = tuple(sorted(int(x) for x in rng.choice(labels, size=gamma, replace=False)))
        members[h] = int(rng.integers(-5, 10))
    return members


def criterion_3(scale: Scale, seed: int) -> Result:
    ctx = FieldCtx(101)
    failures: list[str] = []
    counts = {"single": 0, "unions": 0, "intersection": 0}
    for t in range(scale.c3_per_kind):
        # single matroid, one set size
        rng = _rng(seed, 3, 0, t)
        r = int(rng.integers(2, 7))
        n = int(rng.integers(max(5, r), 11))
        labels = list(range(1, n + 1))
        size = int(rng.integers(1, r))
        beta = int(rng.integers(0, r - size + 1))
        rep = random_matrix(rng, ctx, r, labels, density=0.5)
        family = _random_members(rng, labels, size, int(rng.integers(3, 16)))
        out = rep_single(rep, family, beta)
        check = verify_representative([Linear(rep)], family, out, beta, labels)
        counts["single"] += 1
        if not check.ok:
            failures.append(f"single #{t}: {check.reason}")
        if len(out) > math.comb(r, size):
            failures.append(f"single #{t}: {len(out)} > C({r}, {size})")

        # unions and intersections of alpha members of a gamma-family
        for kind, m in (("unions", 1), ("intersection", 2)):
            rng = _rng(seed, 3, m, t)
            gamma = int(rng.integers(1, 3))
            alpha = int(rng.integers(1, min(3, 6 // gamma) + 1))
            beta = int(rng.integers(0, 6 // gamma - alpha + 1))
            r = (alpha + beta) * gamma
            n = int(rng.integers(max(5, r), 11))
            labels = list(range(1, n + 1))
            members = _random_members(rng, labels, gamma, int(rng.integers(3, 9)))
            reps = [random_matrix(rng, ctx, r, labels, density=0.5) for _ in range(m)]
            iumf = IUMF.additive(members)
            if m == 1:
                entries = rep_unions(reps[0], members, alpha, beta, iumf)
                bound = math.comb(r, alpha * gamma)
            else:
                entries = rep_intersection(reps, members, alpha, beta, iumf)
                bound = math.comb(r * m, alpha * gamma * m)
            unions = _union_family(members, alpha)
            candidate = {e.set: e.weight for e in entries}
            check = verify_representative([Linear(x) for x in reps], unions, candidate, beta * gamma, labels)
            counts[kind] += 1
            if not check.ok:
                failures.append(f"{kind} #{t}: {check.reason}")
            if len(entries) > bound:
                failures.append(f"{kind} #{t}: {len(entries)} members exceed the bound {bound}")
            failures.extend(f"{kind} #{t}: {p}" for p in _witness_problems(entries, members, alpha))
    total = sum(counts.values())
    detail = f"{total} instances ({', '.join(f'{k} {v}' for k, v in counts.items())}), {len(failures)} violations"
    return Result(3, "representative families", not failures, detail, failures=failures)


# ---------------------------------------------------------------------------
# Criterion 4: set packing


def random_spmc(rng: np.random.Generator) -> SpmcInstance:
    n = int(rng.integers(4, 11))
    labels = list(range(1, n + 1))
    m = int(rng.integers(1, 3))
    alpha = int(rng.integers(1, 4))
    gamma = int(rng.integers(1, 3))
    matroids: list[Matroid] = []
    for _ in range(m):
        if rng.random() < 0.25:
            matroids.append(Linear(random_matrix(rng, FieldCtx(101), int(rng.integers(1, n + 1)), labels, exact=False)))
        else:
            matroids.append(random_structured(rng, str(rng.choice(("uniform", "partition", "graphic", "free"))), labels))
    family: dict[tuple, int] = {}
    for _ in range(int(rng.integers(alpha, 9))):
        size = int(rng.integers(1, gamma + 1))
        h = tuple(sorted(int(x) for x in rng.choice(labels, size=size, replace=False)))
        family[h] = int(rng.integers(-5, 6))
    return SpmcInstance(matroids, family, alpha, tuple(labels))


def criterion_4(scale: Scale, seed: int) -> Result:
    failures: list[str] = []
    infeasible = negative = 0
    start = time.perf_counter()
    for t in range(scale.c4_instances):
        rng = _rng(seed, 4, t)
        inst = random_spmc(rng)
        expected = brute_spmc(inst)
        got = solve_spmc(inst, eps_t=1e-6, rng=rng)
        infeasible += expected is None
        negative += any(w < 0 for w in inst.family.values())
        if (expected is None) != (got is None):
            failures.append(f"#{t}: feasibility differs (brute {expected}, solver {got})")
        elif expected is not None and got is not None and expected.total_weight != got.total_weight:
            failures.append(f"#{t}: weight {got.total_weight} != brute {expected.total_weight}")
    elapsed = time.perf_counter() - start
    passed = not failures and elapsed < 120
    if elapsed >= 120:
        failures.append(f"took {elapsed:.1f} s (target < 120 s)")
    detail = (
        f"{scale.c4_instances} instances ({infeasible} infeasible, {negative} with negative weights), "
        f"{len(failures)} problems"
    )
    return Result(4, "set packing vs brute force", passed, detail, failures=failures)


# ---------------------------------------------------------------------------
# Criterion 5: weighted matroid intersection


def _as_oracle(m: Matroid) -> Oracle:
    return Oracle(m.ground, m.is_independent, name=type(m).__name__.lower())


def criterion_5(scale: Scale, seed: int) -> Result:
    kinds = ("uniform", "partition", "multicolored", "free", "graphic", "bond", "dual", "truncation")
    failures: list[str] = []
    infeasible = 0
    for t in range(scale.c5_pairs):
        rng = _rng(seed, 5, t)
        n = int(rng.integers(3, 10))
        labels = list(range(1, n + 1))
        m1 = _as_oracle(random_structured(rng, str(rng.choice(kinds)), labels))
        m2 = _as_oracle(random_structured(rng, str(rng.choice(kinds)), labels))
        w = {x: int(rng.integers(-5, 10)) for x in labels}
        # mostly sizes both matroids can reach, sometimes any size
        reach = min(4, n) if rng.random() < 0.2 else min(4, m1.rank(), m2.rank())
        ell = int(rng.integers(0, reach + 1))
        rounds: list[frozenset] = []
        got = max_weight_common_independent(m1, m2, w, ell, on_round=rounds.append)
        expected = brute_matroid_intersection(m1, m2, w, ell)
        infeasible += expected is None
        if (got is None) != (expected is None):
            failures.append(f"#{t}: feasibility differs")
            continue
        if got is None or expected is None:
            continue
        if sum(w[x] for x in got) != sum(w[x] for x in expected):
            failures.append(f"#{t}: weight {sum(w[x] for x in got)} != brute {sum(w[x] for x in expected)}")
        if len(got) != ell or not (m1.is_independent(got) and m2.is_independent(got)):
            failures.append(f"#{t}: returned set is not a common independent set of size {ell}")
        for cur in rounds:
            best = brute_matroid_intersection(m1, m2, w, len(cur))
            if best is None or sum(w[x] for x in cur) != sum(w[x] for x in best):
                failures.append(f"#{t}: intermediate set of size {len(cur)} is not extreme")
                break
    detail = f"{scale.c5_pairs} oracle pairs ({infeasible} infeasible), {len(failures)} mismatches"
    return Result(5, "weighted matroid intersection vs brute force", not failures, detail, failures=failures)


# ---------------------------------------------------------------------------
# Criterion 6: facility location end to end

UFLP_SHAPES = ((0, 1), (1, 1), (0, 2), (2, 1), (1, 2), (0, 3))
"""(facility matroids, client matroids) cycled through by criterion 6."""


def uflp_case(seed: int, index: int, max_rank: int = 3) -> tuple[UflpInstance, int, int, int]:
    """The index-th criterion-6 instance and its (r, a, c).

    Rank 3 is paired with at most two matroids besides the coloring one;
    three more at rank 3 exceed the linear route's wedge budget.
    """
    rng = _rng(seed, 6, index)
    a, c = UFLP_SHAPES[index % len(UFLP_SHAPES)]
    r = 1 + (index // len(UFLP_SHAPES)) % max_rank
    if r == 3 and a + c == 3:
        r = 2
    uniform_client = a <= 1 and c == 1 and index % 2 == 0
    return random_uflp(rng, 10, r, a, c, uniform_client), r, a, c


def _route_check(inst: UflpInstance, route: str, seed: int) -> tuple[int, list[str]]:
    problems: list[str] = []
    trace: list[dict] = []

    def on_mcc(cc, sol) -> None:
        if sol.mcc_value is not None and sol.mcc_value > sol.profit:
            problems.append(f"color-constrained value {sol.mcc_value} exceeds its profit {sol.profit}")

    sol = solve_uflp_mc(inst, epsilon=1e-6, seed=seed, route=route, on_mcc=on_mcc, trace=trace)
    problems.extend(check_solution(inst, sol))
    profits = [step["profit"] for step in trace]
    if any(b < a for a, b in zip(profits, profits[1:])):
        problems.append("best-so-far profit decreased")
    return sol.profit, problems


def criterion_6(scale: Scale, seed: int) -> Result:
    failures: list[str] = []
    recovered: list[str] = []
    runs = {"uniform": 0, "linear": 0}
    for t in range(scale.c6_instances):
        inst, r, a, c = uflp_case(seed, t, scale.c6_max_rank)
        expected = brute_uflp(inst).profit
        routes = ["linear"]
        if a <= 1 and c == 1 and isinstance(inst.client_matroids[0], Uniform):
            routes.insert(0, "uniform")
        profits = {}
        for route in routes:
            runs[route] += 1
            got, problems = _route_check(inst, route, seed)
            failures.extend(f"#{t} {route}: {p}" for p in problems)
            if got != expected:
                again, problems = _route_check(inst, route, seed + 1_000_003)
                failures.extend(f"#{t} {route} rerun: {p}" for p in problems)
                if again != expected:
                    failures.append(f"#{t} {route}: profit {got}, rerun {again}, brute {expected}")
                else:
                    recovered.append(f"#{t} {route}")
                got = again
            profits[route] = got
        if len(set(profits.values())) > 1:
            failures.append(f"#{t}: routes disagree {profits}")
    if len(recovered) > 1:
        failures.append(f"{len(recovered)} mismatches needed a rerun: {', '.join(recovered)}")
    detail = (
        f"{scale.c6_instances} instances (uniform route {runs['uniform']}, linear route {runs['linear']}), "
        f"{len(recovered)} recovered by rerun, {len(failures)} failures"
    )
    return Result(6, "facility location vs brute force", not failures, detail, failures=failures)


# ---------------------------------------------------------------------------
# Criterion 7: reductions


def _stc_rank_cap(inst: StcInstance) -> int:
    """Largest r the battery solves: matroids beyond one facility matroid
    push the linear route's wedge vectors past its budget at r = 3."""
    return 3 if len(stc_to_uflp(inst).facility_matroids) <= 1 else 2


def _stc_cases(scale: Scale, seed: int) -> Iterator[tuple[str, StcInstance]]:
    graphs = [g for g in small_graphs(5) if len(g[1]) <= 8]
    if scale.c7_graphs is not None:
        graphs = graphs[: scale.c7_graphs]
    for gi, (nv, edges) in enumerate(graphs):
        vertices = list(range(nv))
        yield f"corpus graph {gi}", StcInstance(vertices, edges, [], 0)
        if edges:
            rng = _rng(seed, 7, 0, gi)
            yield f"corpus graph {gi} with communities", _random_stc(rng, vertices, edges, int(rng.integers(1, 3)))
    for t in range(scale.c7_random):
        rng = _rng(seed, 7, 1, t)
        nv = int(rng.integers(4, 7))
        pairs = list(combinations(range(nv), 2))
        count = int(rng.integers(1, min(8, len(pairs)) + 1))
        edges = [pairs[i] for i in sorted(rng.choice(len(pairs), size=count, replace=False))]
        yield f"random graph {t}", _random_stc(rng, list(range(nv)), edges, int(rng.integers(0, 3)))


def _check_stc(name: str, base: StcInstance, seed: int) -> tuple[int, list[str]]:
    failures = []
    best = brute_stc(base)
    cap = _stc_rank_cap(base)
    top = 0 if best is None else best
    solved = 0
    for r in sorted({1, top, top + 1}):
        if r < 1 or r > cap:
            continue
        inst = StcInstance(base.vertices, base.edges, base.communities, r)
        res = solve_stc(inst, seed=seed)
        solved += 1
        expected = best is not None and best >= r
        if res.yes != expected:
            failures.append(f"{name}, r={r}: solver says {res.yes}, brute force max {best}")
        if res.yes:
            weak = {frozenset(e) for e in res.weak_edges}
            for x in inst.communities:
                strong = [e for e in inst.edges if frozenset(e) not in weak]
                if not StcInstance(inst.vertices, strong, [], 0).community_connected(x):
                    failures.append(f"{name}, r={r}: weak edges disconnect community {x}")
    return solved, failures


def criterion_7(scale: Scale, seed: int) -> Result:
    failures: list[str] = []
    stc_solves = 0
    for name, base in _stc_cases(scale, seed):
        solved, problems = _check_stc(name, base, seed)
        stc_solves += solved
        failures.extend(problems)

    graphs = small_graphs(5)
    if scale.c7_graphs is not None:
        graphs = graphs[: scale.c7_graphs]
    clique_checks = 0
    for gi, (nv, edges) in enumerate(graphs):
        vertices = list(range(1, nv + 1))
        named = [(a + 1, b + 1) for a, b in edges]
        for k in range(1, 4):
            clique_checks += 1
            got = brute_uflp(clique_to_uflp(vertices, named, k)).profit >= k
            expected = any(has_clique(vertices, named, s) for s in combinations(vertices, k))
            if got != expected:
                failures.append(f"clique graph {gi} k={k}: profit test {got}, clique {expected}")

    for t in range(scale.c7_cover):
        rng = _rng(seed, 7, 2, t)
        nv = int(rng.integers(1, 9))
        elements = list(range(1, nv + 1))
        sets = [
            [int(x) for x in rng.choice(elements, size=int(rng.integers(1, nv + 1)), replace=False)]
            for _ in range(int(rng.integers(1, 6)))
        ]
        budget = int(rng.integers(1, len(sets) + 1))
        coverage = max(
            len(set().union(*(set(sets[i]) for i in combo)))
            for size in range(budget + 1)
            for combo in combinations(range(len(sets)), size)
        )
        exact = brute_uflp(maxcover_to_uflp(elements, sets, budget, client_rank=nv)).profit
        cap = min(3, nv)
        capped = solve_uflp_mc(maxcover_to_uflp(elements, sets, budget, client_rank=cap), seed=seed).profit
        if exact != coverage:
            failures.append(f"coverage #{t}: brute-force optimum {exact}, coverage {coverage}")
        if capped != min(cap, coverage):
            failures.append(f"coverage #{t}: solver {capped} with {cap} clients, expected {min(cap, coverage)}")
    detail = (
        f"{stc_solves} triadic-closure decisions, {clique_checks} clique checks, "
        f"{scale.c7_cover} coverage instances, {len(failures)} mismatches"
    )
    return Result(7, "reductions", not failures, detail, failures=failures)


# ---------------------------------------------------------------------------
# Criterion 8: scaling sanity


def scaling_instance(n: int, seed: int) -> UflpInstance:
    """n elements, eight random profitable clients per facility, a
    partition facility matroid and a rank-3 uniform client matroid."""
    rng = _rng(seed, 8)
    profits = {}
    for u in range(1, n + 1):
        for v in rng.choice(np.arange(1, n + 1), size=8, replace=False):
            if int(v) != u:
                profits[(u, int(v))] = int(rng.integers(1, 10))
    half = n // 2
    facility = [Partition([(range(1, half + 1), 2), (range(half + 1, n + 1), 2)])]
    return UflpInstance(n, rng.integers(0, 6, n), profits, facility, [Uniform(range(1, n + 1), 3)])


def criterion_8(scale: Scale, seed: int) -> Result:
    inst = scaling_instance(scale.c8_n, seed)
    start = time.perf_counter()
    sol = solve_uflp_mc(inst, seed=seed, route="uniform")
    elapsed = time.perf_counter() - start
    failures = [f"solution problem: {p}" for p in check_solution(inst, sol)]
    if elapsed >= 120:
        failures.append(f"uniform route took {elapsed:.1f} s")
    try:
        brute_uflp(inst)
        failures.append("brute force did not refuse the instance")
    except BudgetExceeded:
        pass
    detail = f"n={inst.n}, r=3: uniform route profit {sol.profit} in {elapsed:.1f} s; brute force refused"
    return Result(8, "scaling sanity", not failures, detail, failures=failures)


# ---------------------------------------------------------------------------
# Criterion 9: determinism over the corpus


def corpus(seed: int = 0) -> list[tuple[str, UflpInstance]]:
    """Named instances covering every route and generator."""
    out: list[tuple[str, UflpInstance]] = [
        ("three-elements", UflpInstance(3, (2, 1, 0), {(1, 3): 5, (2, 3): 4}, [], [Uniform([3], 1)])),
        ("maxcover-example", maxcover_to_uflp([1, 2, 3], [[1, 2], [2, 3]], 1, client_rank=2)),
        ("stc-path", stc_to_uflp(StcInstance(["a", "b", "c"], [("a", "b"), ("b", "c")], [], 1))),
        (
            "stc-path-community",
            stc_to_uflp(StcInstance(["a", "b", "c"], [("a", "b"), ("b", "c")], [["a", "b", "c"]], 1)),
        ),
        ("clique-k3-triangle", clique_to_uflp([1, 2, 3], [(1, 2), (2, 3), (1, 3)], 3)),
        ("clique-k3-path", clique_to_uflp([1, 2, 3], [(1, 2), (2, 3)], 3)),
    ]
    for i, (r, a, c) in enumerate(((2, 1, 1), (2, 0, 2), (2, 2, 1), (3, 1, 1), (1, 1, 2))):
        rng = _rng(seed, 9, i)
        out.append((f"random-r{r}-a{a}-c{c}", random_uflp(rng, 8, r, a, c, uniform_client=a <= 1 and c == 1)))
    out.append(("scaling-n60", scaling_instance(60, seed)))
    return out


def write_corpus(directory: str | Path, seed: int = 0) -> list[Path]:
    """Write every corpus instance as ``<name>.json``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, inst in corpus(seed):
        path = directory / f"{name}.json"
        path.write_text(io.dumps(io.instance_to_json(inst)))
        paths.append(path)
    return paths


def _cli(argv: list[str]) -> int:
    from .cli import main

    sink = _stdio.StringIO()
    with contextlib.redirect_stdout(sink), contextlib.redirect_stderr(sink):
        return main(argv)


def criterion_9(scale: Scale, seed: int) -> Result:
    failures: list[str] = []
    with tempfile.TemporaryDirectory() as tmp:
        paths = write_corpus(Path(tmp) / "corpus", seed)
        if scale.c9_limit is not None:
            paths = paths[: scale.c9_limit]
        for path in paths:
            outs = []
            for run in range(2):
                out = Path(tmp) / f"{path.stem}.{run}.json"
                code = _cli(["solve", str(path), "--seed", str(seed), "-o", str(out)])
                if code not in (0, 1):
                    failures.append(f"{path.stem}: solve exited {code}")
                    break
                outs.append(out.read_bytes())
            else:
                if outs[0] != outs[1]:
                    failures.append(f"{path.stem}: solution files differ between runs")
                if _cli(["verify", str(path), str(Path(tmp) / f"{path.stem}.0.json")]) != 0:
                    failures.append(f"{path.stem}: solution does not verify")
    detail = f"{len(paths)} corpus instances solved twice, {len(failures)} problems"
    return Result(9, "determinism", not failures, detail, failures=failures)


CRITERIA: dict[int, Callable[[Scale, int], Result]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_criterion(number: int, scale: str | Scale = "full", seed: int = 0) -> Result:
    sc = SCALES[scale] if isinstance(scale, str) else scale
    start = time.perf_counter()
    result = CRITERIA[number](sc, seed)
    result.seconds = time.perf_counter() - start
    return result


def run_all(
    scale: str = "full", seed: int = 0, stream: TextIO | None = None, only: Iterable[int] | None = None
) -> list[Result]:
    """Run the criteria in order, printing one line per criterion to ``stream``."""
    results = []
    for number in sorted(only) if only is not None else sorted(CRITERIA):
        result = run_criterion(number, scale, seed)
        results.append(result)
        if stream is not None:
            print(result.line(), file=stream, flush=True)
            for f in result.failures[:5]:
                print(f"    {f}", file=stream, flush=True)
    return results
