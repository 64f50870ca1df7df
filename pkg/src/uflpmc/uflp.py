"""Facility location with matroid constraints.

Given profits p[u, v] and opening costs c[u] on a universe {1..n}, choose
disjoint facilities A and clients C maximizing

    sum over v in C of max over u in A of p[u, v]  -  sum over u in A of c[u]

with A independent in every facility matroid and C independent in every
client matroid (the max over an empty A counts as 0).

:func:`solve_uflp_mc` uses random colorings.  For every 1 <= l <= k <= r
(r the smallest client-matroid rank) it draws colorings with k + l colors,
splits the colors into l facility colors and k client colors, assigns every
client color to one facility color, and solves the resulting color-constrained
problem (:class:`CcInstance`) with one of two routes:

* :func:`solve_mcc_uniform`: one facility matroid (any oracle) and one uniform
  client matroid; a weighted matroid intersection.
* :func:`solve_mcc_linear`: all matroids linear; representative families plus
  set packing.

A cell whose optimistic bound cannot beat the incumbent is skipped; the bound
never undercuts the cell's true optimum, so skipping cannot lose optimality.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations, product
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from .field import FieldCtx
from .gfmatrix import GFMatrix, block_diag
from .intersection import max_weight_common_independent
from .matroid import (
    Free,
    Linear,
    Matroid,
    Multicolored,
    Uniform,
    compile_linear,
    contains_oracle,
    linear_leaves,
    truncate_same_field,
    truncation_field_bound,
)
from .repfam import IUMF, blowup, canon, rep_intersection
from .spmc import SpmcInstance, choose_field, solve_spmc

__all__ = [
    "UflpInstance",
    "UflpSolution",
    "CcInstance",
    "profit",
    "make_solution",
    "check_solution",
    "mcc_value",
    "solve_mcc_uniform",
    "solve_mcc_linear",
    "solve_uflp_mc",
    "trial_count",
    "with_client_bound",
    "RouteTooLarge",
    "WEDGE_LIMIT",
]

ROUTES = ("auto", "uniform", "linear", "brute")
_NEG = -1e15


@dataclass
class UflpInstance:
    n: int
    costs: tuple[int, ...]
    profits: dict[tuple[int, int], int]
    facility_matroids: list[Matroid] = field(default_factory=list)
    client_matroids: list[Matroid] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        self.costs = tuple(int(c) for c in self.costs)
        if len(self.costs) != self.n:
            raise ValueError(f"expected {self.n} costs, got {len(self.costs)}")
        if any(c < 0 for c in self.costs):
            raise ValueError("costs must be nonnegative")
        profits: dict[tuple[int, int], int] = {}
        items = self.profits.items() if isinstance(self.profits, Mapping) else self.profits
        for (u, v), p in items:
            u, v, p = int(u), int(v), int(p)
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"profit entry ({u}, {v}) outside the universe")
            if p < 0:
                raise ValueError("profits must be nonnegative")
            if p:
                profits[(u, v)] = p
        self.profits = profits
        uni = set(self.universe)
        for m in list(self.facility_matroids) + list(self.client_matroids):
            if not m.ground <= uni:
                raise ValueError("matroid ground set is not inside the universe")

    @property
    def universe(self) -> range:
        return range(1, self.n + 1)

    def cost(self, u: int) -> int:
        return self.costs[u - 1]

    def p(self, u: int, v: int) -> int:
        return self.profits.get((u, v), 0)

    def profit_matrix(self) -> np.ndarray:
        """Dense (n+1) x (n+1) array indexed by labels (row/column 0 unused)."""
        mat = np.zeros((self.n + 1, self.n + 1), dtype=np.int64)
        for (u, v), p in self.profits.items():
            mat[u, v] = p
        return mat


def profit(inst: UflpInstance, a: Iterable[int], c: Iterable[int]) -> int:
    """Profit of the pair (A, C); an empty A serves nobody."""
    a, c = set(a), set(c)
    uni = set(inst.universe)
    if a & c:
        raise ValueError("facilities and clients must be disjoint")
    if not (a | c) <= uni:
        raise ValueError("solution elements outside the universe")
    served = sum(max(inst.p(u, v) for u in a) for v in c) if a else 0
    return served - sum(inst.cost(u) for u in a)


@dataclass(frozen=True)
class UflpSolution:
    A: tuple[int, ...]
    C: tuple[int, ...]
    profit: int
    assignment: tuple[tuple[int, int], ...]
    probabilistic: bool = False
    epsilon: float | None = None
    seed: int | None = None
    mcc_value: int | None = field(default=None, compare=False)
    stats: dict = field(default_factory=dict, compare=False)


def make_solution(inst: UflpInstance, a: Iterable[int], c: Iterable[int], **extra: Any) -> UflpSolution:
    """Solution record with the profit and a smallest-label argmax assignment."""
    a_t, c_t = tuple(sorted(set(a))), tuple(sorted(set(c)))
    assign: list[tuple[int, int]] = []
    if a_t:
        for v in c_t:
            best = max(a_t, key=lambda u: (inst.p(u, v), -u))
            assign.append((v, best))
    return UflpSolution(a_t, c_t, profit(inst, a_t, c_t), tuple(assign), **extra)


def _independent_in(m: Matroid, s: set) -> bool:
    return s <= m.ground and m.is_independent(s)


def check_solution(inst: UflpInstance, sol: UflpSolution) -> list[str]:
    """Problems with ``sol`` (empty when it is feasible and consistent)."""
    problems: list[str] = []
    a, c = set(sol.A), set(sol.C)
    uni = set(inst.universe)
    if not (a | c) <= uni:
        return ["solution elements outside the universe"]
    if a & c:
        return ["facilities and clients overlap"]
    for i, m in enumerate(inst.facility_matroids):
        if not _independent_in(m, a):
            problems.append(f"facilities dependent in facility matroid {i}")
    for i, m in enumerate(inst.client_matroids):
        if not _independent_in(m, c):
            problems.append(f"clients dependent in client matroid {i}")
    if profit(inst, a, c) != sol.profit:
        problems.append("profit mismatch")
    assigned = dict(sol.assignment)
    if a and set(assigned) != c:
        problems.append("assignment does not cover the clients")
    for v, u in assigned.items():
        if u not in a or v not in c:
            problems.append(f"assignment ({v}, {u}) is not a client-facility pair")
        elif inst.p(u, v) != max(inst.p(x, v) for x in a):
            problems.append(f"client {v} is not assigned to a most profitable facility")
    return problems


def with_client_bound(inst: UflpInstance, max_clients: int | None) -> UflpInstance:
    """Add Uniform(U, max_clients) when the instance has no client matroid."""
    if inst.client_matroids:
        return inst
    if max_clients is None:
        raise ValueError("instance has no client matroid; a bound on the number of clients is required")
    return replace(inst, client_matroids=[Uniform(inst.universe, max_clients)])


# ---------------------------------------------------------------------------
# Color-constrained instances


@dataclass(frozen=True)
class CcInstance:
    """A coloring with colors 1..k+l (facility colors 1..l) and a partition
    of the client colors l+1..l+k into blocks Z_1..Z_l."""

    inst: UflpInstance
    col: Mapping[int, int]
    ell: int
    k: int
    Z: tuple[frozenset, ...]

    def __post_init__(self) -> None:
        if self.ell < 1 or self.k < self.ell:
            raise ValueError("need 1 <= l <= k")
        blocks = tuple(frozenset(b) for b in self.Z)
        object.__setattr__(self, "Z", blocks)
        if len(blocks) != self.ell or any(not b for b in blocks):
            raise ValueError("need l nonempty blocks")
        union: set = set()
        for b in blocks:
            if union & b:
                raise ValueError("blocks must be disjoint")
            union |= b
        if union != set(range(self.ell + 1, self.ell + self.k + 1)):
            raise ValueError("blocks must cover the client colors")
        for u, c in self.col.items():
            if not 1 <= c <= self.k + self.ell:
                raise ValueError(f"color {c} of {u} out of range")

    def U(self, i: int) -> list[int]:
        return sorted(u for u, c in self.col.items() if c == i)

    @property
    def U_A(self) -> list[int]:
        return sorted(u for u, c in self.col.items() if c <= self.ell)

    @property
    def U_C(self) -> list[int]:
        return sorted(u for u, c in self.col.items() if c > self.ell)

    def Z_of(self, u: int) -> list[int]:
        block = self.Z[self.col[u] - 1]
        return sorted(v for v, c in self.col.items() if c in block)


def mcc_value(cc: CcInstance, a: Iterable[int], c: Iterable[int]) -> int:
    """Color-constrained objective: each facility earns only from clients of
    its own client colors."""
    inst = cc.inst
    total = 0
    cs = set(c)
    for u in a:
        total -= inst.cost(u)
        total += sum(inst.p(u, v) for v in cc.Z_of(u) if v in cs)
    return total


def _argmax_label(inst: UflpInstance, u: int, candidates: Iterable[int]) -> int | None:
    best = None
    for v in sorted(candidates):
        if best is None or inst.p(u, v) > inst.p(u, best):
            best = v
    return best


def solve_mcc_uniform(cc: CcInstance) -> UflpSolution | None:
    """Color-constrained problem with at most one facility matroid and one
    uniform client matroid."""
    inst = cc.inst
    if len(inst.facility_matroids) > 1 or len(inst.client_matroids) != 1:
        raise ValueError("the uniform route needs <= 1 facility matroid and exactly 1 client matroid")
    client = inst.client_matroids[0]
    if not isinstance(client, Uniform):
        raise ValueError("the uniform route needs a uniform client matroid")
    facility = inst.facility_matroids[0] if inst.facility_matroids else Free(inst.universe)
    ell, k = cc.ell, cc.k
    if k > client.rank_bound:
        return None
    v1 = client.ground
    present = {cc.col[v] for v in v1 if v in cc.col}
    if not set(range(ell + 1, ell + k + 1)) <= present:
        return None
    by_color = {j: [v for v in cc.U(j) if v in v1] for j in range(ell + 1, ell + k + 1)}
    serve: dict[int, list[int]] = {}
    w: dict[int, int] = {}
    for u in cc.U_A:
        picks = [_argmax_label(inst, u, by_color[j]) for j in sorted(cc.Z[cc.col[u] - 1])]
        serve[u] = [v for v in picks if v is not None]
        w[u] = -inst.cost(u) + sum(inst.p(u, v) for v in serve[u])
    colors = Multicolored([cc.U(i) for i in range(1, ell + 1)])
    a = max_weight_common_independent(facility, colors, w, ell)
    if a is None:
        return None
    c = {v for u in a for v in serve[u]}
    return make_solution(inst, a, c, mcc_value=sum(w[u] for u in a))


HUGE_CHARACTERISTIC = 1 << 31
"""Explicit matrices over a larger characteristic trigger a warning."""


@dataclass
class LinearSetup:
    """Field and compiled representations shared by all cells of one solve."""

    ctx: FieldCtx
    facility: list[GFMatrix]
    client: list[GFMatrix]
    eps_t: float


def linear_setup(inst: UflpInstance, r: int, eps_t: float, rng: np.random.Generator) -> LinearSetup:
    """Pick one field large enough for every truncation the route performs."""
    n = inst.n
    bound = n + 1
    for ell in range(1, r + 1):
        for k in range(ell, r + 1):
            s = k + ell
            gamma = k - ell + 2
            bound = max(
                bound,
                truncation_field_bound(n, s, eps_t),
                truncation_field_bound(n + ell * gamma, ell * gamma, eps_t),
            )
    matroids = list(inst.facility_matroids) + list(inst.client_matroids)
    huge = sorted({mat.ctx.p for m in matroids for mat in linear_leaves(m) if mat.ctx.p > HUGE_CHARACTERISTIC})
    if huge:
        warnings.warn(
            f"explicit matrices over characteristic {huge[0]}: the time and failure-probability "
            "guarantees of the linear route assume a characteristic polynomial in the input size; "
            "no adjusted bound is used",
            RuntimeWarning,
            stacklevel=2,
        )
    ctx = choose_field(matroids, bound, rng)
    fac = [compile_linear(m, ctx, rng, eps_t) for m in inst.facility_matroids]
    cli = [compile_linear(m, ctx, rng, eps_t) for m in inst.client_matroids]
    return LinearSetup(ctx, fac, cli, eps_t)


def _with_free(rep: GFMatrix, free: Sequence[int], universe: Sequence[int]) -> GFMatrix:
    """Representation of (matroid v free(free)) on ``universe``; elements of
    the universe outside the ground become loops."""
    keep = [x for x in rep.labels if x not in set(free) and x in set(universe)]
    parts = [rep.restrict(keep)]
    if free:
        parts.append(GFMatrix.identity(rep.ctx, list(free)))
    return block_diag(parts).over_labels(list(universe))


WEDGE_LIMIT = 1 << 21
"""Largest wedge-vector dimension the linear route attempts."""


class RouteTooLarge(ValueError):
    """The requested route would exceed its memory budget."""


def solve_mcc_linear(
    cc: CcInstance,
    eps_t: float = 1e-9,
    rng: int | np.random.Generator | None = None,
    setup: LinearSetup | None = None,
) -> UflpSolution | None:
    """Color-constrained problem with linear matroids via representative
    families and set packing."""
    inst = cc.inst
    gen = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    for m in list(inst.facility_matroids) + list(inst.client_matroids):
        if contains_oracle(m):
            raise TypeError("the linear route cannot use oracle matroids")
    if setup is None:
        setup = linear_setup(inst, cc.k, eps_t, gen)
    ell, k = cc.ell, cc.k
    s = k + ell
    u_a, u_c = cc.U_A, cc.U_C
    universe = sorted(cc.col)
    colors = Multicolored([cc.U(i) for i in range(1, s + 1)])
    reps = [compile_linear(colors, setup.ctx).over_labels(universe)]
    reps += [_with_free(r, u_c, universe) for r in setup.facility]
    reps += [_with_free(r, u_a, universe) for r in setup.client]
    if any(r.rank() < s for r in reps):
        return None
    dim = math.comb(len(reps) * s, len(reps) * s // 2)
    if dim > WEDGE_LIMIT:
        raise RouteTooLarge(
            f"{len(reps)} matroids truncated to rank {s} need wedge vectors of dimension {dim} "
            f"(limit {WEDGE_LIMIT}); use fewer matroids, a smaller client rank or another route"
        )
    truncated = truncate_same_field(reps, s, gen, eps_t)
    blown = blowup(truncated)
    family: dict[tuple, int] = {}
    for u in u_a:
        zu = cc.Z_of(u)
        if not zu:
            continue
        size = len(cc.Z[cc.col[u] - 1])
        weights = {(v,): inst.p(u, v) for v in zu}
        entries = rep_intersection(
            truncated, list(weights), size, s - size, IUMF.additive(weights), blown=blown
        )
        for e in entries:
            family[canon(e.set + (u,))] = e.weight - inst.cost(u)
    if not family:
        return None
    packing = solve_spmc(
        SpmcInstance([Linear(t) for t in truncated], family, ell, tuple(universe)),
        eps_t,
        gen,
        ctx=truncated[0].ctx,
    )
    if packing is None:
        return None
    chosen = set().union(*map(set, packing.chosen))
    a = chosen & set(u_a)
    c = chosen & set(u_c)
    return make_solution(inst, a, c, mcc_value=packing.total_weight)


# ---------------------------------------------------------------------------
# Color coding


def trial_count(ell: int, k: int, r: int, epsilon: float) -> int:
    """Colorings for the pair (l, k): ceil(e^(k+l) * ln(R / epsilon)) with R
    the number of pairs, so each pair fails with probability <= epsilon / R."""
    pairs = r * (r + 1) // 2
    return max(1, math.ceil(math.exp(k + ell) * math.log(pairs / epsilon)))


@lru_cache(maxsize=None)
def _cells(ell: int, k: int) -> tuple[list[tuple[tuple[int, ...], tuple[int, ...]]], np.ndarray, np.ndarray]:
    """All (X, assignment) cells for colors 0..k+l-1.

    X lists the facility colors in increasing order (renamed 1..l); the other
    colors, in increasing order, are renamed l+1..l+k and ``assignment[j]``
    is the facility slot (0-based) of the j-th client color.  Also returns,
    per cell and slot, the facility color and the bitmask of client colors
    it serves (both shaped (cells, l)).
    """
    s = k + ell
    cells = []
    for x in combinations(range(s), ell):
        for f in product(range(ell), repeat=k):
            if len(set(f)) == ell:
                cells.append((x, f))
    slot_color = np.zeros((len(cells), ell), dtype=np.int64)
    slot_mask = np.zeros((len(cells), ell), dtype=np.int64)
    for ci, (x, f) in enumerate(cells):
        ys = [c for c in range(s) if c not in x]
        slot_color[ci] = x
        for j, slot in enumerate(f):
            slot_mask[ci, slot] |= 1 << ys[j]
    return cells, slot_color, slot_mask


def _cc_from_cell(inst: UflpInstance, coloring: np.ndarray, ell: int, k: int, cell: tuple) -> CcInstance:
    x, f = cell
    s = k + ell
    ys = [c for c in range(s) if c not in x]
    rename = {c: i + 1 for i, c in enumerate(x)}
    rename.update({c: ell + 1 + j for j, c in enumerate(ys)})
    col = {u: rename[int(coloring[u - 1])] for u in inst.universe}
    blocks = [set() for _ in range(ell)]
    for j, slot in enumerate(f):
        blocks[slot].add(ell + 1 + j)
    return CcInstance(inst, col, ell, k, tuple(frozenset(b) for b in blocks))


def _eligible(inst: UflpInstance, matroids: Sequence[Matroid]) -> np.ndarray:
    ok = np.ones(inst.n, dtype=bool)
    for u in inst.universe:
        for m in matroids:
            if u not in m.ground or not m.is_independent({u}):
                ok[u - 1] = False
                break
    return ok


class _Bounds:
    """Vectorized optimistic bounds on the color-constrained optimum of every cell.

    A cell's bound adds, over its facility colors x, the best value of
    (-cost(u) + sum over served client colors j of the best profit u can
    take from a client of color j) among eligible facilities u of color x.
    """

    def __init__(self, inst: UflpInstance, fac_ok: np.ndarray, cli_ok: np.ndarray) -> None:
        pm = inst.profit_matrix()[1:, 1:]
        np.fill_diagonal(pm, 0)
        pm[~fac_ok, :] = 0
        pm[:, ~cli_ok] = 0
        self.pm = pm
        self.eu, self.ev = np.nonzero(pm)
        self.ep = pm[self.eu, self.ev].astype(np.float64)
        # ineligible facilities get a prohibitive cost
        self.costs = np.where(fac_ok, np.array(inst.costs, dtype=np.float64), -_NEG)
        self.fac_ok = fac_ok
        self.cli_ok = cli_ok

    def pair_bound(self, ell: int, k: int) -> float:
        """Bound over all colorings for the pair (l, k)."""
        if not self.fac_ok.any() or not self.cli_ok.any():
            return _NEG
        best_client = np.sort(self.pm.max(axis=0)[self.cli_ok])[::-1]
        cheapest = np.sort(self.costs[self.fac_ok])
        if len(best_client) < k or len(cheapest) < ell:
            return _NEG
        return float(np.maximum(best_client[:k], 0).sum() - cheapest[:ell].sum())

    def cell_bounds(
        self, colorings: np.ndarray, s: int, slot_color: np.ndarray, slot_mask: np.ndarray
    ) -> np.ndarray:
        """Bounds for a batch of colorings, shape (colorings, cells)."""
        nb, n = colorings.shape
        rows = np.arange(nb)
        # best[b, u, j]: 0 when some eligible client v != u has color j
        # (raised by u's positive profits), NEG when none exists
        onehot = colorings[:, :, None] == np.arange(s)[None, None, :]
        count = (onehot & self.cli_ok[None, :, None]).sum(axis=1)
        others = count[:, None, :] - (onehot & self.cli_ok[None, :, None])
        best = np.where(others > 0, 0.0, _NEG)
        if self.eu.size:
            flat = (rows[:, None] * n + self.eu[None, :]) * s + colorings[:, self.ev]
            np.maximum.at(best.reshape(-1), flat.reshape(-1), np.broadcast_to(self.ep, flat.shape).reshape(-1))
        # gain[b, u, T]: facility u serving the color set T (a bitmask)
        bits = ((np.arange(1 << s)[:, None] >> np.arange(s)[None, :]) & 1).astype(np.float64)
        gain = best @ bits.T - self.costs[None, :, None]
        # top[b, x, T]: best gain among facilities of color x
        order = np.argsort(colorings, axis=1, kind="stable")
        grouped = np.take_along_axis(gain, order[:, :, None], axis=1).reshape(nb * n, 1 << s)
        grouped = np.vstack([grouped, np.full((1, 1 << s), _NEG)])  # empty trailing segments
        sizes = onehot.sum(axis=1)
        offsets = np.concatenate([np.zeros((nb, 1), np.int64), np.cumsum(sizes, axis=1)[:, :-1]], axis=1)
        starts = rows[:, None] * n + offsets
        top = np.maximum.reduceat(grouped, starts.reshape(-1), axis=0).reshape(nb, s, 1 << s)
        top[sizes == 0] = _NEG
        top = np.maximum(top, _NEG)
        return top[:, slot_color, slot_mask].sum(axis=2)

    def batch_size(self, n: int, s: int, cells: int) -> int:
        return max(1, min(4096, (1 << 23) // max(1, n * (1 << s) + cells * s)))


def _relaxations(inst: UflpInstance, r: int) -> list[UflpInstance]:
    """Instances that keep one facility matroid and replace the client
    matroids by a cardinality bound on their common ground; each one's
    color-constrained optimum bounds the original's from above."""
    common = set(inst.universe)
    for m in inst.client_matroids:
        common &= {v for v in m.ground if m.is_independent({v})}
    client = [Uniform(sorted(common), min(r, len(common)))]
    facilities = inst.facility_matroids or [Free(inst.universe)]
    return [replace(inst, facility_matroids=[f], client_matroids=client) for f in facilities]


def _relaxed_value(cc: CcInstance, relaxations: Sequence[UflpInstance]) -> float:
    value = math.inf
    for relaxed in relaxations:
        sol = solve_mcc_uniform(replace(cc, inst=relaxed))
        value = min(value, -math.inf if sol is None else sol.mcc_value)
    return value


def _tuple_value(cc: CcInstance, incumbent: int, limit: int = 256) -> float:
    """Upper bound from enumerating facility tuples (one per facility color).

    Tuples dependent in a facility matroid are skipped.  For each remaining
    tuple the clients are chosen exactly by enumeration when the client
    tuples number at most ``limit``; otherwise each client matroid is taken
    on its own (a maximum-weight common independent set with the color
    classes) and the smallest of those values is used.  Returns +inf when
    there are more than ``limit`` facility tuples.
    """
    inst = cc.inst
    groups = [cc.U(i) for i in range(1, cc.ell + 1)]
    if math.prod(len(g) for g in groups) > limit:
        return math.inf
    by_color = [cc.U(j) for j in range(cc.ell + 1, cc.ell + cc.k + 1)]
    if any(not g for g in by_color):
        return -math.inf
    exact = math.prod(len(g) for g in by_color) <= limit
    colors = Multicolored(by_color)
    best = -math.inf
    for a in product(*groups):
        if not all(_independent_in(m, set(a)) for m in inst.facility_matroids):
            continue
        owner = {j: a[i] for i, block in enumerate(cc.Z) for j in block}
        value = {v: inst.p(owner[cc.col[v]], v) for g in by_color for v in g}
        base = -sum(inst.cost(u) for u in a)
        if base + sum(max(value[v] for v in g) for g in by_color) <= max(best, incumbent):
            continue
        if exact:
            for c in product(*by_color):
                total = base + sum(value[v] for v in c)
                if total > best and all(_independent_in(m, set(c)) for m in inst.client_matroids):
                    best = total
            continue
        tuple_value = math.inf
        for m in inst.client_matroids:
            if len(m.ground & colors.ground) < cc.k:
                tuple_value = -math.inf
                break
            c = max_weight_common_independent(m, colors, value, cc.k)
            tuple_value = min(tuple_value, -math.inf if c is None else base + sum(value[v] for v in c))
        best = max(best, tuple_value)
    return best


def solve_uflp_mc(
    inst: UflpInstance,
    epsilon: float = 1e-6,
    eps_t: float = 1e-9,
    seed: int = 0,
    route: str = "auto",
    max_clients: int | None = None,
    on_mcc: Callable[[CcInstance, UflpSolution], None] | None = None,
    trace: list | None = None,
) -> UflpSolution:
    """Maximum-profit solution; optimal with probability >= 1 - epsilon for
    the randomized routes, always feasible."""
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    work = with_client_bound(inst, max_clients)
    facility, clients = work.facility_matroids, work.client_matroids
    uniform_ok = len(facility) <= 1 and len(clients) == 1 and isinstance(clients[0], Uniform)
    linear_ok = not any(contains_oracle(m) for m in list(facility) + list(clients))
    if route == "auto":
        route = "uniform" if uniform_ok else "linear" if linear_ok else "brute"
    elif route == "uniform" and not uniform_ok:
        raise ValueError("the uniform route needs <= 1 facility matroid and one uniform client matroid")
    elif route == "linear" and not linear_ok:
        raise ValueError("the linear route cannot use oracle matroids")
    if route == "brute":
        from .oracle import brute_uflp

        sol = brute_uflp(work)
        return replace(sol, probabilistic=False, epsilon=None, seed=None, stats={"route": "brute"})

    r = min(m.rank() for m in clients)
    master = np.random.SeedSequence(seed)
    setup = None
    if route == "linear":
        setup = linear_setup(work, r, eps_t, np.random.default_rng(master.spawn(1)[0]))
    bounds = _Bounds(work, _eligible(work, facility), _eligible(work, clients))
    best = make_solution(work, (), ())
    stats = {"route": route, "colorings": 0, "cells": 0, "solved": 0, "relaxed_out": 0}
    relaxations = _relaxations(work, r) if route == "linear" else []

    # Bound every (pair, coloring, cell) first, then solve cells best-first
    # and stop once no remaining bound beats the incumbent.
    pairs: list[tuple[int, int, np.ndarray]] = []
    found: list[tuple[np.ndarray, int, np.ndarray, np.ndarray]] = []
    for ell in range(1, r + 1):
        for k in range(ell, r + 1):
            if bounds.pair_bound(ell, k) <= best.profit:
                continue
            s = k + ell
            cells, slot_color, slot_mask = _cells(ell, k)
            trials = trial_count(ell, k, r, epsilon)
            pair_seq = np.random.SeedSequence(seed, spawn_key=(ell, k))
            colorings = np.random.default_rng(pair_seq).integers(0, s, size=(trials, work.n))
            stats["colorings"] += trials
            stats["cells"] += trials * len(cells)
            step = bounds.batch_size(work.n, s, len(cells))
            for i in range(0, trials, step):
                ub = bounds.cell_bounds(colorings[i : i + step], s, slot_color, slot_mask)
                ts, cis = np.nonzero(ub > best.profit)
                if ts.size:
                    found.append((ub[ts, cis], len(pairs), ts + i, cis))
            pairs.append((ell, k, colorings))
    if found:
        vals = np.concatenate([f[0] for f in found])
        qp = np.concatenate([np.full(f[0].size, f[1]) for f in found])
        qt = np.concatenate([f[2] for f in found])
        qc = np.concatenate([f[3] for f in found])
        order = np.lexsort((qc, qt, qp, -vals))  # bound descending, then generation order
    else:
        vals = np.empty(0)
        order = np.empty(0, dtype=np.int64)
    for q in order:
        if vals[q] <= best.profit:
            break
        ell, k, colorings = pairs[int(qp[q])]
        t, ci = int(qt[q]), int(qc[q])
        cc = _cc_from_cell(work, colorings[t], ell, k, _cells(ell, k)[0][ci])
        if route == "uniform":
            stats["solved"] += 1
            sol = solve_mcc_uniform(cc)
        else:
            if _relaxed_value(cc, relaxations) <= best.profit or _tuple_value(cc, best.profit) <= best.profit:
                stats["relaxed_out"] += 1
                continue
            stats["solved"] += 1
            cell_seq = np.random.SeedSequence(seed, spawn_key=(ell, k, t, ci, 1))
            sol = solve_mcc_linear(cc, eps_t, np.random.default_rng(cell_seq), setup)
        if sol is None:
            continue
        problems = check_solution(work, sol)
        if problems:
            raise RuntimeError(f"internal verification failure: {problems}")
        if on_mcc is not None:
            on_mcc(cc, sol)
        if sol.profit > best.profit:
            best = sol
            if trace is not None:
                trace.append(
                    {"ell": ell, "k": k, "trial": t, "cell": ci,
                     "A": list(sol.A), "C": list(sol.C), "profit": sol.profit}
                )
    return replace(best, probabilistic=True, epsilon=epsilon, seed=seed, mcc_value=None, stats=stats)
