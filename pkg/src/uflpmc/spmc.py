"""Set packing with matroid constraints.

Choose ``alpha`` pairwise disjoint members of a weighted family whose union is
independent in every given matroid, maximizing the total weight.

Members are padded to a common size gamma with dummy elements (one pool of
gamma dummies per slot), every matroid is extended by the free matroid on the
dummies and truncated to rank alpha * gamma, and a max intersection
0-representative of the alpha-fold unions is computed.  It has at most one
member, which is an optimal packing; its witness chain gives the sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .field import FieldCtx, _as_rng, field_new, next_prime
from .gfmatrix import GFMatrix, block_diag
from .matroid import (
    Matroid,
    compile_linear,
    contains_oracle,
    linear_leaves,
    truncate_same_field,
    truncation_field_bound,
)
from .repfam import IUMF, RepEntry, canon, rep_intersection

__all__ = ["SpmcInstance", "SpmcSolution", "solve_spmc", "choose_field", "dummy_pools"]


@dataclass
class SpmcInstance:
    matroids: list[Matroid]
    family: dict[tuple, int]
    alpha: int
    universe: tuple = field(default=())

    def __post_init__(self) -> None:
        if self.alpha < 1:
            raise ValueError("alpha must be at least 1")
        fam: dict[tuple, int] = {}
        items = self.family.items() if isinstance(self.family, Mapping) else self.family
        for s, w in items:
            key = canon(s)
            if key in fam:
                raise ValueError(f"duplicate set {list(key)} in family")
            fam[key] = int(w)
        self.family = fam
        if not self.universe:
            uni: set = set()
            for m in self.matroids:
                uni |= m.ground
            self.universe = tuple(sorted(uni))
        else:
            self.universe = tuple(sorted(set(self.universe)))
        uni_set = set(self.universe)
        for m in self.matroids:
            if not m.ground <= uni_set:
                raise ValueError("matroid ground set is not inside the universe")
        for key in fam:
            if not set(key) <= uni_set:
                raise ValueError(f"set {list(key)} is not inside the universe")


@dataclass(frozen=True)
class SpmcSolution:
    chosen: list[tuple]
    total_weight: int


def dummy_pools(alpha: int, gamma: int) -> list[list[int]]:
    """Disjoint pools D_1..D_alpha of gamma reserved negative labels."""
    return [[-(1 + i * gamma + j) for j in range(gamma)] for i in range(alpha)]


def choose_field(
    matroids: Sequence[Matroid], min_size: int, rng: int | np.random.Generator | None = None
) -> FieldCtx:
    """A field with at least ``min_size`` elements into which every explicit
    matrix of ``matroids`` embeds; a prime field when there are none."""
    ctxs = {mat.ctx for m in matroids for mat in linear_leaves(m)}
    if not ctxs:
        return FieldCtx(next_prime(max(min_size, 2)))
    chars = {c.p for c in ctxs}
    if len(chars) > 1:
        raise ValueError("explicit matrices over fields of different characteristic")
    p = chars.pop()
    degree = lcm(*(c.d for c in ctxs))
    if len(ctxs) == 1:
        only = next(iter(ctxs))
        if only.order >= min_size:
            return only
    s = 1
    while p ** (degree * s) < min_size:
        s += 1
    return field_new(p, degree * s, rng=_as_rng(rng))


def _packing_ok(inst: SpmcInstance, chosen: Sequence[tuple]) -> bool:
    seen: set = set()
    for s in chosen:
        if seen & set(s):
            return False
        seen |= set(s)
    for m in inst.matroids:
        if not seen <= m.ground or not m.is_independent(seen):
            return False
    return True


def solve_spmc(
    inst: SpmcInstance,
    eps_t: float = 1e-9,
    rng: int | np.random.Generator | None = None,
    ctx: FieldCtx | None = None,
    trace: list | None = None,
) -> SpmcSolution | None:
    """Optimal packing of ``inst.alpha`` family members, or None if infeasible.

    Optimality holds unless the random truncation fails (probability at most
    ``eps_t``); returned packings are always re-verified.
    """
    gen = _as_rng(rng)
    if any(contains_oracle(m) for m in inst.matroids):
        raise TypeError("set packing needs linear-compilable matroids, found an oracle")
    members = sorted(inst.family)
    if not members:
        return None
    if any(not isinstance(x, (int, np.integer)) for x in inst.universe):
        raise TypeError("set packing universes must consist of integers")
    alpha = inst.alpha
    gamma = max(1, max(len(h) for h in members))
    pools = dummy_pools(alpha, gamma)
    dummies = sorted(d for pool in pools for d in pool)
    if set(dummies) & set(inst.universe):
        raise ValueError("universe collides with the reserved negative dummy labels")

    padded: dict[tuple, tuple[int, tuple]] = {}
    for h in members:
        for pool in pools:
            key = canon(h + tuple(pool[: gamma - len(h)]))
            padded.setdefault(key, (inst.family[h], h))

    k = alpha * gamma
    universe = list(inst.universe)
    n_ext = len(universe) + len(dummies)
    if ctx is None:
        bound = max(n_ext + 1, truncation_field_bound(n_ext, k, eps_t))
        ctx = choose_field(inst.matroids, bound, gen)
    labels = sorted(universe + dummies)
    reps = []
    free = GFMatrix.identity(ctx, dummies)
    for m in inst.matroids:
        base = compile_linear(m, ctx, gen, eps_t).over_labels(universe)
        reps.append(block_diag([base, free]).restrict(labels))
    if not reps:
        raise ValueError("set packing needs at least one matroid")
    truncated = truncate_same_field(reps, k, gen, eps_t)
    weights = {key: w for key, (w, _) in padded.items()}
    entries = rep_intersection(truncated, list(padded), alpha, 0, IUMF.additive(weights))
    if trace is not None:
        trace.extend(_dump(e) for e in entries)
    if not entries:
        return None
    best = entries[0]
    chosen = [padded[part][1] for part in best.parts()]
    total = sum(inst.family[h] for h in chosen)
    if len(chosen) != alpha or total != best.weight or not _packing_ok(inst, chosen):
        raise RuntimeError("set packing result failed re-verification")
    return SpmcSolution(chosen, total)


def _dump(e: RepEntry) -> dict[str, Any]:
    return {"set": list(e.set), "weight": e.weight, "witness": [list(p) for p in e.parts()]}
