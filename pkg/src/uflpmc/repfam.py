"""Representative families.

* :func:`rep_single` keeps a max q-representative subfamily of equally sized
  sets for one linear matroid: sets are visited by decreasing weight and kept
  when their wedge vector (all maximal minors) is linearly independent of the
  wedge vectors kept so far.
* :func:`rep_unions` builds representatives for disjoint unions of alpha
  members of a gamma-family, stage by stage, under an inductive union
  maximizing function (:class:`IUMF`).
* :func:`blowup` and :func:`rep_intersection` reduce the several-matroid case
  to a single block-diagonal matroid over m copies of every element.

Every returned :class:`RepEntry` carries a witness chain that recovers the
decomposition of its set into family members.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .gfmatrix import GFMatrix, SpanBasis, block_diag

__all__ = [
    "IUMF",
    "RepEntry",
    "Blowup",
    "canon",
    "rep_single",
    "rep_unions",
    "blowup",
    "rep_intersection",
]

Label = Hashable
SetKey = tuple


def canon(s: Iterable[Label]) -> SetKey:
    """Canonical encoding of a set: its sorted elements."""
    return tuple(sorted(set(s)))


class IUMF:
    """Inductive union maximizing function: ``base`` is the value of the empty
    union and ``g(value, H)`` extends a union by the member ``H``.  ``g`` must
    be non-decreasing in ``value``.  ``calls`` counts evaluations of ``g``."""

    def __init__(self, base: Any, g: Callable[[Any, SetKey], Any]) -> None:
        self.base = base
        self._g = g
        self.calls = 0

    def __call__(self, value: Any, member: SetKey) -> Any:
        self.calls += 1
        return self._g(value, member)

    @classmethod
    def additive(cls, weights: Mapping[Iterable[Label], Any], base: Any = 0) -> "IUMF":
        """The sum of member weights."""
        table = {canon(k): v for k, v in weights.items()}
        return cls(base, lambda value, member: value + table[member])

    def fold(self, members: Sequence[SetKey]) -> Any:
        value = self.base
        for m in members:
            value = self(value, m)
        return value

    def check_monotone(
        self, members: Sequence[SetKey], values: Sequence[Any], rng: np.random.Generator, samples: int = 100
    ) -> bool:
        """Sampled check that g is non-decreasing in its first argument."""
        if not members or len(values) < 2:
            return True
        for _ in range(samples):
            h = members[int(rng.integers(len(members)))]
            a, b = sorted(values[int(i)] for i in rng.integers(len(values), size=2))
            if self._g(a, h) > self._g(b, h):
                return False
        return True


@dataclass(frozen=True, eq=False)
class RepEntry:
    """A representative set with its weight and decomposition witness
    ``(last member, entry for the rest)``."""

    set: SetKey
    weight: Any
    witness: tuple[SetKey, "RepEntry"] | None = None

    def parts(self) -> list[SetKey]:
        """Members H_1, ..., H_i in the order they were added."""
        out: list[SetKey] = []
        node: RepEntry | None = self
        while node is not None and node.witness is not None:
            member, node = node.witness
            out.append(member)
        out.reverse()
        return out

    def __repr__(self) -> str:
        return f"RepEntry({list(self.set)}, weight={self.weight})"


def _sorted_by_weight(items: list[RepEntry]) -> list[RepEntry]:
    # weight descending, ties broken by the sorted-element tuple ascending
    items = sorted(items, key=lambda e: e.set)
    items.sort(key=lambda e: e.weight, reverse=True)
    return items


def _greedy(rep: GFMatrix, items: list[RepEntry], max_entries: int = 1 << 22) -> list[RepEntry]:
    """Weight-greedy selection of items whose wedge vectors are independent.

    Wedge vectors are computed in chunks of at most ``max_entries`` entries.
    """
    if not items:
        return []
    ordered = _sorted_by_weight(items)
    size = len(ordered[0].set)
    if size > rep.rows:
        return []
    dim = comb(rep.rows, size)
    chunk = max(1, min(256, max_entries // dim))
    basis = SpanBasis(rep.kernel, dim)
    kept: list[RepEntry] = []
    for start in range(0, len(ordered), chunk):
        block = ordered[start : start + chunk]
        vecs = rep.wedge_vectors([e.set for e in block])
        for entry, vec in zip(block, vecs):
            if basis.add(vec):
                kept.append(entry)
                if basis.full:
                    return kept
    return kept


def _check_members(rep: GFMatrix, sets: Iterable[SetKey]) -> None:
    labels = set(rep.labels)
    for s in sets:
        extra = set(s) - labels
        if extra:
            raise ValueError(f"set {list(s)} has elements {sorted(extra)} outside the matrix labels")


def rep_single(
    rep: GFMatrix,
    family: Mapping[Iterable[Label], Any] | Iterable[tuple[Iterable[Label], Any]],
    beta: int | None = None,
) -> dict[SetKey, Any]:
    """Max beta-representative of a weighted family of equally sized sets.

    Returns an insertion-ordered dict (weight descending) of at most
    C(r, alpha) sets, r the rank of ``rep``.
    """
    pairs = family.items() if isinstance(family, Mapping) else family
    weights: dict[SetKey, Any] = {}
    for s, w in pairs:
        key = canon(s)
        if key in weights:
            raise ValueError(f"duplicate set {list(key)} in family")
        weights[key] = w
    if not weights:
        return {}
    sizes = {len(k) for k in weights}
    if len(sizes) != 1:
        raise ValueError("all sets of the family must have the same cardinality")
    alpha = sizes.pop()
    _check_members(rep, weights)
    red = rep.full_row_rank()
    r = red.rows
    if beta is not None and alpha + beta > r:
        raise ValueError(f"alpha + beta = {alpha + beta} exceeds the rank {r}")
    kept = _greedy(red, [RepEntry(k, w) for k, w in weights.items()])
    return {e.set: e.weight for e in kept}


def _family_sets(family: Iterable[Any]) -> list[SetKey]:
    if isinstance(family, Mapping):
        family = family.keys()
    return sorted({canon(s) for s in family})


def rep_unions(
    rep: GFMatrix,
    family: Iterable[Iterable[Label]] | Mapping[Iterable[Label], Any],
    alpha: int,
    beta: int,
    iumf: IUMF,
) -> list[RepEntry]:
    """Max (beta*gamma)-representative of all independent disjoint unions of
    ``alpha`` members of the gamma-family ``family`` w.r.t. ``iumf``.

    The matroid of ``rep`` must have rank exactly (alpha + beta) * gamma.
    """
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be nonnegative")
    if alpha == 0:
        return [RepEntry((), iumf.base)]
    members = _family_sets(family)
    if not members:
        return []
    sizes = {len(h) for h in members}
    if len(sizes) != 1:
        raise ValueError("the family must have uniform cardinality")
    gamma = sizes.pop()
    red = rep.full_row_rank()
    r = red.rows
    if r < 1 or r != (alpha + beta) * gamma:
        raise ValueError(f"rank {r} differs from (alpha + beta) * gamma = {(alpha + beta) * gamma}")
    _check_members(red, members)
    member_sets = [frozenset(h) for h in members]
    stage: list[RepEntry] = [RepEntry((), iumf.base)]
    for _ in range(alpha):
        best: dict[SetKey, RepEntry] = {}
        for prev in stage:
            used = frozenset(prev.set)
            for h, hs in zip(members, member_sets):
                if not used.isdisjoint(hs):
                    continue
                key = tuple(sorted(used | hs))
                value = iumf(prev.weight, h)
                cur = best.get(key)
                if cur is None or value > cur.weight:
                    best[key] = RepEntry(key, value, (h, prev))
        stage = _greedy(red, list(best.values()))
        if not stage:
            return []
    return stage


@dataclass(frozen=True)
class Blowup:
    """Block-diagonal matroid over m copies ``(u, i)`` of every element."""

    matrix: GFMatrix
    copies: int
    labels: tuple

    def lift(self, s: Iterable[Label]) -> SetKey:
        m = self.copies
        return tuple(sorted((u, i) for u in s for i in range(1, m + 1)))

    def lower(self, s: Iterable[tuple[Label, int]]) -> SetKey:
        return canon(u for u, _ in s)


def blowup(reps: Sequence[GFMatrix]) -> Blowup:
    """Direct sum of the m representations with elements renamed to copies."""
    if not reps:
        raise ValueError("blowup needs at least one representation")
    labels = tuple(sorted(reps[0].labels))
    for r in reps[1:]:
        if set(r.labels) != set(labels):
            raise ValueError("all representations must share one label set")
        if r.ctx != reps[0].ctx:
            raise ValueError("all representations must be over one field")
    parts = [
        r.full_row_rank().restrict(labels).relabel(lambda u, i=i: (u, i))
        for i, r in enumerate(reps, start=1)
    ]
    return Blowup(block_diag(parts).restrict(sorted(l for p in parts for l in p.labels)), len(reps), labels)


def rep_intersection(
    reps: Sequence[GFMatrix],
    family: Iterable[Iterable[Label]] | Mapping[Iterable[Label], Any],
    alpha: int,
    beta: int,
    iumf: IUMF,
    blown: Blowup | None = None,
) -> list[RepEntry]:
    """Max intersection (beta*gamma)-representative w.r.t. all m matroids.

    Each representation must have rank exactly (alpha + beta) * gamma.  A
    precomputed ``blown`` (from :func:`blowup` on the same ``reps``) may be
    passed to share cached wedge vectors across calls.
    """
    members = _family_sets(family)
    if alpha == 0:
        return [RepEntry((), iumf.base)]
    if not members:
        return []
    gamma = len(members[0])
    target = (alpha + beta) * gamma
    for r in reps:
        if r.rank() != target:
            raise ValueError(f"rank {r.rank()} differs from (alpha + beta) * gamma = {target}")
    bl = blown if blown is not None else blowup(reps)
    lifted = {bl.lift(h): h for h in members}
    lifted_iumf = IUMF(iumf.base, lambda value, hb: iumf(value, lifted[hb]))
    entries = rep_unions(bl.matrix, list(lifted), alpha, beta, lifted_iumf)
    memo: dict[int, RepEntry] = {}

    def back(e: RepEntry) -> RepEntry:
        if id(e) in memo:
            return memo[id(e)]
        if e.witness is None:
            out = RepEntry(bl.lower(e.set), e.weight)
        else:
            hb, parent = e.witness
            out = RepEntry(bl.lower(e.set), e.weight, (lifted[hb], back(parent)))
        memo[id(e)] = out
        return out

    return [back(e) for e in entries]
