"""Maximum-weight common independent set of prescribed size in two matroids.

Classical weighted augmenting-path algorithm on the exchange graph.  Starting
from the empty set, each round finds a source-to-sink path of maximum weight
gain (insertions count +w, removals -w) and, among those, one with the fewest
arcs; flipping the path keeps the set extreme (maximum weight for its size).
"""

from __future__ import annotations

from typing import Callable, Hashable, Mapping

from .matroid import Matroid

__all__ = ["max_weight_common_independent"]

Label = Hashable


def max_weight_common_independent(
    m1: Matroid,
    m2: Matroid,
    w: Mapping[Label, int] | Callable[[Label], int],
    ell: int,
    on_round: Callable[[frozenset], None] | None = None,
) -> frozenset | None:
    """A set of exactly ``ell`` elements independent in both matroids with
    maximum total weight, or None if no common independent set has that size.

    Only elements in both ground sets are considered.  ``on_round`` is called
    with the current set after every augmentation.
    """
    weight = w if callable(w) else w.__getitem__
    ground = sorted(m1.ground & m2.ground)
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    if ell > len(m1.ground | m2.ground):
        raise ValueError(f"ell = {ell} exceeds the ground set size")
    if ell > len(ground):
        return None
    cur: frozenset = frozenset()
    for _ in range(ell):
        path = _best_path(m1, m2, weight, ground, cur)
        if path is None:
            return None
        cur = cur.symmetric_difference(path)
        if on_round is not None:
            on_round(cur)
    return cur


def _best_path(
    m1: Matroid,
    m2: Matroid,
    weight: Callable[[Label], int],
    ground: list[Label],
    cur: frozenset,
) -> list[Label] | None:
    inside = sorted(cur)
    outside = [x for x in ground if x not in cur]
    sources = {x for x in outside if m1.is_independent(cur | {x})}
    sinks = {x for x in outside if m2.is_independent(cur | {x})}
    if not sources or not sinks:
        return None
    arcs: dict[Label, list[Label]] = {x: [] for x in ground}
    for y in inside:
        base = cur - {y}
        for x in outside:
            swapped = base | {x}
            if m1.is_independent(swapped):
                arcs[y].append(x)  # y -> x: exchange keeps m1-independence
            if m2.is_independent(swapped):
                arcs[x].append(y)  # x -> y: exchange keeps m2-independence
    # node costs: -w for insertions, +w for removals; minimize (cost, arcs)
    cost = {x: (weight(x) if x in cur else -weight(x)) for x in ground}
    dist: dict[Label, tuple[int, int]] = {}
    pred: dict[Label, Label | None] = {}
    for x in sorted(sources):
        dist[x] = (cost[x], 0)
        pred[x] = None
    for _ in range(len(ground)):
        changed = False
        for u in ground:
            if u not in dist:
                continue
            du = dist[u]
            for v in arcs[u]:
                cand = (du[0] + cost[v], du[1] + 1)
                if v not in dist or cand < dist[v]:
                    dist[v] = cand
                    pred[v] = u
                    changed = True
        if not changed:
            break
    reach = [(dist[t], t) for t in sorted(sinks) if t in dist]
    if not reach:
        return None
    _, end = min(reach, key=lambda item: item[0])  # first minimum = smallest label
    path = [end]
    while pred[path[-1]] is not None:
        path.append(pred[path[-1]])  # type: ignore[arg-type]
    path.reverse()
    return path
