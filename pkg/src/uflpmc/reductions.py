"""Instance generators that encode other problems as facility location.

* :func:`maxcover_to_uflp`: maximum coverage.  Sets are facilities, elements
  are clients, and a uniform facility matroid caps the number of sets.
* :func:`stc_to_uflp` / :func:`solve_stc`: strong triadic closure with tight
  communities.  Edges are facilities (weak edges), open triangles are
  clients, bond matroids keep each community connected, and a uniform client
  matroid of rank r asks for r resolved triangles.
* :func:`clique_to_uflp`: the clique encoding whose client matroid is a
  non-linear oracle (solved by brute force only).

Every generated instance records how its integer labels map back to the
original objects in ``meta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Any, Hashable, Iterable, Sequence

from .matroid import Bond, DirectSum, Free, Matroid, Oracle, Uniform, UnionFree
from .uflp import UflpInstance, UflpSolution, solve_uflp_mc

__all__ = [
    "StcInstance",
    "StcResult",
    "P3",
    "maxcover_to_uflp",
    "find_violations",
    "stc_to_uflp",
    "solve_stc",
    "clique_to_uflp",
    "clique_client_matroid",
    "has_clique",
]

Vertex = Hashable

P3: tuple[tuple[int, int], ...] = ((0, 1), (1, 2))
"""The induced two-edge path (open triangle) on pattern vertices 0-1-2."""


def maxcover_to_uflp(
    elements: Sequence[Hashable],
    sets: Sequence[Iterable[Hashable]],
    budget: int,
    client_rank: int | None = None,
) -> UflpInstance:
    """Elements get labels 1..|V|, sets get |V|+1..|V|+|H|.

    A set earns 1 from each element it contains; at most ``budget`` sets may
    open.  ``client_rank`` optionally adds Uniform(elements, client_rank) as
    the client matroid; otherwise the caller supplies a client bound.
    """
    sets = [list(s) for s in sets]
    if not sets:
        raise ValueError("need at least one set")
    elements = list(elements)
    elabel = {x: i + 1 for i, x in enumerate(elements)}
    if len(elabel) != len(elements):
        raise ValueError("elements must be distinct")
    nv = len(elements)
    profits: dict[tuple[int, int], int] = {}
    for j, s in enumerate(sets):
        for x in s:
            if x not in elabel:
                raise ValueError(f"set {j} contains unknown element {x!r}")
            profits[(nv + 1 + j, elabel[x])] = 1
    n = nv + len(sets)
    facility = [Uniform(range(nv + 1, n + 1), budget)]
    clients = [] if client_rank is None else [Uniform(range(1, nv + 1), client_rank)]
    meta = {"maxcover": {"elements": elements, "sets": sets, "budget": budget}}
    return UflpInstance(n, (0,) * n, profits, facility, clients, meta)


# ---------------------------------------------------------------------------
# Strong triadic closure


@dataclass
class StcInstance:
    """Graph with communities; asks for r open triangles resolved by weak
    edges while every community stays connected through strong edges."""

    vertices: list
    edges: list[tuple]
    communities: list[list] = field(default_factory=list)
    r: int = 0

    def __post_init__(self) -> None:
        self.vertices = list(self.vertices)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("vertices must be distinct")
        seen: set = set()
        edges = []
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop at {a!r}")
            if a not in vset or b not in vset:
                raise ValueError(f"edge ({a!r}, {b!r}) has an unknown endpoint")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"duplicate edge ({a!r}, {b!r})")
            seen.add(key)
            edges.append((a, b))
        self.edges = edges
        self.communities = [list(x) for x in self.communities]
        for x in self.communities:
            if not set(x) <= vset:
                raise ValueError("community contains an unknown vertex")
        if self.r < 0:
            raise ValueError("r must be nonnegative")

    def inner_edges(self, community: Iterable[Vertex]) -> list[int]:
        """Indices of edges with both endpoints in the community."""
        x = set(community)
        return [i for i, (a, b) in enumerate(self.edges) if a in x and b in x]

    def community_connected(self, community: Iterable[Vertex]) -> bool:
        x = list(dict.fromkeys(community))
        if not x:
            return True
        adj: dict = {v: [] for v in x}
        for i in self.inner_edges(x):
            a, b = self.edges[i]
            adj[a].append(b)
            adj[b].append(a)
        seen = {x[0]}
        stack = [x[0]]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == len(x)


def find_violations(
    vertices: Sequence[Vertex],
    edges: Sequence[tuple],
    patterns: Sequence[Sequence[tuple[int, int]]] = (P3,),
) -> list[frozenset]:
    """Edge-index sets of induced copies of each pattern.

    A pattern is an edge list on vertices 0..h-1.  Every h-subset of vertices
    is tested against every relabeling, so the cost is O(n^h) per pattern.
    Copies are reported once each, in vertex-subset order.
    """
    index = {frozenset(e): i for i, e in enumerate(edges)}
    out: list[frozenset] = []
    seen: set = set()
    for pattern in patterns:
        h = 1 + max(max(e) for e in pattern)
        want = {frozenset(e) for e in pattern}
        for subset in combinations(vertices, h):
            present = {frozenset((a, b)) for a, b in combinations(subset, 2) if frozenset((a, b)) in index}
            for perm in permutations(range(h)):
                mapped = {frozenset((subset[perm[a]], subset[perm[b]])) for a, b in want}
                if mapped == present:
                    key = frozenset(index[e] for e in mapped)
                    if key not in seen:
                        seen.add(key)
                        out.append(key)
                    break
    return out


def _community_groups(inst: StcInstance) -> list[list[int]]:
    """First-fit grouping of communities into groups with pairwise disjoint
    inner edge sets (each group becomes one direct sum)."""
    groups: list[list[int]] = []
    used: list[set] = []
    for i, x in enumerate(inst.communities):
        es = set(inst.inner_edges(x))
        for g, u in zip(groups, used):
            if not (u & es):
                g.append(i)
                u |= es
                break
        else:
            groups.append([i])
            used.append(set(es))
    return groups


def stc_to_uflp(
    inst: StcInstance, patterns: Sequence[Sequence[tuple[int, int]]] = (P3,)
) -> UflpInstance:
    """Edges get labels 1..|E| (input order), violations |E|+1.. .

    Costs are zero, an edge earns 1 from each violation containing it, the
    client matroid is Uniform(violations, r) and one facility matroid per
    group of edge-disjoint communities keeps those communities connected.
    """
    for x in inst.communities:
        if not inst.community_connected(x):
            raise ValueError(f"community {x!r} is not connected")
    m = len(inst.edges)
    edge_labels = list(range(1, m + 1))
    violations = find_violations(inst.vertices, inst.edges, patterns)
    n = m + len(violations)
    profits: dict[tuple[int, int], int] = {}
    for j, viol in enumerate(violations):
        for i in viol:
            profits[(i + 1, m + 1 + j)] = 1
    facility: list[Matroid] = []
    for group in _community_groups(inst):
        parts: list[Matroid] = []
        covered: set = set()
        for ci in group:
            x = list(dict.fromkeys(inst.communities[ci]))
            inner = inst.inner_edges(x)
            parts.append(Bond(x, [inst.edges[i] for i in inner], [i + 1 for i in inner]))
            covered |= {i + 1 for i in inner}
        rest = [e for e in edge_labels if e not in covered]
        facility.append(UnionFree(DirectSum(parts), rest))
    if not facility:
        facility.append(Free(edge_labels))
    clients = [Uniform(range(m + 1, n + 1), inst.r)]
    meta = {
        "stc": {
            "vertices": inst.vertices,
            "edges": [list(e) for e in inst.edges],
            "communities": inst.communities,
            "r": inst.r,
            "violations": [sorted(i + 1 for i in v) for v in violations],
        }
    }
    return UflpInstance(n, (0,) * n, profits, facility, clients, meta)


@dataclass(frozen=True)
class StcResult:
    yes: bool
    weak_edges: list[tuple]
    resolved: int
    solution: UflpSolution | None = None


def solve_stc(
    inst: StcInstance,
    epsilon: float = 1e-6,
    seed: int = 0,
    route: str = "auto",
    patterns: Sequence[Sequence[tuple[int, int]]] = (P3,),
) -> StcResult:
    """Yes iff weak edges resolving r violations exist with every community
    connected; the weak edges of the found solution are returned."""
    if not all(inst.community_connected(x) for x in inst.communities):
        return StcResult(False, [], 0)
    uflp = stc_to_uflp(inst, patterns)
    sol = solve_uflp_mc(uflp, epsilon=epsilon, seed=seed, route=route)
    m = len(inst.edges)
    weak = [inst.edges[u - 1] for u in sol.A if u <= m]
    return StcResult(sol.profit >= inst.r, weak, sol.profit, sol)


# ---------------------------------------------------------------------------
# Clique


def has_clique(vertices: Sequence[Vertex], edges: Iterable[tuple], subset: Iterable[Vertex]) -> bool:
    es = {frozenset(e) for e in edges}
    return all(frozenset(p) in es for p in combinations(list(subset), 2))


def clique_client_matroid(vertices: Sequence[Vertex], edges: Sequence[tuple], k: int) -> Oracle:
    """Client matroid over the pair elements: sets of size < 2k are
    independent; a 2k-set is independent unless it is a union of k pairs
    whose vertices do not form a clique; larger sets are dependent."""
    nv = len(vertices)
    owner = {nv + 2 * i + j: i for i in range(nv) for j in (1, 2)}
    es = [tuple(e) for e in edges]

    def predicate(s: frozenset) -> bool:
        if len(s) < 2 * k:
            return True
        if len(s) > 2 * k:
            return False
        pairs = {owner[x] for x in s}
        is_pair_union = all({nv + 2 * i + 1, nv + 2 * i + 2} <= s for i in pairs)
        if not is_pair_union:
            return True
        return has_clique(vertices, es, [vertices[i] for i in pairs])

    return Oracle(sorted(owner), predicate, name=f"clique-k{k}")


def clique_to_uflp(vertices: Sequence[Vertex], edges: Sequence[tuple], k: int) -> UflpInstance:
    """Vertices get labels 1..|V|; vertex i's pair gets |V|+2i-1, |V|+2i.

    Opening a vertex costs 1 and earns 1 from each element of its pair, so
    profit k is reachable iff the graph has a k-clique.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    vertices = list(vertices)
    vset = set(vertices)
    for a, b in edges:
        if a not in vset or b not in vset:
            raise ValueError(f"edge ({a!r}, {b!r}) has an unknown endpoint")
    nv = len(vertices)
    n = 3 * nv
    costs = tuple([1] * nv + [0] * (2 * nv))
    profits = {}
    for i in range(nv):
        profits[(i + 1, nv + 2 * i + 1)] = 1
        profits[(i + 1, nv + 2 * i + 2)] = 1
    meta: dict[str, Any] = {"clique": {"vertices": vertices, "edges": [list(e) for e in edges], "k": k}}
    return UflpInstance(n, costs, profits, [], [clique_client_matroid(vertices, edges, k)], meta)
