"""Matroids: structured constructors, oracles, combinators and compilation.

Every matroid exposes ``ground`` and ``is_independent``.  All variants except
``Oracle`` can be compiled to a linear representation (:func:`compile_linear`)
over a large enough field; the compiled matrix has one column per ground
element, in sorted label order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .field import FieldCtx, _as_rng, embedding_into, extend_and_embed
from .gfmatrix import GFMatrix, block_diag, kernel_for, rref

__all__ = [
    "Matroid",
    "Uniform",
    "Partition",
    "Multicolored",
    "Free",
    "Graphic",
    "Bond",
    "Linear",
    "Oracle",
    "Dual",
    "DirectSum",
    "UnionFree",
    "Restriction",
    "Truncation",
    "compile_linear",
    "union_with_free",
    "truncate_randomized",
    "truncate_same_field",
    "truncation_field_bound",
    "axioms_check",
    "AxiomReport",
    "FieldTooSmall",
    "contains_oracle",
    "linear_leaves",
]

Label = Hashable


class FieldTooSmall(ValueError):
    """The target field cannot host the requested representation."""


def _fs(xs: Iterable[Label]) -> frozenset:
    return frozenset(xs)


class Matroid:
    """Base class; subclasses define ``ground`` and ``_indep``."""

    ground: frozenset

    def is_independent(self, s: Iterable[Label]) -> bool:
        s = _fs(s)
        extra = s - self.ground
        if extra:
            raise ValueError(f"elements {sorted(extra, key=repr)!r} are outside the ground set")
        return self._indep(s)

    def _indep(self, s: frozenset) -> bool:
        raise NotImplementedError

    def rank_of(self, t: Iterable[Label]) -> int:
        """Size of a maximal independent subset of ``t`` (greedy)."""
        t = _fs(t)
        extra = t - self.ground
        if extra:
            raise ValueError(f"elements {sorted(extra, key=repr)!r} are outside the ground set")
        return self._rank_of(t)

    def _rank_of(self, t: frozenset) -> int:
        basis: set = set()
        for x in sorted(t):
            if self._indep(_fs(basis | {x})):
                basis.add(x)
        return len(basis)

    def rank(self) -> int:
        return self._rank_of(self.ground)

    def children(self) -> tuple["Matroid", ...]:
        return ()

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Structured variants


@dataclass(frozen=True, eq=False)
class Uniform(Matroid):
    ground: frozenset
    rank_bound: int

    def __init__(self, ground: Iterable[Label], rank: int) -> None:
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        object.__setattr__(self, "ground", _fs(ground))
        object.__setattr__(self, "rank_bound", int(rank))

    def _indep(self, s: frozenset) -> bool:
        return len(s) <= self.rank_bound

    def _rank_of(self, t: frozenset) -> int:
        return min(len(t), self.rank_bound)

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        return _vandermonde(target, sorted(self.ground), self.rank_bound)


def _vandermonde(target: FieldCtx, labels: list[Label], r: int) -> GFMatrix:
    n = len(labels)
    if r >= n:
        return GFMatrix.identity(target, labels)
    if target.order < n:
        raise FieldTooSmall(f"{target} has fewer than {n} elements for a uniform matroid")
    kern = kernel_for(target)
    xs = range(1, n + 1) if target.order > n else range(n)
    data = kern.zeros((r, n))
    for j, x in enumerate(xs):
        v = 1
        for i in range(r):
            data[i, j] = v
            v = target.mul(v, x)
    return GFMatrix(target, labels, data)


@dataclass(frozen=True, eq=False)
class Partition(Matroid):
    """Blocks with cardinality caps; blocks are pairwise disjoint."""

    blocks: tuple[tuple[frozenset, int], ...]
    ground: frozenset = field(init=False)

    def __init__(self, blocks: Iterable[tuple[Iterable[Label], int]]) -> None:
        bl = tuple((_fs(g), int(r)) for g, r in blocks)
        seen: set = set()
        for g, r in bl:
            if r < 0:
                raise ValueError("block rank must be nonnegative")
            if seen & g:
                raise ValueError("partition blocks must be disjoint")
            seen |= g
        object.__setattr__(self, "blocks", bl)
        object.__setattr__(self, "ground", _fs(seen))

    def _indep(self, s: frozenset) -> bool:
        return all(len(s & g) <= r for g, r in self.blocks)

    def _rank_of(self, t: frozenset) -> int:
        return sum(min(len(t & g), r) for g, r in self.blocks)

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        if not self.blocks:
            return GFMatrix.zeros(target, 0, [])
        parts = [_vandermonde(target, sorted(g), r) for g, r in self.blocks]
        return block_diag(parts).restrict(sorted(self.ground))


class Multicolored(Partition):
    """Partition matroid with every block capped at one element."""

    def __init__(self, blocks: Iterable[Iterable[Label]]) -> None:
        super().__init__([(b, 1) for b in blocks])


@dataclass(frozen=True, eq=False)
class Free(Matroid):
    ground: frozenset

    def __init__(self, ground: Iterable[Label]) -> None:
        object.__setattr__(self, "ground", _fs(ground))

    def _indep(self, s: frozenset) -> bool:
        return True

    def _rank_of(self, t: frozenset) -> int:
        return len(t)

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        return GFMatrix.identity(target, sorted(self.ground))


class _DSU:
    def __init__(self, items: Iterable[Hashable]) -> None:
        self.parent = {x: x for x in items}

    def find(self, x: Hashable) -> Hashable:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: Hashable, b: Hashable) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


@dataclass(frozen=True, eq=False)
class Graphic(Matroid):
    """Cycle matroid of a multigraph; edge ``i`` joins ``edges[i]`` and is
    labeled ``edge_labels[i]``."""

    vertices: tuple
    edges: tuple[tuple[Hashable, Hashable], ...]
    edge_labels: tuple
    ground: frozenset = field(init=False)

    def __init__(
        self,
        vertices: int | Iterable[Hashable],
        edges: Sequence[tuple[Hashable, Hashable]],
        edge_labels: Sequence[Label] | None = None,
    ) -> None:
        verts = tuple(range(vertices)) if isinstance(vertices, int) else tuple(vertices)
        eds = tuple((a, b) for a, b in edges)
        vset = set(verts)
        for a, b in eds:
            if a not in vset or b not in vset:
                raise ValueError(f"edge ({a!r}, {b!r}) has an unknown endpoint")
        labels = tuple(range(len(eds))) if edge_labels is None else tuple(edge_labels)
        if len(labels) != len(eds) or len(set(labels)) != len(labels):
            raise ValueError("edge labels must be distinct, one per edge")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", eds)
        object.__setattr__(self, "edge_labels", labels)
        object.__setattr__(self, "ground", _fs(labels))

    def _edge_of(self) -> dict:
        return dict(zip(self.edge_labels, self.edges))

    def _indep(self, s: frozenset) -> bool:
        dsu = _DSU(self.vertices)
        emap = self._edge_of()
        return all(dsu.union(*emap[lab]) for lab in s)

    def _incidence(self, target: FieldCtx) -> GFMatrix:
        kern = kernel_for(target)
        vindex = {v: i for i, v in enumerate(self.vertices)}
        order = sorted(self.ground)
        emap = self._edge_of()
        data = kern.zeros((len(self.vertices), len(order)))
        minus_one = target.neg(1)
        for j, lab in enumerate(order):
            a, b = emap[lab]
            if a == b:
                continue
            data[vindex[a], j] = 1
            data[vindex[b], j] = 1 if target.p == 2 else minus_one
        return GFMatrix(target, order, data)

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        return self._incidence(target)

    def is_connected(self) -> bool:
        dsu = _DSU(self.vertices)
        comps = len(self.vertices)
        for a, b in self.edges:
            if dsu.union(a, b):
                comps -= 1
        return comps <= 1


class Bond(Graphic):
    """Bond (cocycle) matroid: S independent iff the graph minus S stays
    connected.  Only connected graphs are accepted."""

    def __init__(
        self,
        vertices: int | Iterable[Hashable],
        edges: Sequence[tuple[Hashable, Hashable]],
        edge_labels: Sequence[Label] | None = None,
    ) -> None:
        super().__init__(vertices, edges, edge_labels)
        if not self.is_connected():
            raise ValueError("bond matroids need a connected graph")

    def _indep(self, s: frozenset) -> bool:
        dsu = _DSU(self.vertices)
        comps = len(self.vertices)
        for lab, (a, b) in zip(self.edge_labels, self.edges):
            if lab not in s and dsu.union(a, b):
                comps -= 1
        return comps <= 1

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        return self._incidence(target).dualize()


@dataclass(frozen=True, eq=False)
class Linear(Matroid):
    matrix: GFMatrix
    ground: frozenset = field(init=False)

    def __init__(self, matrix: GFMatrix) -> None:
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "ground", _fs(matrix.labels))

    def _indep(self, s: frozenset) -> bool:
        return self.matrix.columns_independent(s)

    def _rank_of(self, t: frozenset) -> int:
        return self.matrix.rank(t)

    def rank(self) -> int:
        return self.matrix.rank()

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        mat = self.matrix
        if mat.ctx != target:
            mat = mat.embed(target, embedding_into(mat.ctx, target, rng))
        return mat.restrict(sorted(self.ground))


@dataclass(frozen=True, eq=False)
class Oracle(Matroid):
    """Black-box matroid given by an independence predicate (not compilable)."""

    ground: frozenset
    predicate: Callable[[frozenset], bool]
    name: str = "oracle"

    def __init__(
        self, ground: Iterable[Label], predicate: Callable[[frozenset], bool], name: str = "oracle"
    ) -> None:
        object.__setattr__(self, "ground", _fs(ground))
        object.__setattr__(self, "predicate", predicate)
        object.__setattr__(self, "name", name)

    def _indep(self, s: frozenset) -> bool:
        return bool(self.predicate(s))

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        raise TypeError(f"oracle matroid {self.name!r} has no linear representation")


# ---------------------------------------------------------------------------
# Combinators


@dataclass(frozen=True, eq=False)
class Dual(Matroid):
    inner: Matroid
    ground: frozenset = field(init=False)

    def __init__(self, inner: Matroid) -> None:
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "ground", inner.ground)

    def children(self) -> tuple[Matroid, ...]:
        return (self.inner,)

    def _indep(self, s: frozenset) -> bool:
        rest = self.ground - s
        return self.inner._rank_of(rest) == self.inner.rank()

    def _rank_of(self, t: frozenset) -> int:
        return len(t) + self.inner._rank_of(self.ground - t) - self.inner.rank()

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        return self.inner._compile(target, rng, eps_t).dualize()


@dataclass(frozen=True, eq=False)
class DirectSum(Matroid):
    parts: tuple[Matroid, ...]
    ground: frozenset = field(init=False)

    def __init__(self, parts: Iterable[Matroid]) -> None:
        ps = tuple(parts)
        seen: set = set()
        for m in ps:
            if seen & m.ground:
                raise ValueError("direct sum needs pairwise disjoint ground sets")
            seen |= m.ground
        object.__setattr__(self, "parts", ps)
        object.__setattr__(self, "ground", _fs(seen))

    def children(self) -> tuple[Matroid, ...]:
        return self.parts

    def _indep(self, s: frozenset) -> bool:
        return all(m._indep(s & m.ground) for m in self.parts)

    def _rank_of(self, t: frozenset) -> int:
        return sum(m._rank_of(t & m.ground) for m in self.parts)

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        if not self.parts:
            return GFMatrix.zeros(target, 0, [])
        mats = [m._compile(target, rng, eps_t) for m in self.parts]
        return block_diag(mats).restrict(sorted(self.ground))


@dataclass(frozen=True, eq=False)
class UnionFree(Matroid):
    """Union of ``inner`` with the free matroid on ``extra``: S is independent
    iff the part of S outside ``extra`` is independent in ``inner``."""

    inner: Matroid
    extra: frozenset
    ground: frozenset = field(init=False)

    def __init__(self, inner: Matroid, extra: Iterable[Label]) -> None:
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "extra", _fs(extra))
        object.__setattr__(self, "ground", inner.ground | self.extra)

    def children(self) -> tuple[Matroid, ...]:
        return (self.inner,)

    def _indep(self, s: frozenset) -> bool:
        return self.inner._indep(s - self.extra)

    def _rank_of(self, t: frozenset) -> int:
        return self.inner._rank_of(t - self.extra) + len(t & self.extra)

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        base = self.inner._compile(target, rng, eps_t).delete(self.extra & self.inner.ground)
        if not self.extra:
            return base
        free = GFMatrix.identity(target, sorted(self.extra))
        return block_diag([base, free]).restrict(sorted(self.ground))


@dataclass(frozen=True, eq=False)
class Restriction(Matroid):
    inner: Matroid
    ground: frozenset

    def __init__(self, inner: Matroid, sub: Iterable[Label]) -> None:
        sub = _fs(sub)
        if not sub <= inner.ground:
            raise ValueError("restriction must be to a subset of the ground set")
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "ground", sub)

    def children(self) -> tuple[Matroid, ...]:
        return (self.inner,)

    def _indep(self, s: frozenset) -> bool:
        return self.inner._indep(s)

    def _rank_of(self, t: frozenset) -> int:
        return self.inner._rank_of(t)

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        return self.inner._compile(target, rng, eps_t).restrict(sorted(self.ground))


@dataclass(frozen=True, eq=False)
class Truncation(Matroid):
    inner: Matroid
    k: int
    ground: frozenset = field(init=False)

    def __init__(self, inner: Matroid, k: int) -> None:
        if k < 0:
            raise ValueError("truncation rank must be nonnegative")
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "ground", inner.ground)

    def children(self) -> tuple[Matroid, ...]:
        return (self.inner,)

    def _indep(self, s: frozenset) -> bool:
        return len(s) <= self.k and self.inner._indep(s)

    def _rank_of(self, t: frozenset) -> int:
        return min(self.k, self.inner._rank_of(t))

    def _compile(self, target: FieldCtx, rng: np.random.Generator, eps_t: float) -> GFMatrix:
        rep = self.inner._compile(target, rng, eps_t)
        k = min(self.k, rep.rank())
        if target.order < truncation_field_bound(rep.ncols, k, eps_t):
            raise FieldTooSmall(
                f"{target} is too small to truncate {rep.ncols} columns to rank {k} "
                f"with failure budget {eps_t}"
            )
        return truncate_randomized(rep, k, rng, eps_t)


def union_with_free(m: Matroid, extra: Iterable[Label]) -> Matroid:
    extra = _fs(extra)
    return m if not extra else UnionFree(m, extra)


def contains_oracle(m: Matroid) -> bool:
    return isinstance(m, Oracle) or any(contains_oracle(c) for c in m.children())


def linear_leaves(m: Matroid) -> list[GFMatrix]:
    if isinstance(m, Linear):
        return [m.matrix]
    out: list[GFMatrix] = []
    for c in m.children():
        out.extend(linear_leaves(c))
    return out


def compile_linear(
    m: Matroid,
    target: FieldCtx,
    rng: int | np.random.Generator | None = None,
    eps_t: float = 1e-9,
) -> GFMatrix:
    """Linear representation of ``m`` over ``target`` (columns in sorted label
    order).  Randomness is used only by truncation nodes."""
    if contains_oracle(m):
        raise TypeError("cannot compile a matroid containing an oracle node")
    out = m._compile(target, _as_rng(rng), eps_t)
    return out.restrict(sorted(m.ground))


# ---------------------------------------------------------------------------
# Truncation


def truncation_field_bound(n: int, k: int, eps_t: float) -> int:
    """Field size making a random k x r projection fail with probability at
    most ``eps_t`` (union bound over the k-subsets of n columns)."""
    if k <= 0:
        return 2
    return max(2, math.ceil(2 * k * math.comb(n, k) / eps_t))


def _extension_for(ctx: FieldCtx, bound: int) -> int:
    s = 1
    while ctx.order**s < bound:
        s += 1
    return s


def _random_full_rank(rep: GFMatrix, k: int, rng: np.random.Generator, attempts: int = 64) -> GFMatrix:
    kern = rep.kernel
    red = rep.row_reduced()
    if k == 0:
        return GFMatrix.zeros(rep.ctx, 0, rep.labels)
    out = None
    for _ in range(attempts):
        t = kern.random(rng, (k, red.rows))
        out = red.left_multiply(t)
        # a rank drop is a detectable failure; resample
        if len(rref(kern, out.data)[1]) == k:
            return out
    assert out is not None
    return out


def truncate_randomized(
    rep: GFMatrix,
    k: int,
    rng: int | np.random.Generator | None = None,
    eps_t: float = 1e-9,
) -> GFMatrix:
    """k-truncation of the matroid of ``rep``: T * rep for a uniformly random
    k x r matrix T, over an extension large enough for failure budget eps_t."""
    return truncate_same_field([rep], k, rng, eps_t)[0]


def truncate_same_field(
    reps: Sequence[GFMatrix],
    k: int,
    rng: int | np.random.Generator | None = None,
    eps_t: float = 1e-9,
) -> list[GFMatrix]:
    """Truncate several representations to rank ``k`` inside one shared field."""
    if not reps:
        return []
    gen = _as_rng(rng)
    ctx = reps[0].ctx
    if any(r.ctx != ctx for r in reps):
        raise ValueError("truncate_same_field needs representations over one field")
    for r in reps:
        if k > r.rank():
            raise ValueError(f"cannot truncate a rank-{r.rank()} matroid to rank {k}")
    bound = max(truncation_field_bound(r.ncols, k, eps_t) for r in reps)
    s = _extension_for(ctx, bound)
    ext, embed = extend_and_embed(ctx, s, gen)
    return [_random_full_rank(r.embed(ext, embed), k, gen) for r in reps]


# ---------------------------------------------------------------------------
# Axiom checking


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    axiom: int | None = None
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def axioms_check(m: Matroid) -> AxiomReport:
    """Exhaustive check of the three independence axioms (|ground| <= 16).

    Axiom 1: the empty set is independent.  Axiom 2: subsets of independent
    sets are independent.  Axiom 3 (exchange) is checked in the equivalent
    form: for every independent A, the set of elements that cannot extend A
    has rank exactly |A|; a failure yields an independent B with
    |B| = |A| + 1 and no x in B - A extending A.
    """
    elems = sorted(m.ground)
    n = len(elems)
    if n > 16:
        raise ValueError(f"ground set of size {n} exceeds the exhaustive limit 16")

    def members(mask: int) -> tuple:
        return tuple(elems[i] for i in range(n) if mask >> i & 1)

    size = 1 << n
    indep = np.fromiter(
        (m.is_independent(members(mask)) for mask in range(size)), dtype=bool, count=size
    )
    if not indep[0]:
        return AxiomReport(False, 1, ((),))
    masks = np.arange(size)
    for b in range(n):
        bit = 1 << b
        has = (masks & bit) != 0
        bad = np.flatnonzero(has & indep & ~indep[masks ^ bit])
        if bad.size:
            mask = int(bad[0])
            return AxiomReport(False, 2, (members(mask), members(mask ^ bit)))
    popcount = np.array([bin(x).count("1") for x in range(size)], dtype=np.int64)
    rank = np.where(indep, popcount, 0)
    for b in range(n):
        bit = 1 << b
        has = (masks & bit) != 0
        rank = np.where(has, np.maximum(rank, rank[masks ^ bit]), rank)
    ext = np.zeros(size, dtype=np.int64)
    for b in range(n):
        bit = 1 << b
        can = ((masks & bit) == 0) & indep & indep[masks | bit]
        ext |= np.where(can, bit, 0)
    blocked = (size - 1) & ~ext
    bad = np.flatnonzero(indep & (rank[blocked] != popcount))
    if bad.size:
        a = int(bad[0])
        t = int(blocked[a])
        target = int(popcount[a]) + 1
        for cand in combinations([i for i in range(n) if t >> i & 1], target):
            mask = sum(1 << i for i in cand)
            if indep[mask]:
                return AxiomReport(False, 3, (members(a), members(mask)))
    return AxiomReport(True)
