"""Column-labeled matrices over finite fields.

All linear algebra runs through a small *kernel* chosen per field:

* prime fields below 2**50 use int64 numpy arrays with exact modular products
  (a float estimate of the quotient corrects the wrapped 64-bit product);
* every other field stores codes in object arrays and applies the field's own
  add/mul element-wise.

The kernels share one implementation of Gaussian elimination, of batched
exterior products (all maximal minors of many column sets at once), and of
an incremental row-echelon basis used by the representative-set greedy.
"""

from __future__ import annotations

import functools
from itertools import combinations
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .field import Embedding, FieldCtx, FieldElem, code_map

__all__ = ["GFMatrix", "Kernel", "kernel_for", "SpanBasis", "block_diag"]

Label = Hashable

_MID = 1 << 50
_SMALL = 1 << 31
_CACHE_MAX_DIM = 1 << 16  # wedge vectors longer than this are not cached


class Kernel:
    """Vectorized arithmetic on code arrays for one field."""

    def __init__(self, ctx: FieldCtx) -> None:
        self.ctx = ctx
        self.q = ctx.order
        if ctx.d == 1 and ctx.p < _MID:
            self.dtype: Any = np.int64
            self.mode = "small" if ctx.p < _SMALL else "mid"
            self._pf = float(ctx.p)
        elif ctx.d == 1:
            self.dtype = object
            self.mode = "big"
        else:
            self.dtype = object
            self.mode = "ext"
            self._add = np.frompyfunc(ctx.add, 2, 1)
            self._sub = np.frompyfunc(ctx.sub, 2, 1)
            self._mul = np.frompyfunc(ctx.mul, 2, 1)

    def asarray(self, a: Any) -> np.ndarray:
        arr = np.asarray(a)
        if arr.dtype != self.dtype:
            arr = arr.astype(self.dtype)
        return arr

    def zeros(self, shape: tuple[int, ...]) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(0)
            return out
        return np.zeros(shape, dtype=np.int64)

    def ones(self, shape: tuple[int, ...]) -> np.ndarray:
        out = self.zeros(shape)
        out[...] = 1
        return out

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.mode == "ext":
            return self._add(a, b)
        s = a + b
        if self.mode == "big":
            return s % self.ctx.p
        return np.where(s >= self.ctx.p, s - self.ctx.p, s)

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.mode == "ext":
            return self._sub(a, b)
        s = a - b
        if self.mode == "big":
            return s % self.ctx.p
        return np.where(s < 0, s + self.ctx.p, s)

    def neg(self, a: np.ndarray) -> np.ndarray:
        return self.sub(self.zeros(np.shape(a)), a)

    def mul(self, a: Any, b: Any) -> np.ndarray:
        if self.mode == "ext":
            return self._mul(a, b)
        p = self.ctx.p
        if self.mode == "big":
            return (np.asarray(a, dtype=object) * np.asarray(b, dtype=object)) % p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.mode == "small":
            return (a * b) % p
        quo = np.floor(a.astype(np.float64) * b.astype(np.float64) / self._pf).astype(np.int64)
        r = a * b - quo * p  # exact modulo 2**64, true value in (-2p, 2p)
        r = np.where(r < 0, r + p, r)
        return np.where(r >= p, r - p, r)

    def sum(self, a: np.ndarray, axis: int = 0) -> np.ndarray:
        """Field sum along ``axis``."""
        if self.mode == "ext":
            if a.shape[axis] == 0:
                shape = list(a.shape)
                del shape[axis]
                return self.zeros(tuple(shape))
            return self._add.reduce(a, axis=axis)
        p = self.ctx.p
        if self.mode == "big":
            return a.sum(axis=axis) % p
        chunk = 1 << 12
        n = a.shape[axis]
        if n <= chunk:
            return a.sum(axis=axis) % p
        total = None
        for start in range(0, n, chunk):
            part = np.take(a, range(start, min(n, start + chunk)), axis=axis).sum(axis=axis) % p
            total = part if total is None else (total + part) % p
        return total

    def dot(self, coeffs: np.ndarray, rows: np.ndarray) -> np.ndarray:
        """sum_j coeffs[j] * rows[j]."""
        return self.sum(self.mul(coeffs[:, None], rows), axis=0)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = self.zeros((a.shape[0], b.shape[1]))
        for k in range(a.shape[1]):
            out = self.add(out, self.mul(a[:, k : k + 1], b[k : k + 1, :]))
        return out

    def inv(self, x: Any) -> int:
        return self.ctx.inv(int(x))

    def random(self, rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
        return self.asarray(self.ctx.random_codes(rng, shape))


@functools.lru_cache(maxsize=None)
def kernel_for(ctx: FieldCtx) -> Kernel:
    return Kernel(ctx)


# ---------------------------------------------------------------------------
# Elimination and exterior products


def rref(kern: Kernel, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form; returns the nonzero rows and pivot columns."""
    a = kern.asarray(a).copy()
    nrows, ncols = a.shape
    row = 0
    pivots: list[int] = []
    for c in range(ncols):
        if row == nrows:
            break
        nz = np.flatnonzero(a[row:, c] != 0)
        if nz.size == 0:
            continue
        i = row + int(nz[0])
        if i != row:
            a[[row, i]] = a[[i, row]]
        a[row] = kern.mul(a[row], kern.inv(a[row, c]))
        f = a[:, c].copy()
        f[row] = 0
        hit = np.flatnonzero(f != 0)
        if hit.size:
            a[hit] = kern.sub(a[hit], kern.mul(f[hit][:, None], a[row][None, :]))
        pivots.append(c)
        row += 1
    return a[:row], pivots


def _lex_rank(combos: np.ndarray, r: int) -> np.ndarray:
    """Positions of sorted combinations (rows) of range(r) in lexicographic
    order, via the colexicographic rank of their reflected complements."""
    n, j = combos.shape
    if j == 0:
        return np.zeros(n, dtype=np.int64)
    table = np.array([[_binom(a, b) for b in range(j + 1)] for a in range(r + 1)], dtype=np.int64)
    d = (r - 1 - combos)[:, ::-1]
    colex = sum(table[d[:, i], i + 1] for i in range(j))
    return _binom(r, j) - 1 - colex


@functools.lru_cache(maxsize=None)
def _wedge_tables(r: int, j: int) -> list[tuple[np.ndarray, np.ndarray, bool]]:
    """For each position t of a j-subset of range(r): index of the subset
    without its t-th element among (j-1)-subsets, the removed row, and whether
    the cofactor sign is negative (expansion along the last column)."""
    subsets = np.array(list(combinations(range(r), j)), dtype=np.int64).reshape(-1, j)
    out = []
    for t in range(j):
        prev = _lex_rank(np.delete(subsets, t, axis=1), r)
        out.append((prev, np.ascontiguousarray(subsets[:, t]), (t + 1 + j) % 2 == 1))
    return out


def wedge_batch(kern: Kernel, data: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """All maximal minors for a batch of column sets.

    ``cols`` is a (B, s) array of column indices, each row in the desired
    column order.  Returns a (B, C(r, s)) array whose entry for row subset R
    (lexicographic order) is det(data[R][:, cols[b]]).
    """
    r = data.shape[0]
    bsz, s = cols.shape
    if s == 0:
        return kern.ones((bsz, 1))
    if s > r:
        return kern.zeros((bsz, 0))
    v = data[:, cols]  # (r, B, s)
    w = np.ascontiguousarray(v[:, :, 0].T)
    lazy = kern.mode in ("small", "mid")  # reduced terms summed in int64, reduced once
    for j in range(2, s + 1):
        col = np.ascontiguousarray(v[:, :, j - 1].T)
        acc = None
        for prev, rows, negative in _wedge_tables(r, j):
            term = kern.mul(col[:, rows], w[:, prev])
            if lazy:
                if acc is None:
                    acc = -term if negative else term
                elif negative:
                    acc -= term
                else:
                    acc += term
            elif acc is None:
                acc = kern.neg(term) if negative else term
            else:
                acc = kern.sub(acc, term) if negative else kern.add(acc, term)
        w = acc % kern.ctx.p if lazy else acc
    return w


class SpanBasis:
    """Incrementally maintained reduced row-echelon basis of a subspace."""

    def __init__(self, kern: Kernel, dim: int) -> None:
        self.kern = kern
        self.dim = dim
        self._rows = kern.zeros((min(max(dim, 1), 16), dim))
        self._pivots: list[int] = []

    def __len__(self) -> int:
        return len(self._pivots)

    @property
    def full(self) -> bool:
        return len(self._pivots) >= self.dim

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        k = len(self._pivots)
        if k == 0:
            return vec
        basis = self._rows[:k]
        coeffs = vec[self._pivots]
        nz = np.flatnonzero(coeffs != 0)
        if nz.size == 0:
            return vec
        return self.kern.sub(vec, self.kern.dot(coeffs[nz], basis[nz]))

    def add(self, vec: Any) -> bool:
        """Insert ``vec``; returns False if it already lies in the span."""
        kern = self.kern
        vec = self.reduce(kern.asarray(vec))
        nz = np.flatnonzero(vec != 0)
        if nz.size == 0:
            return False
        pc = int(nz[0])
        vec = kern.mul(vec, kern.inv(vec[pc]))
        k = len(self._pivots)
        if k:
            f = self._rows[:k, pc]
            hit = np.flatnonzero(f != 0)
            if hit.size:
                self._rows[hit] = kern.sub(
                    self._rows[hit], kern.mul(f[hit][:, None], vec[None, :])
                )
        if k == self._rows.shape[0]:
            grown = kern.zeros((2 * k, self.dim))
            grown[:k] = self._rows
            self._rows = grown
        self._rows[k] = vec
        self._pivots.append(pc)
        return True


# ---------------------------------------------------------------------------
# Matrices


def _sort_key(label: Any) -> Any:
    return label


class GFMatrix:
    """An r x n matrix over ``ctx`` whose columns carry distinct labels."""

    __slots__ = ("ctx", "labels", "data", "_index", "_wedge_cache", "_rank", "_reduced")

    def __init__(self, ctx: FieldCtx, labels: Sequence[Label], entries: Any) -> None:
        kern = kernel_for(ctx)
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("matrix labels must be distinct")
        if isinstance(entries, np.ndarray) and entries.ndim == 2:
            data = kern.asarray(entries)
        else:
            rows = [list(row) for row in entries]
            data = kern.zeros((len(rows), len(labels)))
            for i, row in enumerate(rows):
                if len(row) != len(labels):
                    raise ValueError("row length does not match the number of labels")
                for j, x in enumerate(row):
                    data[i, j] = _to_code(ctx, x)
        if data.ndim != 2 or data.shape[1] != len(labels):
            if data.size == 0 and len(labels) == 0:
                data = kern.zeros((data.shape[0] if data.ndim == 2 else 0, 0))
            else:
                raise ValueError("entry grid does not match the number of labels")
        if data.size and (np.any(data < 0) or np.any(data >= ctx.order)):
            raise ValueError(f"entry outside {ctx}")
        data.setflags(write=False)
        self.ctx = ctx
        self.labels: tuple[Label, ...] = labels
        self.data = data
        self._index = {lab: j for j, lab in enumerate(labels)}
        self._wedge_cache: dict[tuple, np.ndarray] = {}
        self._rank: int | None = None
        self._reduced: GFMatrix | None = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def identity(cls, ctx: FieldCtx, labels: Sequence[Label]) -> "GFMatrix":
        n = len(labels)
        data = kernel_for(ctx).zeros((n, n))
        for i in range(n):
            data[i, i] = 1
        return cls(ctx, labels, data)

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, labels: Sequence[Label]) -> "GFMatrix":
        return cls(ctx, labels, kernel_for(ctx).zeros((rows, len(labels))))

    # -- basic accessors ---------------------------------------------------
    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    @property
    def kernel(self) -> Kernel:
        return kernel_for(self.ctx)

    def column_index(self, label: Label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown column label {label!r}") from None

    def entry(self, i: int, label: Label) -> FieldElem:
        return FieldElem(self.ctx, int(self.data[i, self.column_index(label)]))

    def entries(self) -> list[list[FieldElem]]:
        return [[FieldElem(self.ctx, int(x)) for x in row] for row in self.data]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GFMatrix)
            and self.ctx == other.ctx
            and self.labels == other.labels
            and self.data.shape == other.data.shape
            and bool(np.all(self.data == other.data))
        )

    def __hash__(self) -> int:
        return id(self)

    def __repr__(self) -> str:
        return f"GFMatrix({self.ctx}, {self.rows}x{self.ncols})"

    # -- linear algebra ----------------------------------------------------
    def _cols(self, labels: Iterable[Label]) -> list[int]:
        return [self.column_index(lab) for lab in labels]

    def rank(self, cols: Iterable[Label] | None = None) -> int:
        if cols is None:
            if self._rank is None:
                self._rank = len(rref(self.kernel, self.data)[1])
            return self._rank
        idx = self._cols(cols)
        if not idx:
            return 0
        return len(rref(self.kernel, self.data[:, idx])[1])

    def columns_independent(self, labels: Iterable[Label]) -> bool:
        idx = self._cols(set(labels))
        if len(idx) > self.rows:
            return False
        if not idx:
            return True
        return len(rref(self.kernel, self.data[:, idx])[1]) == len(idx)

    def wedge_vector(self, labels: Iterable[Label]) -> np.ndarray:
        """Minors of the columns ``labels`` (sorted label order) over all row
        subsets of size |labels| in lexicographic order."""
        return self.wedge_vectors([labels])[0]

    def wedge_vectors(self, sets: Sequence[Iterable[Label]]) -> np.ndarray:
        """Stacked wedge vectors of equally sized label sets (cached)."""
        keys = [tuple(sorted(set(s), key=_sort_key)) for s in sets]
        sizes = {len(k) for k in keys}
        if len(sizes) > 1:
            raise ValueError("wedge vectors need equally sized sets")
        size = sizes.pop() if sizes else 0
        if size > self.rows:
            raise ValueError(f"set of size {size} exceeds {self.rows} rows")
        dim = _binom(self.rows, size)
        if dim > _CACHE_MAX_DIM:
            # too large to keep around: compute directly
            if not keys:
                return self.kernel.zeros((0, dim))
            idx = np.array([self._cols(k) for k in keys], dtype=np.int64).reshape(len(keys), size)
            return wedge_batch(self.kernel, self.data, idx)
        missing = [k for k in dict.fromkeys(keys) if k not in self._wedge_cache]
        if missing:
            idx = np.array([self._cols(k) for k in missing], dtype=np.int64).reshape(
                len(missing), size
            )
            step = max(1, (1 << 21) // max(dim, 1))
            for start in range(0, len(missing), step):
                block = wedge_batch(self.kernel, self.data, idx[start : start + step])
                for k, vec in zip(missing[start : start + step], block):
                    vec.setflags(write=False)
                    self._wedge_cache[k] = vec
        if not keys:
            return self.kernel.zeros((0, dim))
        return np.stack([self._wedge_cache[k] for k in keys])

    # -- structural operations --------------------------------------------
    def row_reduced(self) -> "GFMatrix":
        """Equivalent matrix with full row rank (reduced echelon form)."""
        red, piv = rref(self.kernel, self.data)
        out = GFMatrix(self.ctx, self.labels, red)
        out._rank = len(piv)
        return out

    def full_row_rank(self) -> "GFMatrix":
        """``self`` if its rows are independent, else a cached row reduction."""
        if self.rank() == self.rows:
            return self
        if self._reduced is None:
            self._reduced = self.row_reduced()
        return self._reduced

    def dualize(self) -> "GFMatrix":
        """Representation of the dual matroid: [I | D] becomes [-D^T | I]."""
        kern = self.kernel
        red, piv = rref(kern, self.data)
        n, r = self.ncols, len(piv)
        free = [j for j in range(n) if j not in set(piv)]
        out = kern.zeros((n - r, n))
        for i, j in enumerate(free):
            out[i, j] = 1
        if r and free:
            d = red[:, free]  # r x (n - r)
            out[:, piv] = kern.neg(d.T.copy())
        return GFMatrix(self.ctx, self.labels, out)

    def restrict(self, labels: Iterable[Label]) -> "GFMatrix":
        """Keep the given columns, in the given order."""
        labels = list(labels)
        return GFMatrix(self.ctx, labels, self.data[:, self._cols(labels)])

    def delete(self, labels: Iterable[Label]) -> "GFMatrix":
        drop = set(labels)
        return self.restrict([lab for lab in self.labels if lab not in drop])

    def relabel(self, mapping: Mapping[Label, Label] | Callable[[Label], Label]) -> "GFMatrix":
        fn = mapping if callable(mapping) else mapping.__getitem__
        return GFMatrix(self.ctx, [fn(lab) for lab in self.labels], self.data)

    def over_labels(self, labels: Sequence[Label]) -> "GFMatrix":
        """Columns reordered to ``labels``; labels not present become zero
        columns (loops).  Every existing label must appear in ``labels``."""
        missing = set(self.labels) - set(labels)
        if missing:
            raise ValueError(f"labels {sorted(missing)!r} would be dropped")
        out = self.kernel.zeros((self.rows, len(labels)))
        for j, lab in enumerate(labels):
            if lab in self._index:
                out[:, j] = self.data[:, self._index[lab]]
        return GFMatrix(self.ctx, labels, out)

    def left_multiply(self, t: np.ndarray) -> "GFMatrix":
        kern = self.kernel
        return GFMatrix(self.ctx, self.labels, kern.matmul(kern.asarray(t), self.data))

    def embed(self, ext: FieldCtx, embed: Embedding) -> "GFMatrix":
        """Same matrix with entries mapped into an extension field."""
        if ext == self.ctx:
            return self
        fn = code_map(embed)
        kern = kernel_for(ext)
        out = kern.zeros(self.data.shape)
        for i in range(self.rows):
            for j in range(self.ncols):
                out[i, j] = fn(int(self.data[i, j]))
        return GFMatrix(ext, self.labels, out)

    def to_json(self) -> dict:
        ctx = self.ctx
        return {
            "field": ctx.to_json(),
            "rows": self.rows,
            "labels": list(self.labels),
            "entries": [[int(x) if ctx.d == 1 else ctx.decode(int(x)) for x in row] for row in self.data],
        }


def block_diag(mats: Sequence[GFMatrix]) -> GFMatrix:
    """Direct sum: block-diagonal matrix; labels must be disjoint."""
    if not mats:
        raise ValueError("block_diag needs at least one matrix")
    ctx = mats[0].ctx
    if any(m.ctx != ctx for m in mats):
        raise ValueError("block_diag needs matrices over one field")
    labels: list[Label] = []
    for m in mats:
        labels.extend(m.labels)
    if len(set(labels)) != len(labels):
        raise ValueError("block_diag needs disjoint labels")
    kern = kernel_for(ctx)
    out = kern.zeros((sum(m.rows for m in mats), len(labels)))
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.ncols] = m.data
        r += m.rows
        c += m.ncols
    return GFMatrix(ctx, labels, out)


def _to_code(ctx: FieldCtx, x: Any) -> int:
    if isinstance(x, FieldElem):
        if x.ctx != ctx:
            raise ValueError(f"entry from {x.ctx} in a matrix over {ctx}")
        return x.code
    if isinstance(x, (int, np.integer)):
        if ctx.d == 1:
            return int(x) % ctx.p
        if not 0 <= int(x) < ctx.p:
            raise ValueError(f"integer entry {x} must be a residue mod {ctx.p}")
        return int(x)
    return ctx.encode(list(x))


@functools.lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k) if 0 <= k <= n else 0
