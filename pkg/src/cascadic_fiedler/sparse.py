"""Compressed sparse-row kernels and graph Laplacians.

Everything here is float64.  Row entries are kept sorted by column and
summed in ascending column order, so repeated runs are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import GraphError

__all__ = [
    "SparseMatrix",
    "GraphLaplacian",
    "EdgeList",
    "laplacian_from_edges",
    "matvec",
    "galerkin_product",
    "rayleigh_quotient",
    "connected_components",
    "Components",
]

# Row-sum tolerance relative to the largest diagonal entry.
ROW_SUM_RTOL = 1e-10


def _frozen(a, dtype):
    if isinstance(a, np.ndarray) and not a.flags.writeable and a.dtype == dtype and a.flags.c_contiguous:
        return a
    a = np.array(a, dtype=dtype, order="C")
    a.flags.writeable = False
    return a


@njit(cache=True)
def _csr_matvec(row_ptr, col_idx, values, x, out):
    for i in range(row_ptr.shape[0] - 1):
        s = 0.0
        for k in range(row_ptr[i], row_ptr[i + 1]):
            s += values[k] * x[col_idx[k]]
        out[i] = s


@njit(cache=True)
def _bfs_labels(row_ptr, col_idx, labels):
    n = row_ptr.shape[0] - 1
    queue = np.empty(n, dtype=np.int64)
    count = 0
    for root in range(n):
        if labels[root] >= 0:
            continue
        labels[root] = count
        head = 0
        tail = 1
        queue[0] = root
        while head < tail:
            v = queue[head]
            head += 1
            for k in range(row_ptr[v], row_ptr[v + 1]):
                u = col_idx[k]
                if labels[u] < 0:
                    labels[u] = count
                    queue[tail] = u
                    tail += 1
        count += 1
    return count


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Immutable CSR matrix with sorted, duplicate-free rows and no stored zeros."""

    n_rows: int
    n_cols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "n_rows", int(self.n_rows))
        object.__setattr__(self, "n_cols", int(self.n_cols))
        object.__setattr__(self, "row_ptr", _frozen(self.row_ptr, np.int64))
        object.__setattr__(self, "col_idx", _frozen(self.col_idx, np.int64))
        object.__setattr__(self, "values", _frozen(self.values, np.float64))
        self._validate()

    def _validate(self):
        rp, ci, v = self.row_ptr, self.col_idx, self.values
        if self.n_rows < 0 or self.n_cols < 0:
            raise ValueError("negative matrix dimension")
        if rp.shape != (self.n_rows + 1,):
            raise ValueError(f"row_ptr must have length {self.n_rows + 1}")
        if rp[0] != 0 or rp[-1] != ci.shape[0] or np.any(np.diff(rp) < 0):
            raise ValueError("row_ptr must be nondecreasing from 0 to nnz")
        if ci.shape != v.shape:
            raise ValueError("col_idx and values differ in length")
        if ci.size:
            if ci.min() < 0 or ci.max() >= self.n_cols:
                raise ValueError("column index out of range")
            rows = self.row_indices()
            same_row = rows[1:] == rows[:-1]
            if np.any(np.diff(ci)[same_row] <= 0):
                raise ValueError("column indices must be strictly increasing within each row")
            if np.any(v == 0.0):
                raise ValueError("explicit zero stored")
            if not np.all(np.isfinite(v)):
                raise ValueError("non-finite value stored")

    @classmethod
    def from_coo(cls, n_rows, n_cols, rows, cols, vals):
        """Build from triplets; duplicates are summed and resulting zeros dropped."""
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = np.asarray(vals, dtype=np.float64).ravel()
        if not rows.shape == cols.shape == vals.shape:
            raise ValueError("triplet arrays differ in length")
        if rows.size and (rows.min() < 0 or rows.max() >= n_rows or cols.min() < 0 or cols.max() >= n_cols):
            raise ValueError("triplet index out of range")
        key = rows * np.int64(max(n_cols, 1)) + cols
        order = np.argsort(key, kind="stable")
        key = key[order]
        vals = vals[order]
        if key.size:
            starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
            vals = np.add.reduceat(vals, starts)
            key = key[starts]
        keep = vals != 0.0
        key, vals = key[keep], vals[keep]
        r = key // max(n_cols, 1)
        c = key - r * max(n_cols, 1)
        row_ptr = np.zeros(n_rows + 1, dtype=np.int64)
        np.cumsum(np.bincount(r, minlength=n_rows), out=row_ptr[1:])
        return cls(n_rows, n_cols, row_ptr, c, vals)

    @classmethod
    def from_dense(cls, a):
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        r, c = np.nonzero(a)
        return cls.from_coo(a.shape[0], a.shape[1], r, c, a[r, c])

    @classmethod
    def identity(cls, n):
        idx = np.arange(n)
        return cls(n, n, np.arange(n + 1), idx, np.ones(n))

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self):
        return int(self.col_idx.shape[0])

    def row_indices(self):
        """Row index of every stored entry."""
        return np.repeat(np.arange(self.n_rows, dtype=np.int64), np.diff(self.row_ptr))

    def row(self, i):
        lo, hi = self.row_ptr[i], self.row_ptr[i + 1]
        return self.col_idx[lo:hi], self.values[lo:hi]

    def diagonal(self):
        rows = self.row_indices()
        on = rows == self.col_idx
        d = np.zeros(min(self.shape))
        d[rows[on]] = self.values[on]
        return d

    def transpose(self):
        order = np.argsort(self.col_idx, kind="stable")
        row_ptr = np.zeros(self.n_cols + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.col_idx, minlength=self.n_cols), out=row_ptr[1:])
        return SparseMatrix(self.n_cols, self.n_rows, row_ptr, self.row_indices()[order], self.values[order])

    def to_dense(self):
        a = np.zeros(self.shape)
        a[self.row_indices(), self.col_idx] = self.values
        return a

    def __matmul__(self, x):
        return matvec(self, x)

    def __repr__(self):
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz})"


@dataclass(frozen=True, eq=False)
class EdgeList:
    """Weighted undirected edges on vertices ``0..n-1``.

    Self-loops and nonpositive weights are rejected; use :meth:`from_tuples`
    or the file readers, which drop self-loops before construction.
    """

    n: int
    i: np.ndarray
    j: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "i", _frozen(self.i, np.int64))
        object.__setattr__(self, "j", _frozen(self.j, np.int64))
        object.__setattr__(self, "w", _frozen(self.w, np.float64))
        if self.n < 0:
            raise GraphError("vertex count must be nonnegative")
        if not self.i.shape == self.j.shape == self.w.shape or self.i.ndim != 1:
            raise GraphError("edge arrays must be 1-d and of equal length")
        bad = (self.i < 0) | (self.i >= self.n) | (self.j < 0) | (self.j >= self.n)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise GraphError(f"edge {k} ({self.i[k]}, {self.j[k]}) has a vertex out of range [0, {self.n})")
        bad = ~(self.w > 0.0) | ~np.isfinite(self.w)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise GraphError(f"edge {k} ({self.i[k]}, {self.j[k]}) has nonpositive or non-finite weight {self.w[k]!r}")
        loops = self.i == self.j
        if loops.any():
            k = int(np.flatnonzero(loops)[0])
            raise GraphError(f"edge {k} is a self-loop on vertex {self.i[k]}")

    @classmethod
    def from_tuples(cls, n, edges, drop_self_loops=True):
        edges = list(edges)
        i = np.array([e[0] for e in edges], dtype=np.int64)
        j = np.array([e[1] for e in edges], dtype=np.int64)
        w = np.array([e[2] if len(e) > 2 else 1.0 for e in edges], dtype=np.float64)
        if drop_self_loops:
            keep = i != j
            i, j, w = i[keep], j[keep], w[keep]
        return cls(n, i, j, w)

    def __len__(self):
        return int(self.i.shape[0])

    def __iter__(self):
        return zip(self.i.tolist(), self.j.tolist(), self.w.tolist())

    def adjacency(self):
        """Symmetric adjacency pattern as CSR (weights summed over duplicates)."""
        return SparseMatrix.from_coo(
            self.n, self.n, np.r_[self.i, self.j], np.r_[self.j, self.i], np.r_[self.w, self.w]
        )

    def subgraph(self, vertices):
        """Induced subgraph on ``vertices`` (sorted), relabelled to ``0..k-1``."""
        vertices = np.unique(np.asarray(vertices, dtype=np.int64))
        new = np.full(self.n, -1, dtype=np.int64)
        new[vertices] = np.arange(vertices.size)
        keep = (new[self.i] >= 0) & (new[self.j] >= 0)
        return EdgeList(vertices.size, new[self.i[keep]], new[self.j[keep]], self.w[keep])


@dataclass(frozen=True, eq=False)
class GraphLaplacian:
    """Validated weighted graph Laplacian.

    Checked on construction: square, bit-exact symmetric, nonpositive
    off-diagonals, nonnegative diagonal, and row sums within
    ``1e-10 * max(diag)`` of zero.
    """

    matrix: SparseMatrix
    n: int = field(init=False)
    degree: np.ndarray = field(init=False)

    def __post_init__(self):
        a = self.matrix
        if a.n_rows != a.n_cols:
            raise GraphError(f"Laplacian must be square, got {a.shape}")
        object.__setattr__(self, "n", a.n_rows)
        object.__setattr__(self, "degree", _frozen(a.diagonal(), np.float64))
        self._validate()

    def _validate(self):
        a = self.matrix
        t = a.transpose()
        if not (
            np.array_equal(a.row_ptr, t.row_ptr)
            and np.array_equal(a.col_idx, t.col_idx)
            and np.array_equal(a.values, t.values)
        ):
            raise GraphError("Laplacian is not exactly symmetric")
        rows = a.row_indices()
        off = rows != a.col_idx
        if np.any(a.values[off] > 0.0):
            raise GraphError("Laplacian has a positive off-diagonal entry")
        if np.any(self.degree < 0.0):
            raise GraphError("Laplacian has a negative diagonal entry")
        sums = np.bincount(rows, weights=a.values, minlength=self.n)
        scale = self.degree.max() if self.n else 0.0
        bad = np.abs(sums) > ROW_SUM_RTOL * scale
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise GraphError(f"row {k} sums to {sums[k]!r}, not zero")

    @classmethod
    def from_dense(cls, a):
        return cls(SparseMatrix.from_dense(a))

    @property
    def n_edges(self):
        return (self.matrix.nnz - int(np.count_nonzero(self.degree))) // 2

    @property
    def max_degree(self):
        return float(self.degree.max()) if self.n else 0.0

    def to_dense(self):
        return self.matrix.to_dense()

    def edges(self):
        """Upper-triangle edge list (i < j) with positive weights."""
        a = self.matrix
        rows = a.row_indices()
        up = a.col_idx > rows
        return EdgeList(self.n, rows[up], a.col_idx[up], -a.values[up])

    def __matmul__(self, x):
        return matvec(self.matrix, x)

    def __repr__(self):
        return f"GraphLaplacian(n={self.n}, edges={self.n_edges})"


def _assemble(n, a, b, w):
    # a < b, pairs unique, w > 0: off-diagonals are stored once per pair and mirrored,
    # so (i, j) and (j, i) hold the same float.
    off = SparseMatrix.from_coo(n, n, np.r_[a, b], np.r_[b, a], np.r_[-w, -w])
    deg = -np.bincount(off.row_indices(), weights=off.values, minlength=n)
    d = np.flatnonzero(deg)
    full = SparseMatrix.from_coo(
        n, n, np.r_[off.row_indices(), d], np.r_[off.col_idx, d], np.r_[off.values, deg[d]]
    )
    return GraphLaplacian(full)


def _merge_pairs(n, a, b, w):
    """Order pairs (a < b) by (a, b) and sum duplicate weights in input order."""
    key = a * np.int64(max(n, 1)) + b
    order = np.argsort(key, kind="stable")
    key, w = key[order], w[order]
    if key.size:
        starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
        w = np.add.reduceat(w, starts)
        key = key[starts]
    return key // max(n, 1), key % max(n, 1), w


def laplacian_from_edges(edges: EdgeList) -> GraphLaplacian:
    """Weighted Laplacian ``L = D - W`` of an edge list.

    Duplicate undirected edges accumulate weight.

    Examples
    --------
    >>> L = laplacian_from_edges(EdgeList.from_tuples(3, [(0, 1, 1.0), (1, 2, 1.0)]))
    >>> L.to_dense()
    array([[ 1., -1.,  0.],
           [-1.,  2., -1.],
           [ 0., -1.,  1.]])
    """
    a = np.minimum(edges.i, edges.j)
    b = np.maximum(edges.i, edges.j)
    a, b, w = _merge_pairs(edges.n, a, b, edges.w.copy())
    return _assemble(edges.n, a, b, w)


def matvec(a: SparseMatrix, x) -> np.ndarray:
    """Row-wise CSR product ``A @ x``."""
    if isinstance(a, GraphLaplacian):
        a = a.matrix
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (a.n_cols,):
        raise ValueError(f"dimension mismatch: matrix has {a.n_cols} columns, vector has shape {x.shape}")
    out = np.empty(a.n_rows)
    _csr_matvec(a.row_ptr, a.col_idx, a.values, x, out)
    return out


def galerkin_product(L: GraphLaplacian, P) -> GraphLaplacian:
    """Coarse Laplacian ``P L P^T`` for a 0/1 aggregation operator ``P``.

    Fine edges inside one aggregate vanish; edges between two aggregates
    are summed.  The coarse diagonal is rebuilt from the coarse weights,
    which is the same quantity as the triple product's diagonal.
    """
    q = np.asarray(P.aggregation.q)
    c = P.aggregation.c
    if q.shape != (L.n,):
        raise GraphError(f"interpolation has {q.shape[0]} columns but the Laplacian has {L.n} rows")
    if q.size and (q.min() < 0 or q.max() >= c):
        raise GraphError("aggregate index out of range")
    a_mat = L.matrix
    rows = a_mat.row_indices()
    up = a_mat.col_idx > rows
    qa = q[rows[up]]
    qb = q[a_mat.col_idx[up]]
    w = -a_mat.values[up]
    cross = qa != qb
    qa, qb, w = qa[cross], qb[cross], w[cross]
    lo, hi, w = _merge_pairs(c, np.minimum(qa, qb), np.maximum(qa, qb), w)
    return _assemble(c, lo, hi, w)


def rayleigh_quotient(L, v) -> float:
    """``(v^T L v) / (v^T v)``."""
    v = np.asarray(v, dtype=np.float64)
    vv = float(v @ v)
    if vv == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector")
    return float(v @ matvec(L, v)) / vv


class Components(NamedTuple):
    labels: np.ndarray
    count: int


def connected_components(graph) -> Components:
    """Breadth-first component labelling of an :class:`EdgeList` or Laplacian.

    Labels are assigned in order of the smallest vertex of each component.
    """
    if isinstance(graph, EdgeList):
        adj = graph.adjacency()
    elif isinstance(graph, GraphLaplacian):
        adj = graph.matrix
    elif isinstance(graph, SparseMatrix):
        adj = graph
    else:
        raise TypeError(f"cannot take components of {type(graph).__name__}")
    labels = np.full(adj.n_rows, -1, dtype=np.int64)
    count = _bfs_labels(adj.row_ptr, adj.col_idx, labels)
    return Components(labels, int(count))
