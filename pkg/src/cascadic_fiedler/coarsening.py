"""Heavy edge coarsening and piecewise-constant interpolation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .sparse import GraphLaplacian, SparseMatrix

__all__ = [
    "AggregationMap",
    "InterpolationOperator",
    "hec_coarsen",
    "build_interpolation",
    "prolongate",
]


@njit(cache=True)
def _hec_kernel(row_ptr, col_idx, values, perm, q):
    c = 0
    for t in range(perm.shape[0]):
        v = perm[t]
        if q[v] >= 0:
            continue
        # Column minimum; rows are sorted so strict < keeps the lowest index on ties.
        # With no negative entry the vertex is isolated and pairs with itself.
        m = v
        best = 0.0
        for k in range(row_ptr[v], row_ptr[v + 1]):
            if values[k] < best:
                best = values[k]
                m = col_idx[k]
        if q[m] < 0:
            q[m] = c
            q[v] = c
            c += 1
        else:
            q[v] = q[m]
    return c


@dataclass(frozen=True, eq=False)
class AggregationMap:
    """Assignment of fine vertices to coarse aggregates.

    ``q[i]`` is the 0-based aggregate of fine vertex ``i``; ids run over
    ``0..c-1`` and each id is used at least once.
    """

    q: np.ndarray
    c: int
    permutation_seed: int | None = None

    def __post_init__(self):
        q = np.array(self.q, dtype=np.int64)
        q.flags.writeable = False
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "c", int(self.c))
        if q.ndim != 1:
            raise ValueError("aggregation map must be 1-d")
        if q.size and (q.min() < 0 or q.max() >= self.c):
            raise ValueError(f"aggregate ids must lie in [0, {self.c})")
        if np.any(np.bincount(q, minlength=self.c) == 0):
            raise ValueError("every aggregate id must be used")

    @property
    def n(self):
        return int(self.q.shape[0])

    @property
    def sizes(self):
        return np.bincount(self.q, minlength=self.c)

    @classmethod
    def identity(cls, n):
        return cls(np.arange(n), n)


@dataclass(frozen=True, eq=False)
class InterpolationOperator:
    """The ``c x n`` 0/1 matrix with a unit entry at ``(q[i], i)``."""

    aggregation: AggregationMap
    matrix: SparseMatrix = field(init=False, repr=False)

    def __post_init__(self):
        agg = self.aggregation
        m = SparseMatrix.from_coo(agg.c, agg.n, agg.q, np.arange(agg.n), np.ones(agg.n))
        object.__setattr__(self, "matrix", m)

    @property
    def shape(self):
        return (self.aggregation.c, self.aggregation.n)

    def restrict(self, x):
        """``P @ x``: sum of fine values over each aggregate."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.aggregation.n,):
            raise ValueError(f"expected a vector of length {self.aggregation.n}")
        return np.bincount(self.aggregation.q, weights=x, minlength=self.aggregation.c)


def hec_coarsen(L: GraphLaplacian, rng=None, *, permutation=None) -> AggregationMap:
    """Heavy edge coarsening of a Laplacian.

    Vertices are visited in random order.  An unassigned vertex looks up
    the row index ``m`` of the smallest entry in its column (its heaviest
    edge).  If ``m`` is unassigned both start a new aggregate, otherwise
    the vertex joins the aggregate of ``m``.

    Parameters
    ----------
    L : GraphLaplacian
    rng : int, numpy.random.Generator or None
        Source of the visiting order; an int is used as a seed, ``None``
        means seed 0.
    permutation : array_like, optional
        Explicit 0-based visiting order; overrides ``rng``.

    Returns
    -------
    AggregationMap
    """
    seed = None
    if permutation is None:
        if rng is None:
            rng = 0
        if isinstance(rng, (int, np.integer)):
            seed = int(rng)
            rng = np.random.default_rng(seed)
        perm = rng.permutation(L.n)
    else:
        perm = np.asarray(permutation, dtype=np.int64)
        if perm.shape != (L.n,) or not np.array_equal(np.sort(perm), np.arange(L.n)):
            raise ValueError("permutation must be a rearrangement of 0..n-1")
    q = np.full(L.n, -1, dtype=np.int64)
    a = L.matrix
    c = _hec_kernel(a.row_ptr, a.col_idx, a.values, perm.astype(np.int64), q)
    return AggregationMap(q, c, seed)


def build_interpolation(aggregation: AggregationMap) -> InterpolationOperator:
    return InterpolationOperator(aggregation)


def prolongate(P: InterpolationOperator, y_coarse) -> np.ndarray:
    """Apply ``P^T``: fine vertex ``i`` takes the value of aggregate ``q[i]``."""
    y = np.asarray(y_coarse, dtype=np.float64)
    if y.shape != (P.aggregation.c,):
        raise ValueError(f"expected a coarse vector of length {P.aggregation.c}, got shape {y.shape}")
    return y[P.aggregation.q]
