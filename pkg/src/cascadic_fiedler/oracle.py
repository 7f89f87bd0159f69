"""Dense cyclic Jacobi eigensolver, used to check the multilevel path."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DisconnectedGraphError
from .smoothing import normalize_signed

__all__ = ["DenseSymmetric", "jacobi_eigen_all", "fiedler_oracle", "MAX_ORACLE_N"]

MAX_ORACLE_N = 2000
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DenseSymmetric:
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square matrix")
        if a.shape[0] > MAX_ORACLE_N:
            raise ValueError(f"dense oracle limited to n <= {MAX_ORACLE_N}, got {a.shape[0]}")
        scale = max(1.0, float(np.abs(a).max(initial=0.0)))
        if np.abs(a - a.T).max(initial=0.0) > SYMMETRY_TOL * scale:
            raise ValueError("matrix is not symmetric")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def n(self):
        return self.entries.shape[0]


@njit(cache=True)
def _off_norm(a):
    n = a.shape[0]
    s = 0.0
    for p in range(n):
        for q in range(p + 1, n):
            s += 2.0 * a[p, q] * a[p, q]
    return math.sqrt(s)


@njit(cache=True)
def _cyclic_jacobi(a, vt, tol, max_sweeps):
    # a stays symmetric in full storage; rows p, q are updated contiguously and
    # mirrored into the columns.  vt holds the eigenvectors as rows.
    n = a.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += a[i, j] * a[i, j]
    target = tol * math.sqrt(total)
    sweeps = 0
    while sweeps < max_sweeps and _off_norm(a) > target:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = a[p, k]
                    akq = a[q, k]
                    nkp = c * akp - s * akq
                    nkq = s * akp + c * akq
                    a[p, k] = nkp
                    a[q, k] = nkq
                    a[k, p] = nkp
                    a[k, q] = nkq
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = vt[p, k]
                    vkq = vt[q, k]
                    vt[p, k] = c * vkp - s * vkq
                    vt[q, k] = s * vkp + c * vkq
    return sweeps


def jacobi_eigen_all(A, tol=1e-14, max_sweeps=100):
    """All eigenpairs of a dense symmetric matrix by cyclic Jacobi rotations.

    Sweeps annihilate every off-diagonal entry in row order until the
    off-diagonal Frobenius norm falls below ``tol * ||A||_F``.

    Returns
    -------
    w : ndarray
        Eigenvalues, ascending.
    V : ndarray
        Orthonormal eigenvectors as columns, matched to ``w``.
    """
    if not isinstance(A, DenseSymmetric):
        A = DenseSymmetric(A)
    a = A.entries.copy()
    a = 0.5 * (a + a.T)
    vt = np.eye(A.n)
    sweeps = _cyclic_jacobi(a, vt, tol, max_sweeps)
    if sweeps >= max_sweeps and _off_norm(a) > tol * np.linalg.norm(A.entries):
        raise RuntimeError("Jacobi iteration did not converge")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(vt[order].T)


def fiedler_oracle(L, disconnected_tol=1e-10):
    """Second-smallest eigenpair of a Laplacian from a dense Jacobi solve."""
    dense = L.to_dense() if hasattr(L, "to_dense") else np.asarray(L, dtype=np.float64)
    w, V = jacobi_eigen_all(dense)
    if w.shape[0] < 2:
        raise ValueError("need at least two vertices")
    if w[1] < disconnected_tol:
        raise DisconnectedGraphError(int(np.count_nonzero(w < disconnected_tol)))
    return float(w[1]), normalize_signed(V[:, 1])
