"""Gauss-Seidel iterations: the linear solver and the eigenvector smoother.

The eigen-smoother is a Gauss-Seidel sweep on the Rayleigh quotient
(coordinate relaxation).  Vertex ``i`` is relaxed along the direction of
``e_i`` with its constant component removed, and the step length is the
exact minimiser of the Rayleigh quotient on that line.  A fixed point
satisfies ``L y = rho y`` on the complement of the constant vector, so
repeated sweeps drive the iterate to the Fiedler vector rather than to an
eigenvector of the Gauss-Seidel propagator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import CollapsedIterateError, ZeroDiagonalError
from .sparse import GraphLaplacian, SparseMatrix, matvec

__all__ = [
    "SmootherReport",
    "gauss_seidel_solve",
    "smooth_eigen",
    "deflate_constant",
    "normalize_signed",
    "convergence_check",
]

# Relative norm below which a deflated vector is treated as zero.
COLLAPSE_RTOL = 1e-12
# Gram eigenvalues below this (relative) mark a dependent Ritz direction.
RITZ_GRAM_RTOL = 1e-10
# Minimum relative Rayleigh-quotient gain for accepting a Ritz vector.
RITZ_GAIN_RTOL = 1e-13
# Relative norm below which a difference direction is left out of the Ritz basis.
RITZ_DIFF_RTOL = 1e-6
# Sweeps between exact recomputations of L y in the smoother.
REFRESH_EVERY = 25
# Relative magnitude gap treated as a tie by normalize_signed.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class SmootherReport:
    sweeps_used: int
    converged: bool
    last_alignment: float
    last_change: float = math.nan
    rayleigh: float = math.nan
    residual_norm: float = math.nan
    rayleigh_history: tuple = ()


@njit(cache=True)
def _gs_sweep(row_ptr, col_idx, values, diag, b, x):
    change = 0.0
    for i in range(row_ptr.shape[0] - 1):
        s = b[i]
        for k in range(row_ptr[i], row_ptr[i + 1]):
            j = col_idx[k]
            if j != i:
                s -= values[k] * x[j]
        xi = s / diag[i]
        d = abs(xi - x[i])
        if d > change:
            change = d
        x[i] = xi
    return change


@njit(cache=True)
def _rq_step(a, b, r, c, d, e):
    # Minimise (a + 2 r t + d t^2) / (b + 2 c t + e t^2) over t; 0 if no descent.
    alpha = d * c - r * e
    beta = d * b - a * e
    gamma = r * b - a * c
    best_t = 0.0
    best = a / b
    disc = beta * beta - 4.0 * alpha * gamma
    if disc < 0.0:
        disc = 0.0
    sq = math.sqrt(disc)
    q = -0.5 * (beta + sq) if beta >= 0.0 else -0.5 * (beta - sq)
    for m in range(2):
        if m == 0:
            if q == 0.0:
                continue
            t = gamma / q
        else:
            if alpha == 0.0:
                continue
            t = q / alpha
        den = b + 2.0 * c * t + e * t * t
        if den > 0.0:
            f = (a + 2.0 * r * t + d * t * t) / den
            if f < best:
                best = f
                best_t = t
    return best_t


@njit(cache=True)
def _rq_sweep(row_ptr, col_idx, values, diag, z, r, mean0):
    """One forward coordinate-relaxation sweep.

    ``y = z + s`` with ``s`` a lazily applied constant shift, so each step
    costs O(degree).  ``r`` holds ``L z`` on entry and is kept current.
    Returns ``s``.
    """
    n = z.shape[0]
    a = 0.0
    b = 0.0
    for i in range(n):
        a += z[i] * r[i]
        b += z[i] * z[i]
    e = 1.0 - 1.0 / n
    s = 0.0
    for i in range(n):
        ri = r[i]
        d = diag[i]
        c = z[i] + s - mean0
        t = _rq_step(a, b, ri, c, d, e)
        if t != 0.0:
            a += 2.0 * t * ri + t * t * d
            b += 2.0 * t * c + t * t * e
            z[i] += t
            s -= t / n
            for k in range(row_ptr[i], row_ptr[i + 1]):
                r[col_idx[k]] += t * values[k]
    return s


def deflate_constant(y) -> np.ndarray:
    """Remove the component along the constant vector."""
    y = np.asarray(y, dtype=np.float64)
    return y - y.mean()


def normalize_signed(y) -> np.ndarray:
    """Scale to unit 2-norm with the largest-magnitude entry positive.

    Ties in magnitude go to the lowest index; magnitudes within a relative
    ``TIE_RTOL`` of the maximum count as tied, so rounding cannot pick the sign.
    """
    y = np.asarray(y, dtype=np.float64)
    nrm = np.linalg.norm(y)
    if nrm == 0.0 or not np.isfinite(nrm):
        raise ValueError("cannot normalize a zero or non-finite vector")
    y = y / nrm
    mag = np.abs(y)
    lead = int(np.argmax(mag >= mag.max() * (1.0 - TIE_RTOL)))
    if y[lead] < 0:
        y = -y
    return y


def convergence_check(u_k, u_prev, tol) -> bool:
    """``<u_k, u_prev> > 1 - tol`` for unit vectors."""
    return float(np.dot(u_k, u_prev)) > 1.0 - tol


def _diagonal_or_raise(a: SparseMatrix):
    d = a.diagonal()
    zero = np.flatnonzero(d == 0.0)
    if zero.size:
        raise ZeroDiagonalError(zero[0])
    return d


def _cosine(u, v):
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 1.0 if nu == nv else 0.0
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def gauss_seidel_solve(A, b, x0, tol=1e-8, max_iter=1000, callback=None):
    """Forward Gauss-Seidel for ``A x = b``.

    Stops once the max-norm change between successive iterates drops
    below ``tol``, or after ``max_iter`` sweeps.

    Parameters
    ----------
    A : SparseMatrix or GraphLaplacian
        Square, nonzero diagonal.
    b, x0 : array_like
    tol : float
    max_iter : int
    callback : callable, optional
        Called as ``callback(k, x)`` after sweep ``k`` (1-based); ``x`` is
        a copy.

    Returns
    -------
    x : ndarray
    report : SmootherReport
    """
    if isinstance(A, GraphLaplacian):
        A = A.matrix
    n = A.n_rows
    if A.n_cols != n:
        raise ValueError("Gauss-Seidel needs a square matrix")
    b = np.ascontiguousarray(b, dtype=np.float64)
    x = np.array(x0, dtype=np.float64)
    if b.shape != (n,) or x.shape != (n,):
        raise ValueError(f"expected vectors of length {n}")
    diag = _diagonal_or_raise(A)
    change = math.inf
    alignment = 1.0
    k = 0
    converged = False
    while k < max_iter:
        prev = x.copy()
        change = _gs_sweep(A.row_ptr, A.col_idx, A.values, diag, b, x)
        k += 1
        alignment = _cosine(x, prev)
        if callback is not None:
            callback(k, x.copy())
        if change < tol:
            converged = True
            break
    return x, SmootherReport(k, converged, alignment, last_change=float(change))


def _unit_deflated(y, return_norm=False):
    y = np.asarray(y, dtype=np.float64)
    scale = np.linalg.norm(y)
    y = deflate_constant(y)
    nrm = np.linalg.norm(y)
    if not np.isfinite(nrm) or nrm <= COLLAPSE_RTOL * scale or nrm == 0.0:
        raise CollapsedIterateError("iterate has no component orthogonal to the constant vector")
    if return_norm:
        return y / nrm, nrm
    return y / nrm


@njit(cache=True)
def _ritz_moments(y, Ly, w, Lw, prev, Lprev, k):
    # Gram and stiffness moments of the basis {y, w - y, y - prev} (first k columns).
    G = np.zeros((3, 3))
    H = np.zeros((3, 3))
    for i in range(y.shape[0]):
        v0 = y[i]
        v1 = w[i] - v0
        v2 = v0 - prev[i]
        l0 = Ly[i]
        l1 = Lw[i] - l0
        l2 = l0 - Lprev[i]
        G[0, 0] += v0 * v0
        G[0, 1] += v0 * v1
        G[1, 1] += v1 * v1
        H[0, 0] += v0 * l0
        H[0, 1] += v0 * l1
        H[1, 0] += v1 * l0
        H[1, 1] += v1 * l1
        if k == 3:
            G[0, 2] += v0 * v2
            G[1, 2] += v1 * v2
            G[2, 2] += v2 * v2
            H[0, 2] += v0 * l2
            H[1, 2] += v1 * l2
            H[2, 0] += v2 * l0
            H[2, 1] += v2 * l1
            H[2, 2] += v2 * l2
    G[1, 0] = G[0, 1]
    G[2, 0] = G[0, 2]
    G[2, 1] = G[1, 2]
    return G[:k, :k].copy(), H[:k, :k].copy()


@njit(cache=True)
def _ritz_combine(c, y, Ly, w, Lw, prev, Lprev, out, lout):
    c2 = c[2] if c.shape[0] > 2 else 0.0
    for i in range(y.shape[0]):
        out[i] = c[0] * y[i] + c[1] * (w[i] - y[i]) + c2 * (y[i] - prev[i])
        lout[i] = c[0] * Ly[i] + c[1] * (Lw[i] - Ly[i]) + c2 * (Ly[i] - Lprev[i])


def _ritz_step(y, Ly, w, Lw, prev, Lprev):
    """Lowest Ritz pair on span{y, w, prev}, built from difference directions."""
    k = 2 if prev is None else 3
    if prev is None:
        prev, Lprev = y, Ly
    G, H = _ritz_moments(y, Ly, w, Lw, prev, Lprev, k)
    d = np.sqrt(np.diag(G))
    # Difference directions near rounding level carry noisy moments; drop them.
    keep = d > RITZ_DIFF_RTOL * d[0]
    keep[0] = True
    dk = d[keep]
    G = G[np.ix_(keep, keep)] / np.outer(dk, dk)
    H = H[np.ix_(keep, keep)] / np.outer(dk, dk)
    H = 0.5 * (H + H.T)
    g, U = np.linalg.eigh(G)
    ok = g > RITZ_GRAM_RTOL * g.max()
    T = U[:, ok] / np.sqrt(g[ok])
    mu, X = np.linalg.eigh(T.T @ H @ T)
    rho_w = float(w @ Lw)
    if mu[0] >= rho_w - RITZ_GAIN_RTOL * abs(rho_w):
        # No gain over the plain sweep; inside a degenerate eigenspace the Ritz
        # vector would be arbitrary and break the alignment test.
        return w, Lw
    coef = np.zeros(k)
    coef[keep] = (T @ X[:, 0]) / dk
    y_new = np.empty_like(y)
    Ly_new = np.empty_like(y)
    _ritz_combine(coef, y, Ly, w, Lw, prev, Lprev, y_new, Ly_new)
    nrm = np.linalg.norm(y_new)
    if not nrm > 0.0 or float(y_new @ Ly_new) / (nrm * nrm) >= rho_w:
        return w, Lw
    if np.dot(y_new, y) < 0:
        nrm = -nrm
    return y_new / nrm, Ly_new / nrm


def smooth_eigen(L: GraphLaplacian, y, tol=1e-6, max_sweeps=50, *, residual_tol=None, accelerate=True):
    """Smooth an approximate Fiedler vector by Gauss-Seidel sweeps.

    Each sweep relaxes every vertex in ascending order (see the module
    docstring), then the iterate is deflated and rescaled to unit norm.
    With ``accelerate`` the swept vector is replaced by the lowest Ritz
    vector of span{previous, current, swept}, which can only lower the
    Rayleigh quotient further.

    Iteration stops when successive iterates satisfy
    ``<u_k, u_{k-1}> > 1 - tol``; with ``residual_tol`` set it must in
    addition hold that ``||L u - rho u|| <= residual_tol * rho``.

    Raises
    ------
    CollapsedIterateError
        ``y`` is (numerically) constant.
    """
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be at least 1")
    a = L.matrix
    diag = a.diagonal()
    y = _unit_deflated(y)
    Ly = matvec(a, y)
    prev = Lprev = None
    history = []
    alignment = -1.0
    rho = residual = math.nan
    converged = False
    k = 0
    while k < max_sweeps:
        z = y.copy()
        r = Ly.copy()
        s = _rq_sweep(a.row_ptr, a.col_idx, a.values, diag, z, r, float(y.mean()))
        # L annihilates constants, so L w is the maintained r up to scale;
        # an exact product every REFRESH_EVERY sweeps keeps rounding in check.
        w, nrm = _unit_deflated(z + s, return_norm=True)
        Lw = matvec(a, w) if (k + 1) % REFRESH_EVERY == 0 else r / nrm
        if accelerate:
            y_new, Ly_new = _ritz_step(y, Ly, w, Lw, prev, Lprev)
            y_new = _unit_deflated(y_new)
        else:
            y_new, Ly_new = w, Lw
        k += 1
        alignment = float(np.clip(np.dot(y_new, y), -1.0, 1.0))
        prev, Lprev = y, Ly
        y, Ly = y_new, Ly_new
        rho = float(y @ Ly)
        history.append(rho)
        if alignment > 1.0 - tol:
            if accelerate:
                Ly = matvec(a, y)
                rho = history[-1] = float(y @ Ly)
            residual = float(np.linalg.norm(Ly - rho * y))
            if residual_tol is None or residual <= residual_tol * rho:
                converged = True
                break
    Ly = matvec(a, y)
    rho = history[-1] = float(y @ Ly)
    residual = float(np.linalg.norm(Ly - rho * y))
    report = SmootherReport(
        k, converged, alignment, rayleigh=rho, residual_norm=residual, rayleigh_history=tuple(history)
    )
    return normalize_signed(y), report
