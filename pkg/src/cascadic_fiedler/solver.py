"""Cascadic multigrid for the Fiedler pair of a graph Laplacian.

Setup builds a hierarchy by repeated heavy edge coarsening and Galerkin
products.  The coarsest Laplacian is solved by shifted power iteration,
and the vector is then carried up one level at a time: prolongate,
deflate, smooth with Gauss-Seidel.  The Rayleigh quotient on the finest
level is the algebraic connectivity.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from .coarsening import build_interpolation, hec_coarsen, prolongate
from .errors import CollapsedIterateError, DisconnectedGraphError, GraphError, SolverError
from .smoothing import (
    SmootherReport,
    _unit_deflated,
    convergence_check,
    normalize_signed,
    smooth_eigen,
)
from .sparse import GraphLaplacian, connected_components, galerkin_product, matvec, rayleigh_quotient

__all__ = [
    "SolverConfig",
    "Hierarchy",
    "FiedlerResult",
    "setup_hierarchy",
    "coarsest_solve",
    "solve_fiedler",
    "bisect_by_fiedler",
    "level_seed",
]

log = logging.getLogger(__name__)

COARSE_SOLVERS = ("power", "gauss-seidel")


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the cascadic solve.

    ``residual_tol`` bounds the relative eigen-residual
    ``||L v - lambda v|| / lambda`` required before the finest level stops
    (on top of the alignment test); ``None`` disables it.
    ``stall_ratio`` stops coarsening once a level keeps more than that
    fraction of its vertices.  ``coarse_solver="gauss-seidel"`` smooths a
    random vector on the coarsest level instead of power iteration.
    ``accelerate`` adds the Ritz step of :func:`smooth_eigen` to every sweep.
    """

    coarsest_size: int = 25
    tol: float = 1e-6
    max_sweeps_per_level: int = 50
    max_sweeps_finest: int = 500
    seed: int = 0
    max_levels: int = 50
    residual_tol: float | None = 1e-2
    max_iter_coarsest: int = 10_000
    coarse_solver: str = "power"
    stall_ratio: float = 0.95
    accelerate: bool = True

    def __post_init__(self):
        if self.coarsest_size < 2:
            raise ValueError("coarsest_size must be at least 2")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if min(self.max_sweeps_per_level, self.max_sweeps_finest, self.max_levels, self.max_iter_coarsest) < 1:
            raise ValueError("iteration caps must be at least 1")
        if self.residual_tol is not None and not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive or None")
        if self.coarse_solver not in COARSE_SOLVERS:
            raise ValueError(f"coarse_solver must be one of {COARSE_SOLVERS}")
        if not 0 < self.stall_ratio <= 1:
            raise ValueError("stall_ratio must lie in (0, 1]")


@dataclass(frozen=True, eq=False)
class Hierarchy:
    levels: tuple
    interps: tuple
    stalled: bool = False

    @property
    def J(self):
        return len(self.interps)

    @property
    def sizes(self):
        return [L.n for L in self.levels]

    @property
    def edge_counts(self):
        return [L.n_edges for L in self.levels]


@dataclass(frozen=True, eq=False)
class FiedlerResult:
    vector: np.ndarray
    lambda2: float
    residual_norm: float
    per_level: tuple
    level_sizes: tuple
    setup_seconds: float
    solve_seconds: float
    coarsest: SmootherReport | None = None

    @property
    def n(self):
        return int(self.vector.shape[0])

    @property
    def total_seconds(self):
        return self.setup_seconds + self.solve_seconds


def level_seed(seed, level):
    """Seed for the visiting order of the coarsening of ``level``."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(level)])
    return int(ss.generate_state(1, np.uint64)[0])


def _require_connected(L):
    if L.n < 2:
        raise GraphError("need at least two vertices for a Fiedler vector")
    comps = connected_components(L)
    if comps.count != 1:
        raise DisconnectedGraphError(comps.count)


def setup_hierarchy(L: GraphLaplacian, cfg: SolverConfig = SolverConfig(), *, permutations=None, check=True) -> Hierarchy:
    """Coarsen until the level has at most ``cfg.coarsest_size`` vertices.

    Also stops at ``cfg.max_levels`` levels, when a coarsening step
    stalls, or when the next level would have a single vertex.  ``permutations`` optionally fixes the visiting order for the
    first few levels (mostly for tests).
    """
    if check:
        _require_connected(L)
    levels = [L]
    interps = []
    stalled = False
    while levels[-1].n > cfg.coarsest_size and len(levels) < cfg.max_levels:
        fine = levels[-1]
        i = len(interps)
        if permutations is not None and i < len(permutations):
            agg = hec_coarsen(fine, permutation=permutations[i])
        else:
            agg = hec_coarsen(fine, level_seed(cfg.seed, i))
        if agg.c > cfg.stall_ratio * fine.n or agg.c >= fine.n:
            stalled = True
            log.debug("coarsening stalled at level %d (%d -> %d)", i, fine.n, agg.c)
            break
        if agg.c < 2:
            # A single aggregate has no Fiedler direction; keep the current level.
            break
        P = build_interpolation(agg)
        levels.append(galerkin_product(fine, P))
        interps.append(P)
    return Hierarchy(tuple(levels), tuple(interps), stalled)


def _random_start(rng, n):
    return rng.standard_normal(n)


def coarsest_solve(L_J: GraphLaplacian, rng=None, tol=1e-6, max_iter=10_000):
    """Shifted power iteration for the Fiedler vector of a small Laplacian.

    Iterates with ``sigma I - L`` where ``sigma = 2 max(diag)`` bounds the
    spectrum, so the dominant mode orthogonal to the constant vector is
    the Fiedler vector.

    Returns
    -------
    vector : unit ndarray orthogonal to the constant
    report : SmootherReport
    """
    if rng is None or isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(0 if rng is None else int(rng))
    sigma = 2.0 * L_J.max_degree
    if L_J.n == 2:
        # Here lambda_2 = sigma, so sigma I - L annihilates the deflated space;
        # that space is one-dimensional and any deflated vector is exact.
        y = np.array([1.0, -1.0]) / math.sqrt(2.0)
        Ly = matvec(L_J, y)
        rho = float(y @ Ly)
        return y, SmootherReport(0, True, 1.0, rayleigh=rho, residual_norm=float(np.linalg.norm(Ly - rho * y)))
    attempts = 0
    while True:
        try:
            y = _unit_deflated(_random_start(rng, L_J.n))
            alignment = -1.0
            converged = False
            k = 0
            while k < max_iter:
                y_new = _unit_deflated(sigma * y - matvec(L_J, y))
                k += 1
                alignment = float(np.clip(y_new @ y, -1.0, 1.0))
                done = convergence_check(y_new, y, tol)
                y = y_new
                if done:
                    converged = True
                    break
            break
        except CollapsedIterateError:
            attempts += 1
            if attempts > 1:
                raise SolverError("power iteration collapsed twice on the coarsest level")
    Ly = matvec(L_J, y)
    rho = float(y @ Ly)
    report = SmootherReport(
        k, converged, alignment, rayleigh=rho, residual_norm=float(np.linalg.norm(Ly - rho * y))
    )
    return normalize_signed(y), report


def _smooth_with_reseed(L, y, cfg, max_sweeps, rng, residual_tol=None):
    kw = dict(residual_tol=residual_tol, accelerate=cfg.accelerate)
    try:
        return smooth_eigen(L, y, cfg.tol, max_sweeps, **kw)
    except CollapsedIterateError:
        log.debug("prolongated vector collapsed on a level of size %d; reseeding", L.n)
        try:
            return smooth_eigen(L, _random_start(rng, L.n), cfg.tol, max_sweeps, **kw)
        except CollapsedIterateError as exc:
            raise SolverError(f"smoother collapsed on a level of size {L.n}") from exc


def solve_fiedler(L: GraphLaplacian, cfg: SolverConfig = SolverConfig(), hierarchy: Hierarchy | None = None) -> FiedlerResult:
    """Fiedler vector and algebraic connectivity of a connected Laplacian.

    Parameters
    ----------
    L : GraphLaplacian
    cfg : SolverConfig
    hierarchy : Hierarchy, optional
        A hierarchy previously built for ``L``; setup is skipped.

    Returns
    -------
    FiedlerResult
        ``per_level`` holds one smoother report per level, finest first.

    Raises
    ------
    DisconnectedGraphError
    SolverError
    """
    t0 = time.perf_counter()
    if hierarchy is None:
        hierarchy = setup_hierarchy(L, cfg)
    elif hierarchy.levels[0] is not L:
        raise ValueError("hierarchy was built for a different Laplacian")
    t1 = time.perf_counter()

    rng = np.random.default_rng(cfg.seed)
    J = hierarchy.J
    coarse = hierarchy.levels[J]
    if cfg.coarse_solver == "power":
        y, coarse_report = coarsest_solve(coarse, rng, cfg.tol, cfg.max_iter_coarsest)
    else:
        y, coarse_report = _smooth_with_reseed(coarse, _random_start(rng, coarse.n), cfg, cfg.max_iter_coarsest, rng)
    log.debug("coarsest level n=%d: %d iterations, rho=%.6g", coarse.n, coarse_report.sweeps_used, coarse_report.rayleigh)

    reports = {}
    for j in range(J - 1, -1, -1):
        y = prolongate(hierarchy.interps[j], y)
        finest = j == 0
        cap = cfg.max_sweeps_finest if finest else cfg.max_sweeps_per_level
        y, reports[j] = _smooth_with_reseed(
            hierarchy.levels[j], y, cfg, cap, rng, cfg.residual_tol if finest else None
        )
        log.debug("level %d n=%d: %d sweeps", j, hierarchy.levels[j].n, reports[j].sweeps_used)
    if J == 0:
        # Single level: the power-iteration vector still gets the finest-level smoothing pass.
        y, reports[0] = _smooth_with_reseed(L, y, cfg, cfg.max_sweeps_finest, rng, cfg.residual_tol)

    lam = rayleigh_quotient(L, y)
    residual = float(np.linalg.norm(matvec(L, y) - lam * y))
    t2 = time.perf_counter()
    y.flags.writeable = False
    return FiedlerResult(
        vector=y,
        lambda2=lam,
        residual_norm=residual,
        per_level=tuple(reports[j] for j in range(J if J else 1)),
        level_sizes=tuple(hierarchy.sizes),
        setup_seconds=t1 - t0,
        solve_seconds=t2 - t1,
        coarsest=coarse_report,
    )


def bisect_by_fiedler(v) -> np.ndarray:
    """Median split of a Fiedler vector into labels 0 and 1.

    The ``n // 2`` smallest entries get label 0 (ties: lower index first),
    so part sizes differ by at most one and every ``v_i`` above the median
    lands in part 1.
    """
    v = np.asarray(v, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    labels = np.ones(v.shape[0], dtype=np.int64)
    labels[order[: v.shape[0] // 2]] = 0
    return labels
