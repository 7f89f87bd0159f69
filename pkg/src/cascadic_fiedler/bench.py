"""Runtime scaling of the cascadic solver on square grids."""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import SolverError
from .graphs import grid_graph
from .solver import SolverConfig, solve_fiedler
from .sparse import laplacian_from_edges

__all__ = ["BenchRecord", "FitSummary", "fit_scaling", "run_bench", "warm_up", "format_bench_csv"]


@dataclass(frozen=True)
class BenchRecord:
    n: int
    edges: int
    setup_seconds: float
    solve_seconds: float
    total_seconds: float
    lambda2: float
    seed: int


@dataclass(frozen=True)
class FitSummary:
    """``slope``/``intercept`` of log(time) vs log(n); ``r`` is Pearson's r of time vs n."""

    slope: float
    intercept: float
    r: float


def fit_scaling(n, seconds) -> FitSummary:
    n = np.asarray(n, dtype=np.float64)
    t = np.asarray(seconds, dtype=np.float64)
    if n.size < 2:
        raise ValueError("need at least two points to fit")
    if np.any(n <= 0) or np.any(t <= 0):
        raise ValueError("sizes and times must be positive")
    slope, intercept = np.polyfit(np.log(n), np.log(t), 1)
    r = float(np.corrcoef(n, t)[0, 1]) if np.ptp(t) > 0 and np.ptp(n) > 0 else 1.0
    return FitSummary(float(slope), float(intercept), float(np.clip(r, -1.0, 1.0)))


def warm_up():
    """Compile the numba kernels so they stay out of the timings."""
    solve_fiedler(laplacian_from_edges(grid_graph(8)), SolverConfig(coarsest_size=4))


def run_bench(sizes, reps=3, cfg: SolverConfig = SolverConfig(), progress=None):
    """Median timings of :func:`solve_fiedler` on ``m x m`` grids.

    Returns ``(records, fit)``; the fit uses the median total time.
    """
    sizes = list(sizes)
    if not sizes:
        raise ValueError("no sizes given")
    if any(m < 2 for m in sizes):
        raise ValueError("grid sizes must be at least 2")
    warm_up()
    records = []
    for m in sizes:
        edges = grid_graph(m)
        L = laplacian_from_edges(edges)
        runs = []
        for _ in range(reps):
            try:
                runs.append(solve_fiedler(L, cfg))
            except Exception as exc:
                raise SolverError(f"solve failed on the {m} x {m} grid: {exc}") from exc
        rec = BenchRecord(
            n=L.n,
            edges=len(edges),
            setup_seconds=statistics.median(r.setup_seconds for r in runs),
            solve_seconds=statistics.median(r.solve_seconds for r in runs),
            total_seconds=statistics.median(r.total_seconds for r in runs),
            lambda2=runs[0].lambda2,
            seed=cfg.seed,
        )
        records.append(rec)
        if progress is not None:
            progress(rec)
    fit = fit_scaling([r.n for r in records], [r.total_seconds for r in records]) if len(records) > 1 else None
    return records, fit


def format_bench_csv(records, fit) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f.name for f in fields(BenchRecord)])
    for rec in records:
        writer.writerow(list(asdict(rec).values()))
    if fit is not None:
        buf.write(f"# fit slope={fit.slope:.6f} intercept={fit.intercept:.6f} r={fit.r:.6f}\n")
    return buf.getvalue()
