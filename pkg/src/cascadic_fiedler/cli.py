"""Command line interface.

Exit codes: 0 success, 2 bad arguments, 3 parse error, 4 disconnected
graph, 5 solver failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .bench import format_bench_csv, run_bench
from .errors import CollapsedIterateError, DisconnectedGraphError, GraphError, ParseError, SolverError
from .graphs import largest_component
from .io import load_graph, write_result
from .solver import SolverConfig, bisect_by_fiedler, setup_hierarchy, solve_fiedler
from .sparse import laplacian_from_edges

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_DISCONNECTED = 4
EXIT_SOLVER = 5


def _sizes(text):
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not sizes or any(m < 2 for m in sizes):
        raise argparse.ArgumentTypeError("grid sizes must be integers >= 2")
    return sizes


def _add_solver_flags(p):
    p.add_argument("--tol", type=float, default=1e-6, help="alignment tolerance (default 1e-6)")
    p.add_argument("--coarsest", type=int, default=25, help="coarsest level size (default 25)")
    p.add_argument("--max-sweeps", type=int, default=50, help="smoothing sweeps per level (default 50)")
    p.add_argument("--max-sweeps-finest", type=int, default=500, help="sweeps on the finest level (default 500)")
    p.add_argument("--residual-tol", type=float, default=1e-2, help="relative residual target on the finest level")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--largest-component", action="store_true", help="solve on the largest connected component")


def _config(args):
    try:
        return SolverConfig(
            coarsest_size=args.coarsest,
            tol=args.tol,
            max_sweeps_per_level=args.max_sweeps,
            max_sweeps_finest=args.max_sweeps_finest,
            residual_tol=args.residual_tol if args.residual_tol > 0 else None,
            seed=args.seed,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


class _UsageError(Exception):
    pass


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cascadic-fiedler",
        description="Fiedler vector and algebraic connectivity by cascadic multigrid.",
        epilog="exit codes: 0 ok, 2 bad arguments, 3 parse error, 4 disconnected graph, 5 solver failure",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fiedler", help="Fiedler vector and algebraic connectivity")
    p.add_argument("file")
    _add_solver_flags(p)
    p.add_argument("--out", help="write the result here")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("partition", help="median bisection by the Fiedler vector")
    p.add_argument("file")
    _add_solver_flags(p)
    p.add_argument("--out", required=True, help="per-vertex labels, one per line")

    p = sub.add_parser("hierarchy", help="print the coarsening hierarchy")
    p.add_argument("file")
    _add_solver_flags(p)

    p = sub.add_parser("bench", help="runtime scaling on m x m grids")
    p.add_argument("--sizes", type=_sizes, required=True, help="comma-separated grid side lengths")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="also write the table here")
    return parser


def _load(args):
    try:
        edges = load_graph(args.file)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        raise _UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    except (UnicodeDecodeError, GraphError) as exc:
        raise ParseError(str(exc)) from None
    n_original = edges.n
    index = None
    if args.largest_component:
        edges, index = largest_component(edges)
    return laplacian_from_edges(edges), index, n_original


def _cmd_fiedler(args):
    L, index, _ = _load(args)
    result = solve_fiedler(L, _config(args))
    print(f"n = {L.n}")
    print(f"levels = {' '.join(map(str, result.level_sizes))}")
    print(f"lambda2 = {result.lambda2:.12g}")
    print(f"residual_norm = {result.residual_norm:.6g}")
    print(f"setup_seconds = {result.setup_seconds:.6f}")
    print(f"solve_seconds = {result.solve_seconds:.6f}")
    if args.out:
        write_result(result, args.out, args.format, vertex_index=index)
    return EXIT_OK


def _cmd_partition(args):
    L, index, n_original = _load(args)
    result = solve_fiedler(L, _config(args))
    labels = bisect_by_fiedler(result.vector)
    if index is not None:
        full = np.full(n_original, -1, dtype=np.int64)
        full[index] = labels
        labels = full
    with open(args.out, "w") as fh:
        fh.writelines(f"{v}\n" for v in labels.tolist())
    print(f"lambda2 = {result.lambda2:.12g}")
    print(f"part sizes = {int(np.sum(labels == 0))} {int(np.sum(labels == 1))}")
    return EXIT_OK


def _cmd_hierarchy(args):
    L, _, _ = _load(args)
    h = setup_hierarchy(L, _config(args))
    print("level,n,edges")
    for k, level in enumerate(h.levels):
        print(f"{k},{level.n},{level.n_edges}")
    if h.stalled:
        print("# coarsening stalled")
    return EXIT_OK


def _cmd_bench(args):
    cfg = SolverConfig(seed=args.seed)
    if args.reps < 1:
        raise _UsageError("--reps must be at least 1")
    records, fit = run_bench(args.sizes, args.reps, cfg)
    text = format_bench_csv(records, fit)
    sys.stdout.write(text)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(text)
    return EXIT_OK


_COMMANDS = {
    "fiedler": _cmd_fiedler,
    "partition": _cmd_partition,
    "hierarchy": _cmd_hierarchy,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DisconnectedGraphError as exc:
        print(f"error: {exc}; try --largest-component", file=sys.stderr)
        return EXIT_DISCONNECTED
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SolverError, CollapsedIterateError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
