"""Fiedler vectors of graph Laplacians by cascadic multigrid with Gauss-Seidel smoothing."""

from .coarsening import AggregationMap, InterpolationOperator, build_interpolation, hec_coarsen, prolongate
from .errors import (
    CollapsedIterateError,
    DisconnectedGraphError,
    GraphError,
    ParseError,
    SolverError,
    ZeroDiagonalError,
)
from .oracle import fiedler_oracle, jacobi_eigen_all
from .smoothing import (
    SmootherReport,
    convergence_check,
    deflate_constant,
    gauss_seidel_solve,
    normalize_signed,
    smooth_eigen,
)
from .solver import (
    FiedlerResult,
    Hierarchy,
    SolverConfig,
    bisect_by_fiedler,
    coarsest_solve,
    setup_hierarchy,
    solve_fiedler,
)
from .sparse import (
    EdgeList,
    GraphLaplacian,
    SparseMatrix,
    connected_components,
    galerkin_product,
    laplacian_from_edges,
    matvec,
    rayleigh_quotient,
)

__version__ = "0.1.0"
