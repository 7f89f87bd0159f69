import math

import numpy as np
import pytest

from cascadic_fiedler import (
    DisconnectedGraphError,
    EdgeList,
    GraphError,
    SolverConfig,
    bisect_by_fiedler,
    coarsest_solve,
    fiedler_oracle,
    laplacian_from_edges,
    rayleigh_quotient,
    setup_hierarchy,
    solve_fiedler,
)
from cascadic_fiedler.graphs import complete_graph, cycle_graph, grid_graph, path_graph, random_connected_graph, star_graph

from conftest import lap


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(coarsest_size=1)
    with pytest.raises(ValueError):
        SolverConfig(tol=0.0)
    with pytest.raises(ValueError):
        SolverConfig(max_sweeps_finest=0)
    with pytest.raises(ValueError):
        SolverConfig(coarse_solver="lanczos")


def test_small_graph_has_single_level():
    h = setup_hierarchy(laplacian_from_edges(path_graph(20)))
    assert h.J == 0 and h.sizes == [20]


def test_grid_hierarchy_sizes_decrease():
    h = setup_hierarchy(laplacian_from_edges(grid_graph(100)), SolverConfig(seed=0))
    sizes = h.sizes
    assert sizes[0] == 10_000
    assert all(b < a for a, b in zip(sizes, sizes[1:]))
    assert sizes[-1] <= 25 and not h.stalled


def test_hierarchy_p4_forced_permutation():
    L = lap(4, [(0, 1, 3.0), (1, 2, 1.0), (2, 3, 3.0)])
    h = setup_hierarchy(L, SolverConfig(coarsest_size=2), permutations=[[1, 0, 2, 3]])
    assert h.J == 1
    np.testing.assert_array_equal(h.levels[1].to_dense(), [[1.0, -1.0], [-1.0, 1.0]])


def test_hierarchy_rejects_disconnected():
    L = lap(4, [(0, 1, 1.0), (2, 3, 1.0)])
    with pytest.raises(DisconnectedGraphError) as info:
        setup_hierarchy(L)
    assert info.value.n_components == 2


def test_coarsest_solve_p3(p3):
    y, rep = coarsest_solve(p3, 0)
    assert rayleigh_quotient(p3, y) == pytest.approx(1.0, abs=1e-6)
    assert abs(y @ np.array([1.0, 0.0, -1.0]) / math.sqrt(2)) == pytest.approx(1.0, abs=1e-6)


def test_coarsest_solve_k4_exact():
    L = laplacian_from_edges(complete_graph(4))
    y, rep = coarsest_solve(L, 0)
    assert rayleigh_quotient(L, y) == pytest.approx(4.0, abs=1e-12)
    assert rep.converged


def test_coarsest_solve_c4():
    L = laplacian_from_edges(cycle_graph(4))
    y, _ = coarsest_solve(L, 0)
    assert rayleigh_quotient(L, y) == pytest.approx(2.0, abs=1e-6)


def test_solve_p3(p3):
    res = solve_fiedler(p3)
    assert res.lambda2 == pytest.approx(1.0, abs=1e-4)
    assert abs(res.vector @ np.array([1.0, 0.0, -1.0]) / math.sqrt(2)) >= 0.999


def test_solve_star():
    assert solve_fiedler(laplacian_from_edges(star_graph(6))).lambda2 == pytest.approx(1.0, abs=1e-3)


def test_solve_grid_30():
    res = solve_fiedler(laplacian_from_edges(grid_graph(30)))
    exact = 4 * math.sin(math.pi / 60) ** 2
    assert res.lambda2 == pytest.approx(exact, rel=1e-4)
    assert len(res.per_level) == len(res.level_sizes) - 1


def test_result_invariants(rng):
    L = laplacian_from_edges(random_connected_graph(150, rng))
    res = solve_fiedler(L)
    v = res.vector
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
    assert abs(v.sum()) <= 1e-8 * math.sqrt(L.n)
    assert res.lambda2 == rayleigh_quotient(L, v)
    assert res.lambda2 + 1e-9 >= fiedler_oracle(L)[0]
    assert res.setup_seconds >= 0 and res.solve_seconds >= 0
    with pytest.raises(ValueError):
        v[0] = 1.0


def test_solve_reuses_hierarchy():
    L = laplacian_from_edges(grid_graph(12))
    h = setup_hierarchy(L)
    a, b = solve_fiedler(L, hierarchy=h), solve_fiedler(L)
    np.testing.assert_array_equal(a.vector, b.vector)
    with pytest.raises(ValueError):
        solve_fiedler(laplacian_from_edges(grid_graph(12)), hierarchy=h)


def test_gauss_seidel_coarse_switch():
    L = laplacian_from_edges(grid_graph(15))
    res = solve_fiedler(L, SolverConfig(coarse_solver="gauss-seidel"))
    assert res.lambda2 == pytest.approx(4 * math.sin(math.pi / 30) ** 2, rel=1e-3)


def test_solve_rejects_tiny_and_disconnected():
    with pytest.raises(GraphError):
        solve_fiedler(laplacian_from_edges(path_graph(1)))
    with pytest.raises(DisconnectedGraphError):
        solve_fiedler(lap(4, [(0, 1, 1.0), (2, 3, 1.0)]))


def test_bisect_p3():
    labels = bisect_by_fiedler(np.array([1.0, 0.0, -1.0]) / math.sqrt(2))
    np.testing.assert_array_equal(labels, [1, 1, 0])


def test_bisect_two_triangles():
    L = lap(6, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1), (2, 3, 1)])
    labels = bisect_by_fiedler(solve_fiedler(L).vector)
    assert len(set(labels[:3])) == 1 and len(set(labels[3:])) == 1
    assert labels[0] != labels[3]


def test_bisect_constant_splits_by_index():
    np.testing.assert_array_equal(bisect_by_fiedler(np.zeros(5)), [0, 0, 1, 1, 1])


def test_two_vertex_graph():
    L = lap(2, [(0, 1, 3.0)])
    y, rep = coarsest_solve(L, 0)
    assert rayleigh_quotient(L, y) == pytest.approx(6.0, abs=1e-12)
    assert solve_fiedler(L).lambda2 == pytest.approx(6.0, abs=1e-12)


@pytest.mark.parametrize("edges, exact", [(path_graph(3), 1.0), (star_graph(7), 1.0), (complete_graph(5), 5.0)])
def test_hierarchy_never_collapses_to_one_vertex(edges, exact):
    L = laplacian_from_edges(edges)
    h = setup_hierarchy(L, SolverConfig(coarsest_size=2))
    assert h.sizes[-1] >= 2
    assert solve_fiedler(L, SolverConfig(coarsest_size=2)).lambda2 == pytest.approx(exact, rel=1e-6)
