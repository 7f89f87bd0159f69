import numpy as np
import pytest

from cascadic_fiedler import (
    build_interpolation,
    galerkin_product,
    hec_coarsen,
    laplacian_from_edges,
    prolongate,
)
from cascadic_fiedler.coarsening import AggregationMap
from cascadic_fiedler.graphs import grid_graph, path_graph

from conftest import lap


def p4_weighted():
    return lap(4, [(0, 1, 3.0), (1, 2, 1.0), (2, 3, 3.0)])


def test_hec_p4_forced_permutation():
    agg = hec_coarsen(p4_weighted(), permutation=[1, 0, 2, 3])
    np.testing.assert_array_equal(agg.q, [0, 0, 1, 1])
    assert agg.c == 2


def test_hec_p3_single_aggregate(p3):
    agg = hec_coarsen(p3, permutation=[0, 1, 2])
    np.testing.assert_array_equal(agg.q, [0, 0, 0])
    assert agg.c == 1


def test_hec_single_vertex():
    L = laplacian_from_edges(path_graph(1))
    agg = hec_coarsen(L, 0)
    np.testing.assert_array_equal(agg.q, [0])
    assert agg.c == 1


def test_hec_tie_breaks_to_lowest_index():
    # Vertex 1 has equal weights to 0 and 2.
    agg = hec_coarsen(laplacian_from_edges(path_graph(3)), permutation=[1, 0, 2])
    np.testing.assert_array_equal(agg.q, [0, 0, 0])
    assert agg.c == 1


def test_hec_seed_is_reproducible():
    L = laplacian_from_edges(grid_graph(12))
    a, b = hec_coarsen(L, 7), hec_coarsen(L, 7)
    np.testing.assert_array_equal(a.q, b.q)
    assert a.permutation_seed == 7


def test_hec_rejects_bad_permutation(p3):
    with pytest.raises(ValueError):
        hec_coarsen(p3, permutation=[0, 0, 1])


def test_interpolation_rows():
    P = build_interpolation(AggregationMap(np.array([0, 0, 1, 1]), 2))
    np.testing.assert_array_equal(P.matrix.to_dense(), [[1, 1, 0, 0], [0, 0, 1, 1]])
    assert P.shape == (2, 4)


def test_aggregation_rejects_unused_id():
    with pytest.raises(ValueError):
        AggregationMap(np.array([0, 2]), 3)


def test_prolongate():
    P = build_interpolation(AggregationMap(np.array([0, 0, 1, 1]), 2))
    np.testing.assert_array_equal(prolongate(P, [2.0, -3.0]), [2.0, 2.0, -3.0, -3.0])
    I = build_interpolation(AggregationMap.identity(3))
    np.testing.assert_array_equal(prolongate(I, [1.0, 2.0, 3.0]), [1.0, 2.0, 3.0])
    one = build_interpolation(AggregationMap(np.zeros(3, dtype=np.int64), 1))
    np.testing.assert_array_equal(prolongate(one, [5.0]), [5.0, 5.0, 5.0])
    with pytest.raises(ValueError):
        prolongate(P, [1.0, 2.0, 3.0])


def test_galerkin_of_hec_p4():
    L = p4_weighted()
    P = build_interpolation(hec_coarsen(L, permutation=[1, 0, 2, 3]))
    np.testing.assert_array_equal(galerkin_product(L, P).to_dense(), [[1.0, -1.0], [-1.0, 1.0]])


def test_restrict_is_transpose_of_prolongate(rng):
    L = laplacian_from_edges(grid_graph(6))
    P = build_interpolation(hec_coarsen(L, 3))
    x = rng.standard_normal(L.n)
    yc = rng.standard_normal(P.aggregation.c)
    assert P.restrict(x) @ yc == pytest.approx(x @ prolongate(P, yc))
