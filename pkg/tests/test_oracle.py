import math

import numpy as np
import pytest

from cascadic_fiedler import DisconnectedGraphError, fiedler_oracle, jacobi_eigen_all, laplacian_from_edges
from cascadic_fiedler.graphs import complete_graph, cycle_graph, path_graph, star_graph
from cascadic_fiedler.oracle import DenseSymmetric

from conftest import lap


def test_jacobi_diagonal():
    w, V = jacobi_eigen_all(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(w, [1.0, 2.0, 3.0])
    np.testing.assert_array_equal(np.abs(V), np.eye(3)[:, [1, 2, 0]])


def test_jacobi_p3(p3):
    w, _ = jacobi_eigen_all(p3.to_dense())
    np.testing.assert_allclose(w, [0.0, 1.0, 3.0], atol=1e-14)


def test_jacobi_2x2():
    w, _ = jacobi_eigen_all(np.array([[2.0, -1.0], [-1.0, 2.0]]))
    np.testing.assert_allclose(w, [1.0, 3.0], atol=1e-15)


def test_jacobi_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        jacobi_eigen_all(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_scale_guard():
    with pytest.raises(ValueError):
        DenseSymmetric(np.zeros((2001, 2001)))


def test_oracle_p3(p3):
    lam, v = fiedler_oracle(p3)
    assert lam == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(v, np.array([1.0, 0.0, -1.0]) / math.sqrt(2), atol=1e-14)


def test_oracle_k4_and_c4():
    L = laplacian_from_edges(complete_graph(4))
    lam, v = fiedler_oracle(L)
    assert lam == pytest.approx(4.0, abs=1e-13)
    assert abs(v.sum()) < 1e-13
    np.testing.assert_allclose(L @ v, 4.0 * v, atol=1e-12)
    lam, v = fiedler_oracle(laplacian_from_edges(cycle_graph(4)))
    assert lam == pytest.approx(2.0, abs=1e-13)


def test_oracle_rejects_disconnected():
    with pytest.raises(DisconnectedGraphError):
        fiedler_oracle(lap(4, [(0, 1, 1.0), (2, 3, 1.0)]))


@pytest.mark.parametrize(
    "edges, spectrum",
    [
        (path_graph(7), [2 - 2 * math.cos(k * math.pi / 7) for k in range(7)]),
        (cycle_graph(9), [2 - 2 * math.cos(2 * k * math.pi / 9) for k in range(9)]),
        (star_graph(6), [0.0, 1, 1, 1, 1, 6]),
        (complete_graph(5), [0.0, 5, 5, 5, 5]),
    ],
)
def test_analytic_families(edges, spectrum):
    w, _ = jacobi_eigen_all(laplacian_from_edges(edges).to_dense())
    np.testing.assert_allclose(w, np.sort(spectrum), atol=1e-10)
