import math

import numpy as np
import pytest

from cascadic_fiedler import (
    CollapsedIterateError,
    SparseMatrix,
    ZeroDiagonalError,
    convergence_check,
    deflate_constant,
    gauss_seidel_solve,
    laplacian_from_edges,
    normalize_signed,
    rayleigh_quotient,
    smooth_eigen,
)
from cascadic_fiedler.graphs import grid_graph, path_graph

A2 = SparseMatrix.from_dense([[2.0, -1.0], [-1.0, 2.0]])


def test_gs_first_sweep_and_limit():
    seen = []
    x, rep = gauss_seidel_solve(A2, [1.0, 1.0], [0.0, 0.0], tol=1e-12, callback=lambda k, x: seen.append(x))
    np.testing.assert_allclose(seen[0], [0.5, 0.75])
    np.testing.assert_allclose(x, [1.0, 1.0], atol=1e-11)
    assert rep.converged


def test_gs_zero_rhs_fixed_point():
    x, rep = gauss_seidel_solve(A2, [0.0, 0.0], [0.0, 0.0])
    np.testing.assert_array_equal(x, [0.0, 0.0])
    assert rep.sweeps_used == 1 and rep.converged


def test_gs_identity_one_sweep():
    b = np.array([3.0, -1.0, 2.0])
    seen = []
    x, _ = gauss_seidel_solve(SparseMatrix.identity(3), b, np.zeros(3), callback=lambda k, x: seen.append(x))
    np.testing.assert_array_equal(seen[0], b)
    np.testing.assert_array_equal(x, b)


def test_gs_zero_diagonal_reports_index():
    A = SparseMatrix.from_dense([[1.0, 1.0], [1.0, 0.0]])
    with pytest.raises(ZeroDiagonalError) as info:
        gauss_seidel_solve(A, [1.0, 1.0], [0.0, 0.0])
    assert info.value.index == 1


def test_gs_respects_max_iter():
    _, rep = gauss_seidel_solve(A2, [1.0, 1.0], [0.0, 0.0], tol=0.0, max_iter=7)
    assert rep.sweeps_used == 7 and not rep.converged


def test_smooth_eigen_p3_exact_start(p3):
    y, rep = smooth_eigen(p3, [1.0, 0.0, -1.0], tol=1e-6)
    assert rep.sweeps_used == 1 and rep.converged
    assert rep.last_alignment >= 1 - 1e-6
    np.testing.assert_allclose(np.abs(y), np.array([1.0, 0.0, 1.0]) / math.sqrt(2), atol=1e-12)


def test_smooth_eigen_constant_start_collapses(p3):
    with pytest.raises(CollapsedIterateError):
        smooth_eigen(p3, np.ones(3))


def test_smooth_eigen_p4_random_start():
    L = laplacian_from_edges(path_graph(4))
    y0 = np.random.default_rng(0).standard_normal(4)
    y, rep = smooth_eigen(L, y0, tol=1e-6)
    assert abs(rayleigh_quotient(L, y) - (2 - math.sqrt(2))) <= 1e-4


def test_smooth_eigen_respects_cap():
    L = laplacian_from_edges(grid_graph(20))
    _, rep = smooth_eigen(L, np.random.default_rng(1).standard_normal(L.n), tol=1e-14, max_sweeps=3)
    assert rep.sweeps_used == 3 and not rep.converged
    assert -1.0 <= rep.last_alignment <= 1.0


def test_smooth_eigen_without_acceleration(p3):
    y, rep = smooth_eigen(p3, [1.0, 0.2, -0.7], tol=1e-10, max_sweeps=200, accelerate=False)
    assert rayleigh_quotient(p3, y) == pytest.approx(1.0, abs=1e-8)


def test_deflate_constant():
    np.testing.assert_array_equal(deflate_constant([1.0, 1.0, 1.0]), [0.0, 0.0, 0.0])
    np.testing.assert_array_equal(deflate_constant([1.0, 0.0, -1.0]), [1.0, 0.0, -1.0])
    np.testing.assert_array_equal(deflate_constant([2.0, 0.0, 1.0]), [1.0, -1.0, 0.0])


def test_normalize_signed():
    np.testing.assert_array_equal(normalize_signed([0.0, 0.0, 2.0]), [0.0, 0.0, 1.0])
    np.testing.assert_array_equal(normalize_signed([-3.0, 0.0, 0.0]), [1.0, 0.0, 0.0])
    np.testing.assert_allclose(normalize_signed([1.0, 1.0]), [math.sqrt(2) / 2] * 2)
    # Equal magnitudes: the lowest index decides.
    np.testing.assert_array_equal(normalize_signed([-1.0, 1.0]), np.array([1.0, -1.0]) / math.sqrt(2))
    with pytest.raises(ValueError):
        normalize_signed([0.0, 0.0])


def test_convergence_check():
    u = np.array([0.6, 0.8])
    assert convergence_check(u, u, 1e-12)
    assert not convergence_check(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 1e-6)
    tol = 1e-6
    c = 1.0 - tol
    a = np.array([1.0, 0.0])
    b = np.array([c, math.sqrt(1 - c * c)])
    assert float(a @ b) == 1.0 - tol
    assert not convergence_check(a, b, tol)
