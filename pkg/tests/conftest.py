import numpy as np
import pytest

from cascadic_fiedler import EdgeList, laplacian_from_edges
from cascadic_fiedler.graphs import path_graph


def lap(n, edges):
    """Laplacian from ``(i, j, w)`` tuples."""
    return laplacian_from_edges(EdgeList.from_tuples(n, edges))


@pytest.fixture
def p3():
    return laplacian_from_edges(path_graph(3))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line: ``report(number, passed, detail)``."""

    def add(number, passed, detail):
        _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}")

    return add


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
