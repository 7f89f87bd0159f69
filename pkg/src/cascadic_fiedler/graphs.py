"""Synthetic graph families with known Laplacian spectra."""

from __future__ import annotations

import numpy as np

from .sparse import EdgeList, connected_components

__all__ = [
    "grid_graph",
    "path_graph",
    "cycle_graph",
    "star_graph",
    "complete_graph",
    "random_connected_graph",
    "largest_component",
]


def grid_graph(m: int) -> EdgeList:
    """``m x m`` four-neighbour lattice with unit weights; vertex ``r*m + c``."""
    if m < 2:
        raise ValueError("grid side length must be at least 2")
    idx = np.arange(m * m, dtype=np.int64).reshape(m, m)
    right = (idx[:, :-1].ravel(), idx[:, 1:].ravel())
    down = (idx[:-1, :].ravel(), idx[1:, :].ravel())
    i = np.concatenate([right[0], down[0]])
    j = np.concatenate([right[1], down[1]])
    return EdgeList(m * m, i, j, np.ones(i.size))


def path_graph(n: int) -> EdgeList:
    i = np.arange(n - 1)
    return EdgeList(n, i, i + 1, np.ones(n - 1))


def cycle_graph(n: int) -> EdgeList:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    i = np.arange(n)
    return EdgeList(n, i, (i + 1) % n, np.ones(n))


def star_graph(n: int) -> EdgeList:
    """Star ``K_{1,n-1}`` with centre 0."""
    leaves = np.arange(1, n)
    return EdgeList(n, np.zeros(n - 1, dtype=np.int64), leaves, np.ones(n - 1))


def complete_graph(n: int) -> EdgeList:
    i, j = np.triu_indices(n, 1)
    return EdgeList(n, i, j, np.ones(i.size))


def random_connected_graph(n: int, rng, extra_edges=None, low=0.0, high=1.0) -> EdgeList:
    """Random spanning tree plus ``extra_edges`` random chords.

    Weights are uniform on ``(low, high]``.
    """
    rng = np.random.default_rng(rng)
    if extra_edges is None:
        extra_edges = n
    parent = np.array([rng.integers(0, v) for v in range(1, n)], dtype=np.int64)
    tree_i = np.arange(1, n, dtype=np.int64)
    ci = rng.integers(0, n, extra_edges)
    cj = rng.integers(0, n, extra_edges)
    keep = ci != cj
    i = np.concatenate([tree_i, ci[keep]])
    j = np.concatenate([parent, cj[keep]])
    w = high - (high - low) * rng.random(i.size)
    return EdgeList(n, i, j, w)


def largest_component(edges: EdgeList):
    """Restrict to the largest connected component.

    Returns the relabelled sub-edge-list and the original index of each of
    its vertices.  Ties go to the component containing the smallest vertex.
    """
    labels, count = connected_components(edges)
    if count <= 1:
        return edges, np.arange(edges.n)
    sizes = np.bincount(labels, minlength=count)
    vertices = np.flatnonzero(labels == int(np.argmax(sizes)))
    return edges.subgraph(vertices), vertices
