"""Small graph families used by tests, scripts and examples."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def _names(n: int) -> tuple[str, ...]:
    return tuple(str(i + 1) for i in range(n))


def _undirected(a: np.ndarray) -> Graph:
    a = np.maximum(a, a.T)
    return Graph.from_adjacency(a, _names(len(a)), directed=False)


def random_strongly_connected(n: int, rng: np.random.Generator, density: float = 0.15,
                              weighted: bool = True) -> Graph:
    """Directed Erdos-Renyi graph plus a random Hamiltonian cycle.

    Weights are U[0.5, 2] when ``weighted``; no self-loops.
    """
    a = (rng.random((n, n)) < density).astype(float)
    perm = rng.permutation(n)
    a[perm, np.roll(perm, -1)] = 1.0
    np.fill_diagonal(a, 0.0)
    if weighted:
        a *= rng.uniform(0.5, 2.0, size=(n, n))
    return Graph.from_adjacency(a, _names(n), directed=True)


def random_connected_undirected(n: int, rng: np.random.Generator, density: float = 0.2,
                                weighted: bool = True) -> Graph:
    """Symmetric random graph grown from a random spanning path."""
    a = np.triu((rng.random((n, n)) < density).astype(float), 1)
    perm = rng.permutation(n)
    a[perm[:-1], perm[1:]] = 1.0
    a = np.maximum(a, a.T)
    if weighted:
        w = np.triu(rng.uniform(0.5, 2.0, size=(n, n)), 1)
        a *= w + w.T
    return Graph.from_adjacency(a, _names(n), directed=False)


def random_digraph(n: int, rng: np.random.Generator, density: float = 0.15) -> Graph:
    """Unweighted directed graph with no connectivity guarantee."""
    a = (rng.random((n, n)) < density).astype(float)
    np.fill_diagonal(a, 0.0)
    return Graph.from_adjacency(a, _names(n), directed=True)


def path(n: int) -> Graph:
    a = np.zeros((n, n))
    i = np.arange(n - 1)
    a[i, i + 1] = 1.0
    return _undirected(a)


def cycle(n: int) -> Graph:
    a = np.zeros((n, n))
    i = np.arange(n)
    a[i, (i + 1) % n] = 1.0
    return _undirected(a)


def directed_cycle(n: int) -> Graph:
    a = np.zeros((n, n))
    i = np.arange(n)
    a[i, (i + 1) % n] = 1.0
    return Graph.from_adjacency(a, _names(n), directed=True)


def star(n: int) -> Graph:
    """Center is node "1" (index 0) with n - 1 leaves."""
    a = np.zeros((n, n))
    a[0, 1:] = 1.0
    return _undirected(a)


def complete(n: int) -> Graph:
    return _undirected(1.0 - np.eye(n))


def grid(rows: int, cols: int) -> Graph:
    n = rows * cols
    a = np.zeros((n, n))
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                a[v, v + 1] = 1.0
            if r + 1 < rows:
                a[v, v + cols] = 1.0
    return _undirected(a)


def binary_tree(n: int) -> Graph:
    """Heap-ordered binary tree: parent of i is (i - 1) // 2."""
    a = np.zeros((n, n))
    for i in range(1, n):
        a[(i - 1) // 2, i] = 1.0
    return _undirected(a)


def barbell() -> Graph:
    """Two triangles joined through a bridge node (index 6)."""
    a = np.zeros((7, 7))
    for u, v in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 6), (6, 3)]:
        a[u, v] = 1.0
    return _undirected(a)


def twin_stars(leaves: int = 3, link: float = 0.1) -> Graph:
    """Two stars whose centers (indices 0 and leaves + 1) share a light edge."""
    n = 2 * (leaves + 1)
    a = np.zeros((n, n))
    c2 = leaves + 1
    a[0, 1:c2] = 1.0
    a[c2, c2 + 1:] = 1.0
    a[0, c2] = link
    return _undirected(a)
