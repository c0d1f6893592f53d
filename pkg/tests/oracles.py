"""Brute-force references for the test suite.

Nothing here imports the package under test: inputs are plain numpy arrays
or adjacency lists, and every answer is recomputed from first principles.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

SUBSET_LIMIT = 10_000


@dataclass(frozen=True)
class BruteForceResult:
    method: str
    value: object
    instance: str = ""


def bfs_reachable(adj, s: int, t: int, removed=()) -> bool:
    """Breadth-first search on the support of ``adj`` after deleting ``removed``."""
    adj = np.asarray(adj)
    removed = set(removed)
    if s in removed or t in removed:
        return False
    if s == t:
        return True
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u]):
            v = int(v)
            if v in removed or v in seen:
                continue
            if v == t:
                return True
            seen.add(v)
            queue.append(v)
    return False


def reachability_table(adj, removed=()) -> np.ndarray:
    """R[s, t] by one breadth-first search per alive source."""
    adj = np.asarray(adj)
    n = len(adj)
    removed = set(removed)
    succ = [[int(v) for v in np.flatnonzero(adj[u]) if v not in removed] for u in range(n)]
    out = np.zeros((n, n), dtype=bool)
    for s in range(n):
        if s in removed:
            continue
        row = out[s]
        row[s] = True
        queue = deque([s])
        while queue:
            for v in succ[queue.popleft()]:
                if not row[v]:
                    row[v] = True
                    queue.append(v)
    return out


def per_target_fundamental(p, t: int) -> np.ndarray:
    """(I - P without t)^-1 padded back to n x n with zeros in row and column t."""
    p = np.asarray(p, dtype=float)
    n = len(p)
    keep = [i for i in range(n) if i != t]
    out = np.zeros((n, n))
    if keep:
        out[np.ix_(keep, keep)] = np.linalg.inv(np.eye(n - 1) - p[np.ix_(keep, keep)])
    return out


def hit_before_probability(p, sources_to: list[int], avoid: list[int]) -> np.ndarray:
    """x[s] = Pr[walk from s enters ``sources_to`` before ``avoid``], by one linear solve."""
    p = np.asarray(p, dtype=float)
    n = len(p)
    hit, stop = set(sources_to), set(avoid)
    free = [i for i in range(n) if i not in hit and i not in stop]
    x = np.zeros(n)
    x[list(hit)] = 1.0
    if free:
        a = np.eye(len(free)) - p[np.ix_(free, free)]
        b = p[np.ix_(free, list(hit))].sum(axis=1)
        x[free] = np.linalg.solve(a, b)
    return x


def articulation_triples(adj) -> set[tuple[int, int, int]]:
    """(s, m, t) with s, m, t distinct, t reachable from s, but not once m is deleted."""
    n = len(adj)
    base = reachability_table(adj)
    out = set()
    for m in range(n):
        cut = reachability_table(adj, [m])
        for s in range(n):
            for t in range(n):
                if len({s, m, t}) == 3 and base[s, t] and not cut[s, t]:
                    out.add((s, m, t))
    return out


def extended_chain(adj, beta: float) -> np.ndarray:
    """Row-normalized transition matrix of adj plus an absorbing node o (last index)."""
    adj = np.asarray(adj, dtype=float)
    n = len(adj)
    a = np.zeros((n + 1, n + 1))
    a[:n, :n] = adj
    a[:n, n] = beta
    a[n, n] = 1.0
    return a / a.sum(axis=1, keepdims=True)


def subset_spread(p_ext, seeds) -> float:
    n = len(p_ext) - 1
    return float(hit_before_probability(p_ext, list(seeds), [n])[:n].sum())


def best_subset_spread(p_ext, k: int) -> BruteForceResult:
    """Exhaustive best k-subset of the original nodes (o is the last index)."""
    n = len(p_ext) - 1
    if comb(n, k) > SUBSET_LIMIT:
        raise ValueError(f"C({n}, {k}) subsets exceeds the brute-force limit")
    best, best_set = -np.inf, None
    for subset in combinations(range(n), k):
        val = subset_spread(p_ext, subset)
        if val > best + 1e-12:
            best, best_set = val, subset
    return BruteForceResult("exhaustive-subsets", (best_set, best), f"n={n}, k={k}")
