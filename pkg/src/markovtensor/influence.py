"""Influence spread on the extended graph G^o and greedy seed selection.

A walk started at s models how s gets persuaded: if it reaches a seed before
being absorbed by the exogenous node o, s adopts. The spread of a seed set S
is |S| plus the adoption probabilities of everyone else.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .errors import ValidationError
from .fundamental import FundamentalMatrix, fundamental_matrix, incremental_fundamental
from .graph import ExtendedGraph, Graph

METHODS = ("c2greedy", "degree", "closeness", "pagerank", "random")
BASELINES = METHODS[1:]
PAGERANK_DAMPING = 0.85
PAGERANK_TOL = 1e-10
TIE_RTOL = 1e-12
GAIN_SLACK = 1e-9


@dataclass(frozen=True)
class SeedSelection:
    seeds: tuple[int, ...]
    marginal_gains: tuple[float, ...]
    spread: float

    @property
    def k(self) -> int:
        return len(self.seeds)


def _argmax(values: np.ndarray) -> int:
    """Lowest index among entries within TIE_RTOL of the maximum."""
    top = values.max()
    return int(np.flatnonzero(values >= top - TIE_RTOL * max(abs(top), 1.0))[0])


def _top_k(scores: np.ndarray, k: int) -> list[int]:
    """Indices of the k largest scores; near-equal scores keep index order."""
    scores = np.asarray(scores, dtype=float)
    scale = max(np.abs(scores).max(initial=0.0), 1e-300)
    key = np.round(scores / scale / TIE_RTOL)
    return [int(i) for i in np.argsort(-key, kind="stable")[:k]]


def _seed_indices(ext: ExtendedGraph, seeds: Iterable[int]) -> tuple[int, ...]:
    out = tuple(dict.fromkeys(int(s) for s in seeds))
    if not out:
        raise ValidationError("seed set must be nonempty", module="influence")
    if ext.o_index in out:
        raise ValidationError("the exogenous node cannot be a seed", module="influence")
    for s in out:
        if not 0 <= s < ext.base.n:
            raise ValidationError(f"seed index {s} out of range", module="influence")
    return out


def adoption_probabilities(ext: ExtendedGraph, seeds: Iterable[int]) -> np.ndarray:
    """Per original node, probability of reaching S before o (1 on S)."""
    seeds = _seed_indices(ext, seeds)
    fm = fundamental_matrix(ext.transition_matrix(), seeds + (ext.o_index,))
    return _adoption_from(fm, ext)


def _adoption_from(fm: FundamentalMatrix, ext: ExtendedGraph) -> np.ndarray:
    p = ext.transition_matrix().p
    out = np.ones(ext.base.n)
    idx = np.asarray(fm.transient, dtype=int)
    if idx.size:
        seeds = [t for t in fm.targets if t != ext.o_index]
        out[idx] = fm.f @ p[np.ix_(idx, seeds)].sum(axis=1)
    return out


def spread(ext: ExtendedGraph, seeds: Iterable[int]) -> float:
    """|S| + sum over non-seeds of the probability of adopting."""
    return float(adoption_probabilities(ext, seeds).sum())


def most_influential(ext: ExtendedGraph) -> int:
    """argmax_t of sum_s Pr[walk from s hits t before o]."""
    fm = fundamental_matrix(ext.transition_matrix(), [ext.o_index])
    f = fm.f
    return _argmax(f.sum(axis=0) / np.diag(f))


def c2greedy(ext: ExtendedGraph, k: int) -> SeedSelection:
    """Greedy seed selection; each pick joins the absorbing set alongside o.

    With F the fundamental matrix for S u {o} and a the current adoption
    probabilities, adding t raises a_s by (1 - a_t) F[s, t] / F[t, t], so
    every candidate's gain comes from one pass over F. The pick is then
    removed from F by a Schur-complement update.
    """
    n = ext.base.n
    if not 1 <= k <= n:
        raise ValidationError(f"k must be in [1, {n}], got {k}", module="influence")
    fm = fundamental_matrix(ext.transition_matrix(), [ext.o_index])
    a = np.zeros(n)  # adoption probabilities, indexed by original node
    seeds, gains = [], []
    for _ in range(k):
        idx = np.asarray(fm.transient, dtype=int)
        f = fm.f
        d = np.diag(f)
        gain = (1.0 - a[idx]) * f.sum(axis=0) / d
        j = _argmax(gain)
        t = int(idx[j])
        a[idx] += (1.0 - a[t]) * f[:, j] / d[j]
        a[t] = 1.0
        seeds.append(t)
        gains.append(float(gain[j]))
        if len(seeds) < n:
            fm = incremental_fundamental(fm, [t])
    return SeedSelection(tuple(seeds), tuple(gains), float(a.sum()))


def spread_curve(ext: ExtendedGraph, seeds: Iterable[int]) -> list[float]:
    """spread of each prefix of an ordered seed list."""
    seeds = list(seeds)
    return [spread(ext, seeds[: i + 1]) for i in range(len(seeds))]


# -- baselines ----------------------------------------------------------------

def in_degree(g: Graph) -> np.ndarray:
    return g.adjacency.sum(axis=0)


def in_closeness(g: Graph) -> np.ndarray:
    """Closeness on incoming hop distances, scaled by the reachable fraction.

    For node v with r nodes able to reach it at total distance D:
    (r / (n - 1)) * (r / D), and 0 if nobody reaches v.
    """
    n = g.n
    dist = shortest_path((g.adjacency > 0).astype(float), directed=g.directed, unweighted=True)
    out = np.zeros(n)
    if n < 2:
        return out
    for v in range(n):
        col = dist[:, v]
        mask = np.isfinite(col)
        mask[v] = False
        r = mask.sum()
        if r:
            out[v] = (r / (n - 1)) * (r / col[mask].sum())
    return out


def pagerank(g: Graph, damping: float = PAGERANK_DAMPING, tol: float = PAGERANK_TOL,
             max_iter: int = 10_000) -> np.ndarray:
    """Power iteration on the weighted graph; dangling mass spreads uniformly."""
    n = g.n
    a = g.adjacency
    out_w = a.sum(axis=1)
    dangling = out_w == 0
    p = np.divide(a, out_w[:, None], out=np.zeros_like(a), where=~dangling[:, None])
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = damping * (x @ p + x[dangling].sum() / n) + (1 - damping) / n
        if np.abs(nxt - x).sum() < n * tol:
            return nxt
        x = nxt
    return x


def baseline_rankers(g: Graph, k: int, method: str, rng_seed: int | None = 0) -> list[int]:
    """Top-k nodes by in-degree, in-closeness, PageRank, or uniformly at random."""
    if method not in BASELINES:
        raise ValidationError(f"unknown method {method!r}; choose from {BASELINES}", module="influence")
    if not 1 <= k <= g.n:
        raise ValidationError(f"k must be in [1, {g.n}], got {k}", module="influence")
    if method == "random":
        rng = np.random.default_rng(rng_seed)
        return [int(i) for i in rng.choice(g.n, size=k, replace=False)]
    score = {"degree": in_degree, "closeness": in_closeness, "pagerank": pagerank}[method](g)
    return _top_k(score, k)


def select_seeds(ext: ExtendedGraph, k: int, method: str = "c2greedy",
                 rng_seed: int | None = 0) -> SeedSelection:
    """Any method as a SeedSelection, gains taken from the prefix spreads."""
    if method == "c2greedy":
        return c2greedy(ext, k)
    seeds = baseline_rankers(ext.base, k, method, rng_seed)
    curve = spread_curve(ext, seeds)
    gains = np.diff([0.0] + curve)
    return SeedSelection(tuple(seeds), tuple(float(x) for x in gains), curve[-1])
