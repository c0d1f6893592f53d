"""Random-walk closeness and betweenness, Load(m), and articulation points."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fundamental import FundamentalTensor, NormalizedTensor
from .graph import Graph, TransitionMatrix, reachability_matrix

ARTICULATION_EPS = 1e-9


@dataclass(frozen=True, eq=False)
class CentralityReport:
    nodes: tuple[str, ...]
    closeness_raw: np.ndarray
    closeness: np.ndarray
    betweenness_rw: np.ndarray
    betweenness_newman: np.ndarray
    load: np.ndarray

    def ordering(self, measure: str) -> list[str]:
        """Node ids by decreasing value (ties keep index order)."""
        vals = getattr(self, measure)
        return [self.nodes[i] for i in np.argsort(-vals, kind="stable")]


@dataclass(frozen=True)
class ArticulationRecord:
    node: int
    pairs: tuple[tuple[int, int], ...]
    trivial: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.pairs)


def closeness(f: FundamentalTensor) -> dict[str, np.ndarray]:
    """Total hitting time into each t, and the reciprocal form n / that total."""
    raw = f.marginals["target"]
    with np.errstate(divide="ignore"):
        recip = np.where(raw > 0, f.n / raw, np.inf)
    return {"raw": raw, "reciprocal": recip}


def betweenness_rw(f: FundamentalTensor) -> np.ndarray:
    """sum_{s,t} F[s, m, t]; proportional to the stationary distribution."""
    return f.marginals["medial"]


def betweenness_newman(f: FundamentalTensor, p: TransitionMatrix | None = None) -> np.ndarray:
    """Net random-walk current through m summed over all (s, t):

        sum_{s,t} sum_k 1/2 |F[s,m,t] p_mk - F[s,k,t] p_km|

    Pairs with m == t are included; their F[s,m,t] is zero but the incoming
    current into t is not, which is what makes the directed and undirected
    readings agree with the unnormalized betweenness on one-way graphs.
    """
    p = f.p if p is None else p
    P = p.p
    n = f.n
    # only k adjacent to m (either direction) contributes
    ms, ks = np.nonzero((P > 0) | (P.T > 0))
    p_mk, p_km = P[ms, ks], P[ks, ms]
    out = np.zeros(n)
    for _, s in f.slices():
        flow = np.abs(s[:, ms] * p_mk - s[:, ks] * p_km).sum(axis=0)
        out += 0.5 * np.bincount(ms, weights=flow, minlength=n)
    return out


def load(fhat: NormalizedTensor) -> np.ndarray:
    """Load(m) = sum_{s,t} Fhat[s, m, t] / (n - 1)^2, in [0, 1]."""
    n = fhat.n
    total = np.zeros(n)
    for _, s in fhat.slices():
        total += s.sum(axis=0)
    return total / (n - 1) ** 2


def load_skew(loads: np.ndarray) -> float:
    """Peak-to-mean load ratio (1 for perfectly balanced networks)."""
    loads = np.asarray(loads, dtype=float)
    return float(loads.max() / loads.mean())


def articulation_points(fhat: NormalizedTensor, eps: float = ARTICULATION_EPS,
                        graph: Graph | TransitionMatrix | None = None) -> list[ArticulationRecord]:
    """Triples with Fhat[s, m, t] >= 1 - eps, grouped by m.

    Entries with m == s hold by convention (a source lies on its own paths)
    and are listed under ``trivial``. When ``graph`` is given, every
    nontrivial candidate is confirmed by deleting m and searching the graph;
    candidates that survive that check are dropped.
    """
    n = fhat.n
    cand: dict[int, list[tuple[int, int]]] = {m: [] for m in range(n)}
    trivial: dict[int, list[tuple[int, int]]] = {m: [] for m in range(n)}
    for t, sl in fhat.slices():
        ss, ms = np.nonzero(sl >= 1.0 - eps)
        for s, m in zip(ss.tolist(), ms.tolist()):
            (trivial if s == m else cand)[m].append((s, t))
    records = []
    for m in range(n):
        pairs = cand[m]
        if pairs and graph is not None:
            reach = reachability_matrix(graph, [m])
            pairs = [(s, t) for s, t in pairs if not reach[s, t]]
        if pairs or trivial[m]:
            records.append(ArticulationRecord(m, tuple(sorted(pairs)), tuple(sorted(trivial[m]))))
    return records


def articulation_triples(records: list[ArticulationRecord]) -> set[tuple[int, int, int]]:
    """Flatten nontrivial records to {(s, m, t)}."""
    return {(s, r.node, t) for r in records for s, t in r.pairs}


def centrality_report(f: FundamentalTensor, fhat: NormalizedTensor) -> CentralityReport:
    c = closeness(f)
    return CentralityReport(f.p.nodes, c["raw"], c["reciprocal"], betweenness_rw(f),
                            betweenness_newman(f), load(fhat))
