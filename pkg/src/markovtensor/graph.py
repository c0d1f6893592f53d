"""Graph ingestion, transition matrices, stationary distributions and G^o.

Everything is dense. Node order is first-seen order in the input so that
all downstream outputs are deterministic.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import GraphFormatError, NotStronglyConnectedError, NumericalError, ValidationError

log = logging.getLogger(__name__)

EXOGENOUS = "<o>"
ROW_SUM_TOL = 1e-12
STATIONARY_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Weighted digraph with a string-id <-> dense-index mapping.

    ``adjacency[i, j] > 0`` iff edge i->j exists. Undirected graphs store both
    directions, so ``edge_count`` counts an undirected edge twice.
    """

    nodes: tuple[str, ...]
    adjacency: np.ndarray
    cost: np.ndarray | None = None
    directed: bool = True
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        adj = self.adjacency
        n = len(self.nodes)
        if adj.shape != (n, n):
            raise ValidationError(f"adjacency shape {adj.shape} does not match {n} nodes", module="graph")
        if len(set(self.nodes)) != n:
            raise ValidationError("duplicate node ids", module="graph")
        if not np.all(np.isfinite(adj)) or np.any(adj < 0):
            raise ValidationError("adjacency must be finite and nonnegative", module="graph")
        if self.cost is not None:
            if self.cost.shape != (n, n) or not np.all(np.isfinite(self.cost)) or np.any(self.cost < 0):
                raise ValidationError("cost must be a finite nonnegative n x n matrix", module="graph")
        if not self.directed:
            if not np.array_equal(adj, adj.T):
                raise ValidationError("undirected graph needs a symmetric adjacency", module="graph")
            if self.cost is not None and not np.array_equal(self.cost, self.cost.T):
                raise ValidationError("undirected graph needs a symmetric cost matrix", module="graph")
        object.__setattr__(self, "adjacency", _frozen(adj))
        if self.cost is not None:
            object.__setattr__(self, "cost", _frozen(self.cost))

    @classmethod
    def from_adjacency(cls, adjacency, nodes: Sequence[str] | None = None, *, directed: bool = True,
                       cost=None) -> "Graph":
        adjacency = np.asarray(adjacency, dtype=float)
        if nodes is None:
            nodes = [str(i) for i in range(adjacency.shape[0])]
        return cls(tuple(str(v) for v in nodes), adjacency,
                   None if cost is None else np.asarray(cost, dtype=float), directed)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.nodes)}

    def indices(self, ids: Iterable[str]) -> list[int]:
        index = self.index
        out = []
        for v in ids:
            if v not in index:
                raise ValidationError(f"unknown node id {v!r}", module="graph")
            out.append(index[v])
        return out

    @property
    def edge_count(self) -> int:
        """Number of directed edge slots (nonzero a_ij)."""
        return int(np.count_nonzero(self.adjacency))

    @property
    def out_degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def remove_nodes(self, removed: Iterable[int]) -> "Graph":
        """Physically delete nodes (and incident edges)."""
        removed = set(removed)
        keep = [i for i in range(self.n) if i not in removed]
        sub = np.ix_(keep, keep)
        cost = None if self.cost is None else self.cost[sub]
        return Graph(tuple(self.nodes[i] for i in keep), self.adjacency[sub], cost, self.directed)


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Row-stochastic P = D^-1 A with the degrees it was built from."""

    p: np.ndarray
    degrees: np.ndarray
    stationary: np.ndarray | None = None
    nodes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "p", _frozen(self.p))
        object.__setattr__(self, "degrees", _frozen(self.degrees))
        if self.stationary is not None:
            object.__setattr__(self, "stationary", _frozen(self.stationary))
        if not self.nodes:
            object.__setattr__(self, "nodes", tuple(str(i) for i in range(self.p.shape[0])))

    @property
    def n(self) -> int:
        return self.p.shape[0]

    def with_stationary(self) -> "TransitionMatrix":
        if self.stationary is not None:
            return self
        return replace(self, stationary=stationary_distribution(self))


@dataclass(frozen=True, eq=False)
class ExtendedGraph:
    """G^o: every node i gains an edge i->o of weight ``beta``; o is absorbing."""

    base: Graph
    beta: float = 1.0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def o_index(self) -> int:
        return self.base.n

    @property
    def n(self) -> int:
        return self.base.n + 1

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.base.nodes + (EXOGENOUS,)

    def transition_matrix(self) -> TransitionMatrix:
        if "p" not in self._cache:
            n = self.base.n
            a = np.zeros((n + 1, n + 1))
            a[:n, :n] = self.base.adjacency
            a[:n, n] = self.beta
            a[n, n] = 1.0
            d = a.sum(axis=1)
            self._cache["p"] = TransitionMatrix(a / d[:, None], d, nodes=self.nodes)
        return self._cache["p"]

    def substochastic(self) -> np.ndarray:
        """P restricted to the original nodes (P with o removed)."""
        return self.transition_matrix().p[:-1, :-1]


# -- ingestion ---------------------------------------------------------------

def _parse_float(tok: str, what: str, lineno: int) -> float:
    try:
        x = float(tok)
    except ValueError:
        raise GraphFormatError(f"{what} {tok!r} is not a number", lineno) from None
    if not math.isfinite(x):
        raise GraphFormatError(f"{what} {tok!r} is not finite", lineno)
    return x


def load_graph(source: str, directed: bool = True, weighted: bool = False) -> Graph:
    """Parse edge-list text: ``src dst [weight [cost]]`` per line, ``#`` comments.

    Unweighted mode uses unit weights (a weight column is still validated).
    Duplicate edges have their weights summed and a warning recorded; their
    costs are merged as the weight-averaged cost. Edges without a cost get
    cost 1.0 whenever any line carries a cost.
    """
    nodes: dict[str, int] = {}
    edges: dict[tuple[int, int], list[float]] = {}
    seen_line: dict[tuple[int, int], int] = {}
    warnings = []
    any_cost = False

    def node(name):
        if name not in nodes:
            nodes[name] = len(nodes)
        return nodes[name]

    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2 or len(parts) > 4:
            raise GraphFormatError(f"expected 'src dst [weight [cost]]', got {len(parts)} fields", lineno)
        w = _parse_float(parts[2], "weight", lineno) if len(parts) >= 3 else 1.0
        if w <= 0:
            raise ValidationError(f"line {lineno}: weight must be positive, got {w}", module="graph")
        c = None
        if len(parts) == 4:
            c = _parse_float(parts[3], "cost", lineno)
            if c < 0:
                raise ValidationError(f"line {lineno}: cost must be nonnegative, got {c}", module="graph")
            any_cost = True
        if not weighted:
            w = 1.0
        u, v = node(parts[0]), node(parts[1])
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in edges:
            msg = (f"duplicate edge {parts[0]} {parts[1]} on line {lineno} "
                   f"(first on line {seen_line[key]}): weights summed")
            warnings.append(msg)
            log.warning(msg)
            w0, c0 = edges[key]
            merged_cost = None
            if c0 is not None or c is not None:
                c0 = 1.0 if c0 is None else c0
                c1 = 1.0 if c is None else c
                merged_cost = (w0 * c0 + w * c1) / (w0 + w)
            edges[key] = [w0 + w, merged_cost]
        else:
            edges[key] = [w, c]
            seen_line[key] = lineno

    n = len(nodes)
    adj = np.zeros((n, n))
    cost = np.zeros((n, n)) if any_cost else None
    for (u, v), (w, c) in edges.items():
        adj[u, v] = w
        if not directed:
            adj[v, u] = w
        if cost is not None:
            cost[u, v] = 1.0 if c is None else c
            if not directed:
                cost[v, u] = cost[u, v]
    return Graph(tuple(nodes), adj, cost, directed, tuple(warnings))


def read_graph(path: str | Path, directed: bool = True, weighted: bool = False) -> Graph:
    return load_graph(Path(path).read_text(encoding="utf-8"), directed=directed, weighted=weighted)


def to_edgelist(g: Graph) -> str:
    """Serialize back to edge-list text (exact float round trip)."""
    lines = []
    n = g.n
    for i in range(n):
        for j in range(n):
            w = g.adjacency[i, j]
            if w == 0 or (not g.directed and j < i):
                continue
            fields = [g.nodes[i], g.nodes[j], repr(float(w))]
            if g.cost is not None:
                fields.append(repr(float(g.cost[i, j])))
            lines.append(" ".join(fields))
    return "\n".join(lines) + ("\n" if lines else "")


# -- chain construction ------------------------------------------------------

def transition_matrix(g: Graph) -> TransitionMatrix:
    d = g.out_degrees
    dangling = np.flatnonzero(d <= 0)
    if dangling.size:
        name = g.nodes[dangling[0]]
        raise ValidationError(f"node {name!r} has zero out-degree", module="graph",
                              hint="extend the graph with an exogenous node (extend_graph)")
    p = g.adjacency / d[:, None]
    dev = np.abs(p.sum(axis=1) - 1.0).max()
    assert dev <= ROW_SUM_TOL, dev
    return TransitionMatrix(p, d, nodes=g.nodes)


def _support(x) -> np.ndarray:
    if isinstance(x, Graph):
        return x.adjacency > 0
    if isinstance(x, TransitionMatrix):
        return x.p > 0
    return np.asarray(x) > 0


def _scc_labels(x) -> tuple[int, np.ndarray]:
    return connected_components(csr_matrix(_support(x)), directed=True, connection="strong")


def strongly_connected(x) -> bool:
    return _scc_labels(x)[0] == 1


def recurrent_classes(x) -> list[frozenset[int]]:
    """SCCs with no edge leaving them, ordered by smallest member."""
    support = _support(x)
    k, labels = _scc_labels(support)
    src, dst = np.nonzero(support)
    leaky = np.zeros(k, dtype=bool)
    leaky[labels[src][labels[src] != labels[dst]]] = True
    classes = [frozenset(np.flatnonzero(labels == c).tolist()) for c in range(k) if not leaky[c]]
    return sorted(classes, key=min)


def stationary_distribution(p: TransitionMatrix) -> np.ndarray:
    """Solve pi'(I - P) = 0 with sum(pi) = 1 appended as an extra equation."""
    if not strongly_connected(p):
        raise NotStronglyConnectedError("stationary distribution needs a strongly connected chain")
    n = p.n
    system = np.vstack([np.eye(n) - p.p.T, np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    residual = np.abs(pi @ p.p - pi).max()
    if residual > STATIONARY_TOL or abs(pi.sum() - 1) > STATIONARY_TOL:
        raise NumericalError(f"stationary residual {residual:.3e} exceeds {STATIONARY_TOL}", module="graph")
    return np.clip(pi, 0.0, None) / np.clip(pi, 0.0, None).sum()


def extend_graph(g: Graph, beta: float = 1.0) -> ExtendedGraph:
    if not beta > 0 or not math.isfinite(beta):
        raise ValidationError(f"exogenous weight beta must be positive, got {beta}", module="graph")
    return ExtendedGraph(g, float(beta))


def reachability_matrix(x, removed: Iterable[int] = ()) -> np.ndarray:
    """Boolean R[s, t]: t reachable from s once ``removed`` nodes are deleted.

    Removed nodes have all-False rows and columns; alive nodes reach themselves.
    """
    support = _support(x).copy()
    removed = list(removed)
    support[removed, :] = False
    support[:, removed] = False
    dist = shortest_path(csr_matrix(support), directed=True, unweighted=True)
    reach = np.isfinite(dist)
    reach[removed, :] = False
    reach[:, removed] = False
    return reach
