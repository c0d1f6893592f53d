"""Reachability oracle over G^o with node-failure queries.

F^o = (I - P_{\\o})^-1 is positive exactly where the target is reachable.
After failing a node set F, the fundamental matrix for targets F u {o} is
the Schur complement f - f[:, F] f[F, F]^-1 f[F, :], so each query costs a
length-|F| dot product once the failure set has been factored.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import linalg
from .errors import FailedEndpointError, ValidationError
from .graph import ExtendedGraph

ZERO_RTOL = 1e-9


@dataclass(frozen=True)
class _FailureFactor:
    failed: frozenset
    cols: list        # per node: tuple of f[s, F]
    rows: list        # per node: tuple of (f[F, F]^-1 f[F, :])[:, t]


@dataclass(frozen=True)
class GapReport:
    """Largest value read as 0 and smallest read as 1, for one failure set."""

    failed: tuple[int, ...]
    max_unreachable: float
    min_reachable: float
    threshold: float

    @property
    def ratio(self) -> float:
        if self.max_unreachable <= 0:
            return float("inf")
        return self.min_reachable / self.max_unreachable


@dataclass(frozen=True, eq=False)
class ReachabilityOracle:
    f_o: np.ndarray
    threshold: float
    nodes: tuple[str, ...]
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def n(self) -> int:
        return self.f_o.shape[0]

    def _check(self, *nodes: int):
        for v in nodes:
            if not 0 <= v < self.n:
                raise ValidationError(f"node index {v} out of range", module="reachability")

    def query(self, s: int, t: int) -> bool:
        self._check(s, t)
        return s == t or bool(self.f_o[s, t] > self.threshold)

    def factor(self, failed: Iterable[int]) -> _FailureFactor | None:
        """Cached per-failure-set data; computed at most once per set."""
        key = frozenset(int(v) for v in failed)
        if not key:
            return None
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        with self._lock:
            hit = self._cache.get(key)
            if hit is None:
                idx = sorted(key)
                self._check(*idx)
                f = self.f_o
                g = linalg.solve(f[np.ix_(idx, idx)], f[idx, :])
                hit = _FailureFactor(key, [tuple(r) for r in f[:, idx].tolist()],
                                     [tuple(c) for c in g.T.tolist()])
                self._cache[key] = hit
        return hit

    def schur_value(self, s: int, t: int, failed: Iterable[int] = ()) -> float:
        """f^{F u o}[s, t]: expected visits to t from s avoiding F and o."""
        fac = self.factor(failed)
        if fac is None:
            return float(self.f_o[s, t])
        if s in fac.failed or t in fac.failed:
            raise FailedEndpointError(f"endpoint {s if s in fac.failed else t} is in the failure set")
        return float(self.f_o[s, t]) - sum(x * y for x, y in zip(fac.cols[s], fac.rows[t]))

    def query_with_failures(self, s: int, t: int, failed: Iterable[int] = ()) -> bool:
        if s == t:
            fac = self.factor(failed)
            if fac is not None and s in fac.failed:
                raise FailedEndpointError(f"endpoint {s} is in the failure set")
            return True
        return self.schur_value(s, t, failed) > self.threshold

    def value_matrix(self, failed: Iterable[int] = ()) -> np.ndarray:
        """All Schur-corrected values at once; failed rows/cols are zero."""
        idx = sorted(set(int(v) for v in failed))
        f = self.f_o
        if not idx:
            return f.copy()
        self._check(*idx)
        out = f - f[:, idx] @ linalg.solve(f[np.ix_(idx, idx)], f[idx, :])
        out[idx, :] = 0.0
        out[:, idx] = 0.0
        return out

    def reachable_matrix(self, failed: Iterable[int] = ()) -> np.ndarray:
        failed = sorted(set(int(v) for v in failed))
        r = self.value_matrix(failed) > self.threshold
        alive = np.setdiff1d(np.arange(self.n), failed)
        r[alive, alive] = True
        return r

    def gap(self, failed: Iterable[int] = ()) -> GapReport:
        failed = tuple(sorted(set(int(v) for v in failed)))
        v = np.abs(self.value_matrix(failed))
        mask = np.ones_like(v, dtype=bool)
        mask[list(failed), :] = False
        mask[:, list(failed)] = False
        v = v[mask]
        above = v[v > self.threshold]
        below = v[v <= self.threshold]
        return GapReport(failed, float(below.max(initial=0.0)),
                         float(above.min(initial=np.inf)), self.threshold)

    def to_csv(self) -> str:
        lines = ["," + ",".join(self.nodes)]
        for name, row in zip(self.nodes, self.f_o):
            lines.append(name + "," + ",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"


def build_oracle(ext: ExtendedGraph, rtol: float = ZERO_RTOL) -> ReachabilityOracle:
    """One inversion of I - P restricted to the original nodes."""
    sub = ext.substochastic()
    f = linalg.inverse(np.eye(sub.shape[0]) - sub)
    f[f < 0] = 0.0  # an inverse M-matrix is entrywise nonnegative; clip round-off
    return ReachabilityOracle(f, rtol * float(f.max(initial=0.0)), ext.base.nodes)
