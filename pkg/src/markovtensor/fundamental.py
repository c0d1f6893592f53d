"""Fundamental matrices for target sets and the fundamental tensor F[s, m, t].

F[s, m, t] is the expected number of visits to m by a walk started at s
before it first hits t (zero when s == t or m == t). The whole tensor comes
from a single pseudo-inverse of a Laplacian:

    route "lp":  F[s,m,t] = Lp+[s,m] - Lp+[t,m] + (pi_m/pi_t)(Lp+[t,t] - Lp+[s,t]),  Lp = I - P
    route "l":   F[s,m,t] = (L+[s,m] - L+[t,m] + L+[t,t] - L+[s,t]) pi_m,         L = diag(pi)(I - P)
    route "z":   as "lp", with Lp+ obtained from Z = (I - P + 1 pi')^-1 by a rank-one correction
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from . import linalg
from .errors import NotStronglyConnectedError, UncoveredRecurrentClassError, ValidationError
from .graph import TransitionMatrix, recurrent_classes, stationary_distribution, strongly_connected

MATERIALIZE_LIMIT = 300
ROUTES = ("lp", "l", "z")


def _targets(targets: Iterable[int], n: int) -> tuple[int, ...]:
    out = tuple(dict.fromkeys(int(t) for t in targets))
    for t in out:
        if not 0 <= t < n:
            raise ValidationError(f"target index {t} out of range for {n} nodes", module="fundamental")
    return out


@dataclass(frozen=True, eq=False)
class FundamentalMatrix:
    """F^A = (I - P_TT)^-1 for target set A; rows/cols follow ``transient``."""

    targets: tuple[int, ...]
    transient: tuple[int, ...]
    f: np.ndarray
    p: TransitionMatrix

    @cached_property
    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.transient)}

    def entry(self, s: int, m: int) -> float:
        pos = self.position
        if s not in pos or m not in pos:
            return 0.0
        return float(self.f[pos[s], pos[m]])

    def full(self) -> np.ndarray:
        """n x n matrix with zero rows/cols at the targets."""
        out = np.zeros((self.p.n, self.p.n))
        idx = np.asarray(self.transient, dtype=int)
        out[np.ix_(idx, idx)] = self.f
        return out

    def hit_first_probabilities(self, j: int) -> np.ndarray:
        """Probability of reaching transient node j before any current target.

        Equals column j of Q for target set ``targets + {j}``, i.e. F[:, j]/F[j, j]
        over the current transient nodes (1 at j itself).
        """
        k = self.position[j]
        return self.f[:, k] / self.f[k, k]


@dataclass(frozen=True, eq=False)
class AbsorptionMatrix:
    targets: tuple[int, ...]
    transient: tuple[int, ...]
    q: np.ndarray


def fundamental_matrix(p: TransitionMatrix, targets: Iterable[int]) -> FundamentalMatrix:
    n = p.n
    targets = _targets(targets, n)
    if not targets:
        raise ValidationError("target set must be nonempty", module="fundamental")
    tset = set(targets)
    uncovered = [c for c in recurrent_classes(p) if not c & tset]
    if uncovered:
        nodes = sorted(uncovered[0])
        names = [p.nodes[i] for i in nodes]
        raise UncoveredRecurrentClassError(
            f"target set misses recurrent class {names}; F^A does not exist", nodes)
    transient = tuple(i for i in range(n) if i not in tset)
    idx = np.asarray(transient, dtype=int)
    m = np.eye(len(idx)) - p.p[np.ix_(idx, idx)]
    f = linalg.inverse(m) if len(idx) else np.zeros((0, 0))
    return FundamentalMatrix(targets, transient, f, p)


def absorption_probabilities(p: TransitionMatrix, targets: Iterable[int]) -> AbsorptionMatrix:
    """Q^A = F^A P_TA: row s gives which target absorbs the walk from s first."""
    fm = fundamental_matrix(p, targets)
    t_idx = np.asarray(fm.transient, dtype=int)
    a_idx = np.asarray(fm.targets, dtype=int)
    q = fm.f @ p.p[np.ix_(t_idx, a_idx)] if len(t_idx) else np.zeros((0, len(a_idx)))
    return AbsorptionMatrix(fm.targets, fm.transient, q)


def incremental_fundamental(f: FundamentalMatrix, add: Iterable[int]) -> FundamentalMatrix:
    """F^{S1 u S2} from F^{S1} by a Schur complement on the S2 block."""
    add = _targets(add, f.p.n)
    overlap = set(add) & set(f.targets)
    if overlap:
        raise ValidationError(f"nodes {sorted(overlap)} are already targets", module="fundamental")
    if not add:
        return f
    pos = f.position
    new_f = linalg.submatrix_inverse(f.f, [pos[a] for a in add])
    added = set(add)
    transient = tuple(v for v in f.transient if v not in added)
    return FundamentalMatrix(f.targets + add, transient, new_f, f.p)


def ergodic_fundamental(p: TransitionMatrix, pi=None) -> np.ndarray:
    """Z = (I - P + 1 pi')^-1."""
    pi = _pi(p, pi)
    n = p.n
    return linalg.inverse(np.eye(n) - p.p + np.outer(np.ones(n), pi))


def _pi(p: TransitionMatrix, pi) -> np.ndarray:
    if pi is not None:
        return np.asarray(pi, dtype=float)
    if p.stationary is not None:
        return p.stationary
    return stationary_distribution(p)


@dataclass(frozen=True, eq=False)
class FundamentalTensor:
    """Fundamental tensor held as one n x n pseudo-inverse plus lazy or dense n^3 values.

    ``values`` is indexed ``[s, m, t]``. Slices are produced on demand for
    large n; ``values`` materializes (and caches) the whole array.
    """

    p: TransitionMatrix
    stationary: np.ndarray
    kernel: np.ndarray
    route: str = "lp"
    _store: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.p.n

    def slice(self, t: int) -> np.ndarray:
        """The (s, m) matrix for target t, zero in row and column t."""
        if "values" in self._store:
            return self._store["values"][:, :, t]
        k, pi = self.kernel, self.stationary
        if self.route == "l":
            s = (k - k[t][None, :] + (k[t, t] - k[:, t])[:, None]) * pi[None, :]
        else:
            s = k - k[t][None, :] + np.outer(k[t, t] - k[:, t], pi / pi[t])
        s[t, :] = 0.0
        s[:, t] = 0.0
        return s

    def slices(self) -> Iterator[tuple[int, np.ndarray]]:
        for t in range(self.n):
            yield t, self.slice(t)

    @property
    def materialized(self) -> bool:
        return "values" in self._store

    @property
    def values(self) -> np.ndarray:
        if "values" not in self._store:
            n = self.n
            buf = np.empty((n, n, n))
            for t in range(n):
                buf[t] = self.slice(t)
            self._store["values"] = np.moveaxis(buf, 0, 2)
        return self._store["values"]

    @cached_property
    def laplacian_pinv(self) -> np.ndarray:
        """L+ for the digraph Laplacian L = diag(pi)(I - P)."""
        if self.route == "l":
            return self.kernel
        return linalg.pinv(self.stationary[:, None] * (np.eye(self.n) - self.p.p))

    @cached_property
    def marginals(self) -> dict[str, np.ndarray]:
        """Sums over tensor dimensions, in one pass.

        ``hitting[s, t]`` = sum over m; ``medial[m]`` = sum over s, t;
        ``target[t]`` = sum over s, m.
        """
        if self.materialized:
            v = self.values
            return {"hitting": v.sum(axis=1), "medial": v.sum(axis=(0, 2)), "target": v.sum(axis=(0, 1))}
        n = self.n
        hitting = np.empty((n, n))
        medial = np.zeros(n)
        for t, s in self.slices():
            hitting[:, t] = s.sum(axis=1)
            medial += s.sum(axis=0)
        return {"hitting": hitting, "medial": medial, "target": hitting.sum(axis=0)}


def _check_ergodic(p: TransitionMatrix):
    if not strongly_connected(p):
        raise NotStronglyConnectedError(
            "the fundamental tensor needs a strongly connected graph")


def fundamental_tensor(p: TransitionMatrix, pi=None, *, route: str = "lp",
                       materialize: bool | None = None) -> FundamentalTensor:
    """All n^3 entries from one pseudo-inverse.

    ``route`` picks "lp" (random-walk Laplacian, default), "l" (digraph
    Laplacian) or "z" (regular inverse, see ``tensor_via_Z``). Values are
    materialized for n <= 300 unless ``materialize`` says otherwise.
    """
    if route not in ROUTES:
        raise ValidationError(f"unknown route {route!r}; choose from {ROUTES}", module="fundamental")
    if route == "z":
        return tensor_via_Z(p, pi, materialize=materialize)
    _check_ergodic(p)
    pi = _pi(p, pi)
    lap = np.eye(p.n) - p.p
    if route == "l":
        lap = pi[:, None] * lap
    return _finish(FundamentalTensor(p, pi, linalg.pinv(lap), route), materialize)


def tensor_via_Z(p: TransitionMatrix, pi=None, *, materialize: bool | None = None) -> FundamentalTensor:
    """Same tensor, with Lp+ from one regular inverse Z = (I - P + 1 pi')^-1."""
    _check_ergodic(p)
    pi = _pi(p, pi)
    z = ergodic_fundamental(p, pi)
    lp_pinv = linalg.pinv_from_regular_inverse(z, np.ones(p.n), pi)
    return _finish(FundamentalTensor(p, pi, lp_pinv, "z"), materialize)


def _finish(tensor: FundamentalTensor, materialize: bool | None) -> FundamentalTensor:
    if materialize is None:
        materialize = tensor.n <= MATERIALIZE_LIMIT
    if materialize:
        tensor.values
    return tensor


@dataclass(frozen=True, eq=False)
class NormalizedTensor:
    """F^[s, m, t] = F[s, m, t] / F[m, m, t], the probability of hitting m before t from s."""

    source: FundamentalTensor
    _store: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.source.n

    def slice(self, t: int) -> np.ndarray:
        if "values" in self._store:
            return self._store["values"][:, :, t]
        s = self.source.slice(t)
        d = np.diag(s).copy()
        d[t] = 1.0
        return s / d[None, :]

    def slices(self) -> Iterator[tuple[int, np.ndarray]]:
        for t in range(self.n):
            yield t, self.slice(t)

    @property
    def values(self) -> np.ndarray:
        if "values" not in self._store:
            f = self.source.values
            d = np.einsum("mmt->mt", f).copy()
            d[d == 0] = 1.0  # only where m == t, where F is zero anyway
            self._store["values"] = f / d[None, :, :]
        return self._store["values"]


def normalize_tensor(f: FundamentalTensor) -> NormalizedTensor:
    fhat = NormalizedTensor(f)
    if f.materialized:
        fhat.values
    return fhat
