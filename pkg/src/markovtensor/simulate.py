"""Monte-Carlo random walks for checking matrix forms against their definitions.

Walks run in fixed-size chunks, each with its own Philox stream spawned from
the master seed, so results do not depend on the number of threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import NumericalError, UncoveredRecurrentClassError, ValidationError
from .graph import TransitionMatrix, recurrent_classes

CHUNK = 8192
MAX_TRUNCATION = 1e-3
KINDS = ("visits", "hitting_time", "hitting_cost", "absorption")


class TruncationError(NumericalError):
    """Too many walks hit the step cap."""


@dataclass(frozen=True)
class SimulationEstimate:
    kind: str
    node: int | None
    mean: float
    standard_error: float
    num_walks: int


@dataclass(frozen=True, eq=False)
class SimulationResult:
    start: int
    targets: tuple[int, ...]
    num_walks: int
    truncated: int
    visits: np.ndarray          # (2, n): mean, SE; zero at targets
    hitting_time: tuple[float, float]
    hitting_cost: tuple[float, float] | None
    absorption: np.ndarray      # (2, |A|): frequency, SE, in ``targets`` order

    def estimates(self) -> list[SimulationEstimate]:
        n, out = self.visits.shape[1], []
        tset = set(self.targets)
        for m in range(n):
            if m not in tset:
                out.append(SimulationEstimate("visits", m, *map(float, self.visits[:, m]), self.num_walks))
        out.append(SimulationEstimate("hitting_time", None, *self.hitting_time, self.num_walks))
        if self.hitting_cost is not None:
            out.append(SimulationEstimate("hitting_cost", None, *self.hitting_cost, self.num_walks))
        for j, t in enumerate(self.targets):
            out.append(SimulationEstimate("absorption", t, *map(float, self.absorption[:, j]), self.num_walks))
        return out


def alias_tables(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vose alias tables, one row per state: keep column k with prob[r, k], else alias[r, k]."""
    n = p.shape[1]
    prob = np.ones(p.shape)
    alias = np.tile(np.arange(n), (p.shape[0], 1))
    for r, row in enumerate(p):
        scaled = row * n
        small = [k for k in range(n) if scaled[k] < 1.0]
        large = [k for k in range(n) if scaled[k] >= 1.0]
        while small and large:
            s, l = small.pop(), large.pop()
            prob[r, s] = scaled[s]
            alias[r, s] = l
            scaled[l] -= 1.0 - scaled[s]
            (small if scaled[l] < 1.0 else large).append(l)
    return prob, alias


def _moments(total: np.ndarray, sq: np.ndarray, n: int) -> np.ndarray:
    mean = total / n
    var = np.maximum(sq / n - mean**2, 0.0) * n / max(n - 1, 1)
    return np.stack([mean, np.sqrt(var / n)])


def _run_chunk(args):
    (size, seed, start, absorbing, prob, alias, cost, max_steps) = args
    n = prob.shape[0]
    rng = np.random.Generator(np.random.Philox(seed))
    cur = np.full(size, start)
    ids = np.arange(size)
    visits = np.zeros(size * n, dtype=np.int64)
    steps = np.zeros(size, dtype=np.int64)
    acc = np.zeros(size) if cost is not None else None
    final = np.full(size, start)
    alive = ~absorbing[cur]
    cur, ids = cur[alive], ids[alive]
    step = 0
    while ids.size and step < max_steps:
        visits[ids * n + cur] += 1  # ids are distinct, so no lost updates
        x = rng.random(ids.size) * n
        k = np.minimum(x.astype(np.int64), n - 1)
        nxt = np.where(x - k < prob[cur, k], k, alias[cur, k])
        if acc is not None:
            acc[ids] += cost[cur, nxt]
        steps[ids] += 1
        step += 1
        cur = nxt
        keep = ~absorbing[cur]
        final[ids[~keep]] = cur[~keep]
        cur, ids = cur[keep], ids[keep]
    done = np.ones(size, dtype=bool)
    done[ids] = False
    return visits.reshape(size, n)[done], steps[done], None if acc is None else acc[done], final[done]


def simulate_walks(p: TransitionMatrix, start: int, targets: Iterable[int], num_walks: int,
                   rng_seed: int = 0, max_steps: int = 10**6, cost=None,
                   threads: int = 1) -> SimulationResult:
    """Simulate walks from ``start`` until they hit ``targets``.

    Visits count X_0 too, so their means estimate row ``start`` of F^A;
    steps estimate H, accumulated ``cost[i, j]`` estimates the hitting cost,
    and the first target reached estimates the row of Q.
    """
    n = p.n
    targets = tuple(dict.fromkeys(int(t) for t in targets))
    if not targets:
        raise ValidationError("target set must be nonempty", module="simulate")
    if not all(0 <= t < n for t in targets) or not 0 <= start < n:
        raise ValidationError("node index out of range", module="simulate")
    if num_walks < 1:
        raise ValidationError("num_walks must be positive", module="simulate")
    tset = set(targets)
    uncovered = [c for c in recurrent_classes(p) if not c & tset]
    if uncovered:
        raise UncoveredRecurrentClassError("targets miss a recurrent class; walks may never stop",
                                           sorted(uncovered[0]))
    if cost is not None:
        cost = np.asarray(cost, dtype=float)
        if cost.shape != (n, n):
            raise ValidationError(f"cost shape {cost.shape} != {(n, n)}", module="simulate")
        cost = np.where(p.p > 0, cost, 0.0)
    absorbing = np.zeros(n, dtype=bool)
    absorbing[list(targets)] = True
    prob, alias = alias_tables(p.p)

    sizes = [CHUNK] * (num_walks // CHUNK) + ([num_walks % CHUNK] if num_walks % CHUNK else [])
    seeds = np.random.SeedSequence(rng_seed).spawn(len(sizes))
    jobs = [(sz, sd, start, absorbing, prob, alias, cost, max_steps) for sz, sd in zip(sizes, seeds)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]

    v_sum, v_sq = np.zeros(n), np.zeros(n)
    s_sum = s_sq = c_sum = c_sq = 0.0
    a_cnt = np.zeros(len(targets))
    done = 0
    pos = {t: j for j, t in enumerate(targets)}
    for visits, steps, acc, final in parts:
        done += len(steps)
        v_sum += visits.sum(axis=0)
        v_sq += (visits.astype(float) ** 2).sum(axis=0)
        s_sum += float(steps.sum())
        s_sq += float((steps.astype(float) ** 2).sum())
        if acc is not None:
            c_sum += float(acc.sum())
            c_sq += float((acc**2).sum())
        for t, c in zip(*np.unique(final, return_counts=True)):
            a_cnt[pos[int(t)]] += c
    truncated = num_walks - done
    if truncated > MAX_TRUNCATION * num_walks:
        raise TruncationError(f"{truncated} of {num_walks} walks exceeded {max_steps} steps",
                              module="simulate", hint="raise max_steps or check the target set")
    if done == 0:
        raise TruncationError("no walk finished", module="simulate")
    freq = a_cnt / done
    return SimulationResult(
        start, targets, done, truncated,
        _moments(v_sum, v_sq, done),
        tuple(float(x) for x in _moments(np.array(s_sum), np.array(s_sq), done)),
        None if cost is None else tuple(float(x) for x in _moments(np.array(c_sum), np.array(c_sq), done)),
        np.stack([freq, np.sqrt(freq * (1 - freq) / max(done - 1, 1))]),
    )
