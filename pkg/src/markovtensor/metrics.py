"""Hitting time, hitting cost, commute time/cost and the Kirchhoff index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, ValidationError
from .fundamental import FundamentalMatrix, FundamentalTensor
from .graph import TransitionMatrix

KIRCHHOFF_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class HittingTimes:
    targets: tuple[int, ...]
    transient: tuple[int, ...]
    h: np.ndarray


@dataclass(frozen=True, eq=False)
class HittingCosts:
    targets: tuple[int, ...]
    transient: tuple[int, ...]
    lh: np.ndarray
    r: np.ndarray


@dataclass(frozen=True, eq=False)
class CommuteMatrix:
    c: np.ndarray
    cc: np.ndarray | None = None


def hitting_times(f: FundamentalMatrix) -> HittingTimes:
    """Expected steps to the target set: h = F 1."""
    return HittingTimes(f.targets, f.transient, f.f.sum(axis=1))


def expected_outgoing_cost(p: TransitionMatrix, w=None) -> np.ndarray:
    """r_s = sum_m p_sm w_sm. Without a cost matrix every edge costs 1."""
    if w is None:
        return np.ones(p.n)
    w = np.asarray(w, dtype=float)
    if w.shape != p.p.shape:
        raise ValidationError(f"cost matrix shape {w.shape} != {p.p.shape}", module="metrics")
    missing = (p.p > 0) & ~np.isfinite(w)
    if missing.any():
        raise ValidationError("cost undefined on an existing edge", module="metrics")
    return np.where(p.p > 0, p.p * w, 0.0).sum(axis=1)


def hitting_costs(f: FundamentalMatrix, w=None) -> HittingCosts:
    """Expected accumulated edge cost to the target set: lh = F r."""
    r = expected_outgoing_cost(f.p, w)
    idx = np.asarray(f.transient, dtype=int)
    return HittingCosts(f.targets, f.transient, f.f @ r[idx], r)


def hitting_matrix(tensor: FundamentalTensor) -> np.ndarray:
    """H[s, t] = sum_m F[s, m, t]."""
    return tensor.marginals["hitting"]


def hitting_cost_matrix(tensor: FundamentalTensor, w=None) -> np.ndarray:
    """U[s, t] = sum_m F[s, m, t] r_m."""
    r = expected_outgoing_cost(tensor.p, w)
    if tensor.materialized:
        return np.einsum("smt,m->st", tensor.values, r)
    out = np.empty((tensor.n, tensor.n))
    for t, s in tensor.slices():
        out[:, t] = s @ r
    return out


def commute(h: np.ndarray, costs: np.ndarray | None = None) -> CommuteMatrix:
    """C = H + H'; with pairwise hitting costs also CC = U + U'."""
    h = np.asarray(h, dtype=float)
    cc = None if costs is None else np.asarray(costs) + np.asarray(costs).T
    return CommuteMatrix(h + h.T, cc)


def commute_costs(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return u + u.T


def kirchhoff_routes(tensor: FundamentalTensor, edge_count: int) -> dict[str, float]:
    """The three Kirchhoff-index formulas, kept separate for cross-checking.

    ``commute``: sum_{s,t} C_st / (2|E|); ``laplacian``: n/|E| * trace(L+);
    ``tensor``: sum of all tensor entries / |E|.
    """
    if edge_count <= 0:
        raise ValidationError("edge count must be positive", module="metrics")
    h = hitting_matrix(tensor)
    c = h + h.T
    return {
        "commute": float(c.sum() / (2 * edge_count)),
        "laplacian": float(tensor.n * np.trace(tensor.laplacian_pinv) / edge_count),
        "tensor": float(tensor.marginals["medial"].sum() / edge_count),
    }


def kirchhoff_index(tensor: FundamentalTensor, edge_count: int) -> float:
    """Kirchhoff index with |E| counted as directed edge slots.

    Raises ConsistencyError when the three routes disagree by more than 1e-6
    relative, which points at an edge-count convention mismatch.
    """
    routes = kirchhoff_routes(tensor, edge_count)
    vals = np.array(list(routes.values()))
    spread = vals.max() - vals.min()
    if spread > KIRCHHOFF_RTOL * abs(vals).max():
        raise ConsistencyError(f"Kirchhoff routes disagree: {routes}", module="metrics")
    return routes["tensor"]


# -- closed forms on L+ = (diag(pi)(I - P))^+ ---------------------------------

def laplacian_hitting(lplus, pi) -> np.ndarray:
    """H[i, j] = sum_m (L+_im - L+_jm) pi_m + L+_jj - L+_ij."""
    lplus = np.asarray(lplus, dtype=float)
    v = lplus @ np.asarray(pi, dtype=float)
    d = np.diag(lplus)
    return v[:, None] - v[None, :] + d[None, :] - lplus


def laplacian_commute(lplus) -> np.ndarray:
    """C[i, j] = L+_ii + L+_jj - L+_ij - L+_ji."""
    lplus = np.asarray(lplus, dtype=float)
    d = np.diag(lplus)
    return d[:, None] + d[None, :] - lplus - lplus.T


def laplacian_hitting_costs(lplus, pi, r) -> np.ndarray:
    """U[i, j] = sum_m (L+_im - L+_jm + L+_jj - L+_ij) g_m with g_m = r_m pi_m."""
    lplus = np.asarray(lplus, dtype=float)
    g = np.asarray(r, dtype=float) * np.asarray(pi, dtype=float)
    v = lplus @ g
    d = np.diag(lplus)
    return v[:, None] - v[None, :] + (d[None, :] - lplus) * g.sum()


def laplacian_commute_costs(lplus, pi, r) -> np.ndarray:
    """CC = C * sum_m g_m: commute cost is a scalar multiple of commute time."""
    g = np.asarray(r, dtype=float) * np.asarray(pi, dtype=float)
    return laplacian_commute(lplus) * g.sum()
