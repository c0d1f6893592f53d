"""Numerical audit of the identities and inequalities linking Markov metrics.

Every relation is evaluated on all applicable index tuples (O(n^4)), so the
suite is capped at small n. Index names follow the usual reading
F^{j}_{im} = F[i, m, j] (visits to m from i before hitting j) and
Q_i^{m, not j} = Fhat[i, m, j].
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ValidationError
from .fundamental import absorption_probabilities, fundamental_tensor, normalize_tensor
from .graph import TransitionMatrix
from .metrics import hitting_matrix

EQ_TOL = 1e-8
INEQ_SLACK = 1e-10
DEFAULT_MAX_N = 12


@dataclass(frozen=True)
class RelationResult:
    name: str
    kind: str  # "eq" or "ineq"
    max_violation: float
    tolerance: float
    checked: int

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance


def is_reversible(p: TransitionMatrix, pi: np.ndarray, tol: float = 1e-12) -> bool:
    flow = pi[:, None] * p.p
    return bool(np.abs(flow - flow.T).max() <= tol)


def _eq(name, lhs, rhs, mask=None):
    d = np.abs(np.asarray(lhs) - np.asarray(rhs))
    if mask is not None:
        d = d[np.broadcast_to(mask, d.shape)]
    return RelationResult(name, "eq", float(d.max(initial=0.0)), EQ_TOL, int(d.size))


def _geq(name, lhs, rhs, mask=None):
    d = np.asarray(lhs) - np.asarray(rhs)
    if mask is not None:
        d = d[np.broadcast_to(mask, d.shape)]
    return RelationResult(name, "ineq", float(max(0.0, -d.min(initial=0.0))), INEQ_SLACK, int(d.size))


def two_target_hitting(p: TransitionMatrix) -> np.ndarray:
    """H2[i, j, k]: expected steps from i to hit {j, k}, solved directly.

    Zero when i is a target; H2[i, j, j] is the single-target hitting time.
    """
    n = p.n
    out = np.zeros((n, n, n))
    eye = np.eye(n)
    for j in range(n):
        for k in range(j, n):
            keep = [i for i in range(n) if i != j and i != k]
            if not keep:
                continue
            m = eye[np.ix_(keep, keep)] - p.p[np.ix_(keep, keep)]
            h = np.linalg.solve(m, np.ones(len(keep)))
            out[keep, j, k] = h
            out[keep, k, j] = h
    return out


def relation_suite(p: TransitionMatrix, max_n: int = DEFAULT_MAX_N,
                   reversible: bool | None = None) -> dict[str, RelationResult]:
    """Max violation per relation. The ``reversible_*`` checks run only for reversible chains."""
    n = p.n
    if n > max_n:
        raise ValidationError(f"relation suite is O(n^4); n={n} exceeds max_n={max_n}", module="metrics")
    tensor = fundamental_tensor(p, materialize=True)
    pi = tensor.stationary
    F = tensor.values
    Fh = normalize_tensor(tensor).values
    H = hitting_matrix(tensor)
    C = H + H.T
    Lp = tensor.laplacian_pinv
    H2 = two_target_hitting(p)
    if reversible is None:
        reversible = is_reversible(p, pi)

    I = np.arange(n)
    ne = I[:, None] != I[None, :]                       # [a, b]: a != b
    i_, m_, j_ = np.ix_(I, I, I)
    out = []

    # absorption probabilities over a target set sum to one
    r1 = _eq("absorption_total", Fh + Fh.transpose(0, 2, 1), 1.0, (i_ != m_) & (i_ != j_) & (m_ != j_))
    worst = r1.max_violation
    checked = r1.checked
    for size in (1, 3):
        for targets in combinations(range(n), size):
            q = absorption_probabilities(p, targets).q
            if q.size:
                worst = max(worst, float(np.abs(q.sum(axis=1) - 1).max()))
                checked += q.shape[0]
    out.append(RelationResult("absorption_total", "eq", worst, EQ_TOL, checked))

    diag = np.einsum("iij->ij", F)                     # F^{j}_{ii}
    out.append(_eq("return_visits", diag, pi[:, None] * C, ne))
    out.append(_eq("visits_commute_triangle", F / pi[None, :, None] + F.transpose(1, 0, 2) / pi[:, None, None],
                   C[:, None, :] + C.T[None, :, :] - C[:, :, None], (i_ != j_) & (m_ != j_)))
    # F^{j}_{im}/pi_m + F^{m}_{ij}/pi_j = C_jm
    out.append(_eq("visits_swap_target", F / pi[None, :, None] + F.transpose(0, 2, 1) / pi[None, None, :],
                   C.T[None, :, :], m_ != j_))
    # F^{j}_{im} + F^{i}_{jm} = pi_m C_ij
    out.append(_eq("visits_swap_ends", F + F.transpose(2, 1, 0), pi[None, :, None] * C[:, None, :], i_ != j_))

    detour = H[:, None, :] + H.T[None, :, :] - H[:, :, None]   # [i, m, j] = H_i^j + H_j^m - H_i^m
    out.append(_eq("detour_visits", detour, F / pi[None, :, None]))
    out.append(_eq("detour_normalized", detour, Fh * C.T[None, :, :]))

    # H_i^{j,k} = H_i^k - Q_i^{j,not k} H_j^k = H_i^j - Q_i^{k,not j} H_k^j ; index [i, j, k]
    mask4 = (i_ != m_) & (i_ != j_) & (m_ != j_)
    via_k = H[:, None, :] - Fh * H[None, :, :]
    via_j = H[:, :, None] - Fh.transpose(0, 2, 1) * H.T[None, :, :]
    r4a, r4b = _eq("two_target_hitting", H2, via_k, mask4), _eq("two_target_hitting", H2, via_j, mask4)
    out.append(RelationResult("two_target_hitting", "eq", max(r4a.max_violation, r4b.max_violation), EQ_TOL,
                              r4a.checked + r4b.checked))

    out.append(_geq("hitting_triangle", H[:, :, None] + H[None, :, :], H[:, None, :]))     # [i, m, j]
    out.append(_geq("more_targets_sooner", H[:, :, None], H2))                                   # [i, j, m]
    # H_i^m + H_m^{j,k} >= H_i^{j,k}; index [i, m, j, k]
    out.append(_geq("two_target_triangle", H[:, :, None, None] + H2[None, :, :, :], H2[:, None, :, :]))

    # per absorbing node j, index [i, m, k, j]
    fkk = np.einsum("kkj->kj", F)
    F_kmj = F.transpose(1, 0, 2)[None, :, :, :]        # [_, m, k, j] -> F[k, m, j]
    out.append(_geq("visits_product_bound", F[:, :, None, :] * fkk[None, None, :, :], F[:, None, :, :] * F_kmj))
    out.append(_geq("visits_diagonal_max", fkk[None, :, :], F))                                  # [i, k, j]

    # Q_i^{m,not j} >= Q_i^{k,not j} Q_k^{m,not j}; index [i, m, k, j]
    out.append(_geq("hit_before_chain", Fh[:, :, None, :], Fh[:, None, :, :] * Fh.transpose(1, 0, 2)[None, :, :, :]))

    # L+_im + L+_kk >= L+_ik + L+_km; index [i, m, k]
    d = np.diag(Lp)
    out.append(_geq("laplacian_pinv_triangle", Lp[:, :, None] + d[None, None, :], Lp[:, None, :] + Lp.T[None, :, :]))

    if reversible:
        out.append(_eq("reversible_visits", F / pi[None, :, None], F.transpose(1, 0, 2) / pi[:, None, None]))
        out.append(_eq("reversible_normalized", Fh * C.T[None, :, :], Fh.transpose(1, 0, 2) * C[:, None, :]))
        # index [i, m, j]
        out.append(_eq("reversible_cycle_hitting", H[:, :, None] + H[None, :, :] + H.T[:, None, :],
                       H.T[:, :, None] + H.T[None, :, :] + H[:, None, :]))
    return {r.name: r for r in out}
