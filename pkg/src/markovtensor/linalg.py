"""Dense kernels: LU solve/inverse, pseudo-inverses, Schur-complement submatrix inverse.

All inputs are float64 numpy arrays; NaN/Inf are rejected at the boundary.
"""

from __future__ import annotations

import warnings
from typing import Iterable

import numpy as np
import scipy.linalg

from .errors import SingularMatrixError, ValidationError

PIVOT_RTOL = 1e-13
SVD_RTOL = 1e-13
DEGENERATE_TOL = 1e-14


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got {a.ndim}-D", module="linalg")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries", module="linalg")
    return a


def lu_factor(a) -> tuple[np.ndarray, np.ndarray]:
    """Partial-pivot LU; raises when a pivot falls below 1e-13 * max|a|."""
    a = as_matrix(a, "a")
    n, m = a.shape
    if n != m:
        raise ValidationError(f"expected a square matrix, got {a.shape}", module="linalg")
    if n == 0:
        return a.copy(), np.zeros(0, dtype=np.int32)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    scale = np.abs(a).max()
    small = np.flatnonzero(np.abs(np.diag(lu)) <= PIVOT_RTOL * scale)
    if scale == 0 or small.size:
        k = int(small[0]) if small.size else 0
        raise SingularMatrixError(f"matrix is singular to tolerance at pivot {k}", pivot=k)
    return lu, piv


def solve(a, b) -> np.ndarray:
    """Solve a x = b. ``b`` may be a vector or a matrix; the result matches its shape."""
    b_arr = np.asarray(b, dtype=float)
    lu, piv = lu_factor(a)
    rhs = as_matrix(b_arr, "b")
    if rhs.shape[0] != lu.shape[0]:
        raise ValidationError(f"shape mismatch {lu.shape} vs {rhs.shape}", module="linalg")
    if lu.shape[0] == 0:
        return np.zeros(b_arr.shape)
    x = scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    return x.reshape(b_arr.shape)


def inverse(a) -> np.ndarray:
    a = as_matrix(a, "a")
    return solve(a, np.eye(a.shape[0]))


def pinv(a) -> np.ndarray:
    """Moore-Penrose pseudo-inverse by SVD, cutoff sigma_max * max(shape) * 1e-13."""
    a = as_matrix(a, "a")
    if a.size == 0:
        return np.zeros(a.shape[::-1])
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    cutoff = s.max() * max(a.shape) * SVD_RTOL if s.size else 0.0
    keep = s > cutoff
    return (vt[keep].T / s[keep]) @ u[:, keep].T


def penrose_residuals(a, a_plus) -> tuple[float, float, float, float]:
    """Max-abs residuals of the four Penrose conditions."""
    a = np.asarray(a, dtype=float)
    x = np.asarray(a_plus, dtype=float)
    ax, xa = a @ x, x @ a
    return (
        float(np.abs(ax @ a - a).max(initial=0.0)),
        float(np.abs(xa @ x - x).max(initial=0.0)),
        float(np.abs(ax.T - ax).max(initial=0.0)),
        float(np.abs(xa.T - xa).max(initial=0.0)),
    )


def pinv_from_regular_inverse(c_inv, u, v) -> np.ndarray:
    """Pseudo-inverse of the singular A = C - u v' given C^-1.

    With x = C^-1 u and y' = v' C^-1,
    A^+ = (I - x x'/x'x) C^-1 (I - y y'/y'y).
    """
    c_inv = as_matrix(c_inv, "c_inv")
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    x = c_inv @ u
    y = c_inv.T @ v
    xx, yy = x @ x, y @ y
    if xx < DEGENERATE_TOL or yy < DEGENERATE_TOL:
        raise SingularMatrixError("degenerate rank-one correction (x'x or y'y ~ 0)")
    left = c_inv - np.outer(x, x @ c_inv) / xx
    return left - np.outer(left @ y, y) / yy


def submatrix_inverse(m_inv, drop: Iterable[int]) -> np.ndarray:
    """Inverse of M with rows/cols ``drop`` removed, from M^-1 alone.

    Partition M^-1 = [[X, Y], [Z, W]] with W on the dropped indices; the
    answer is X - Y W^-1 Z over the kept indices.
    """
    m_inv = as_matrix(m_inv, "m_inv")
    n = m_inv.shape[0]
    drop = sorted(set(int(i) for i in drop))
    if not drop:
        return m_inv
    if drop[0] < 0 or drop[-1] >= n:
        raise ValidationError(f"drop indices out of range for size {n}", module="linalg")
    mask = np.ones(n, dtype=bool)
    mask[drop] = False
    keep = np.flatnonzero(mask)
    w = m_inv[np.ix_(drop, drop)]
    y = m_inv[np.ix_(keep, drop)]
    z = m_inv[np.ix_(drop, keep)]
    try:
        w_inv_z = solve(w, z)
    except SingularMatrixError as exc:
        raise SingularMatrixError(
            "dropped block of the inverse is singular: the drop set is not a valid absorbing set",
            pivot=exc.pivot) from exc
    return m_inv[np.ix_(keep, keep)] - y @ w_inv_z
