import numpy as np
import pytest
from hypothesis import given, strategies as st

from markovtensor import linalg
from markovtensor.errors import SingularMatrixError, ValidationError


def _well_conditioned(seed, n):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, n)) + n * np.eye(n)


@given(st.integers(0, 10_000), st.integers(1, 25))
def test_solve_and_inverse(seed, n):
    a = _well_conditioned(seed, n)
    b = np.arange(n, dtype=float)
    assert np.allclose(a @ linalg.solve(a, b), b, atol=1e-10)
    assert np.allclose(linalg.inverse(a) @ a, np.eye(n), atol=1e-10)


def test_singular_reports_pivot():
    with pytest.raises(SingularMatrixError) as exc:
        linalg.inverse([[1.0, 2.0], [2.0, 4.0]])
    assert exc.value.pivot == 1


def test_non_finite_rejected():
    with pytest.raises(ValidationError):
        linalg.inverse([[np.nan, 0.0], [0.0, 1.0]])


@given(st.integers(0, 10_000), st.integers(2, 20), st.integers(1, 3))
def test_pinv_satisfies_penrose(seed, n, deficit):
    rng = np.random.default_rng(seed)
    r = max(n - deficit, 1)
    a = rng.normal(size=(n, r)) @ rng.normal(size=(r, n))
    res = linalg.penrose_residuals(a, linalg.pinv(a))
    assert max(res) <= 1e-8 * max(1.0, np.abs(a).max()) ** 2


def test_pinv_matches_numpy():
    a = np.array([[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]])
    assert np.allclose(linalg.pinv(a), np.linalg.pinv(a), atol=1e-12)


@given(st.integers(0, 10_000), st.integers(2, 15))
def test_pinv_from_regular_inverse(seed, n):
    # A = C - u v' singular, with C = A + u v' regular
    rng = np.random.default_rng(seed)
    m = rng.random((n, n)) + 0.1
    p = m / m.sum(axis=1, keepdims=True)
    w, vecs = np.linalg.eig(p.T)
    pi = np.real(vecs[:, np.argmin(np.abs(w - 1))])
    pi /= pi.sum()
    a = np.eye(n) - p
    c_inv = np.linalg.inv(a + np.outer(np.ones(n), pi))
    got = linalg.pinv_from_regular_inverse(c_inv, np.ones(n), pi)
    assert np.allclose(got, np.linalg.pinv(a), atol=1e-9)


@given(st.integers(0, 10_000), st.integers(2, 15), st.data())
def test_submatrix_inverse(seed, n, data):
    a = _well_conditioned(seed, n)
    drop = data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 1))
    keep = [i for i in range(n) if i not in drop]
    expect = np.linalg.inv(a[np.ix_(keep, keep)])
    assert np.allclose(linalg.submatrix_inverse(np.linalg.inv(a), drop), expect, atol=1e-9)


def test_submatrix_inverse_singular_block():
    m_inv = np.array([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(SingularMatrixError):
        linalg.submatrix_inverse(m_inv, [0])
