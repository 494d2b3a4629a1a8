import numpy as np
import pytest

from pabeam.errors import DimensionMismatch, NotPositiveDefinite
from pabeam.numerics import check_symmetric, spd_solve, symmetrize


def test_identity_solve():
    x = spd_solve(np.eye(3), np.array([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(x, [1.0, 2.0, 3.0], atol=1e-14)


def test_2x2_closed_form():
    # oracle: A^-1 = (1/5) [[3,-1],[-1,2]], so A^-1 [1,1] = [0.4, 0.2]
    a = np.array([[2.0, 1.0], [1.0, 3.0]])
    x = spd_solve(a, np.array([1.0, 1.0]))
    np.testing.assert_allclose(x, [0.4, 0.2], atol=1e-12)


def test_indefinite_raises():
    # eigenvalues {3, -1}
    a = np.array([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(NotPositiveDefinite):
        spd_solve(a, np.array([1.0, 1.0]))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        spd_solve(np.eye(3), np.ones(2))
    with pytest.raises(DimensionMismatch):
        spd_solve(np.ones((2, 3)), np.ones(3))


def test_asymmetric_rejected():
    a = np.array([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(DimensionMismatch):
        spd_solve(a, np.ones(2))
    np.testing.assert_allclose(symmetrize(a), [[1.0, 0.25], [0.25, 1.0]])


def test_random_spd_residuals():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        dim = rng.integers(2, 12)
        g = rng.uniform(-1.0, 1.0, (dim, dim))
        a = g.T @ g + dim * np.eye(dim)
        b = rng.uniform(-1.0, 1.0, dim)
        x = spd_solve(a, b)
        resid = np.max(np.abs(a @ x - b))
        assert resid <= 1e-8 * max(np.max(np.abs(b)), 1e-30)


def test_scaling_property():
    rng = np.random.default_rng(3)
    g = rng.uniform(-1.0, 1.0, (5, 5))
    a = g.T @ g + 5 * np.eye(5)
    b = rng.uniform(-1.0, 1.0, 5)
    for c in (0.25, 3.0, 1e4):
        np.testing.assert_allclose(
            spd_solve(c * a, b), spd_solve(a, b) / c, rtol=1e-10
        )


def test_check_symmetric_tolerance():
    a = np.eye(4)
    a[0, 1] = 1e-13  # below 1e-12 * max entry
    a2 = check_symmetric(a)
    assert a2.shape == (4, 4)
