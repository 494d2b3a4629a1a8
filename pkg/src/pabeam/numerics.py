"""Small dense symmetric positive-definite linear algebra.

Everything downstream (covariance matrices, augmented penalty matrices) is
real symmetric by construction and diagonally loaded to positive definiteness,
so a failing Cholesky factorization is a meaningful signal, not a condition to
recover from.
"""

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from .errors import DimensionMismatch, NotPositiveDefinite

SYMMETRY_ATOL_REL = 1e-12


def check_symmetric(a: np.ndarray) -> np.ndarray:
    """Validates that ``a`` is a square symmetric matrix and returns it.

    Symmetry is checked to an absolute tolerance of 1e-12 times the largest
    entry magnitude.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    scale = np.max(np.abs(a)) if a.size else 0.0
    if not np.allclose(a, a.T, rtol=0.0, atol=SYMMETRY_ATOL_REL * max(scale, 1e-300)):
        raise DimensionMismatch("matrix is not symmetric")
    return a


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Returns (A + A^T)/2, killing roundoff asymmetry."""
    a = np.asarray(a, dtype=np.float64)
    return 0.5 * (a + a.T)


def spd_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solves A x = b for symmetric positive-definite A via Cholesky.

    Args:
        a: symmetric positive-definite matrix, shape (n, n).
        b: right-hand side vector, shape (n,).

    Returns:
        Solution vector x with A @ x == b.

    Raises:
        NotPositiveDefinite: a Cholesky pivot was <= 0.
        DimensionMismatch: shapes are inconsistent or A is not symmetric.
    """
    a = check_symmetric(a)
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 1 or b.shape[0] != a.shape[0]:
        raise DimensionMismatch(
            f"rhs length {b.shape} does not match matrix dim {a.shape[0]}"
        )
    try:
        factor = cho_factor(a, lower=True, check_finite=False)
    except LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    return cho_solve(factor, b, check_finite=False)
