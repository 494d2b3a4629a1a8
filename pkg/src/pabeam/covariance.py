"""Spatially smoothed covariance estimation with diagonal loading."""

import numpy as np

from .delays import SnapshotMatrix
from .numerics import symmetrize


def default_dl_factor(L: int) -> float:
    """Default diagonal-loading constant, 1/(100 L)."""
    return 1.0 / (100.0 * L)


def estimate(snapshots: SnapshotMatrix) -> np.ndarray:
    """Mean outer product over all subarray x temporal snapshot columns.

    Equals (1/N) X X^T for the snapshot matrix X, which makes the covariance
    estimator and the sparsity-penalty column set definitionally consistent.
    """
    x = snapshots.columns
    return symmetrize(x @ x.T / x.shape[1])


def apply_dl(r: np.ndarray, dl_factor: float) -> np.ndarray:
    """Adds dl_factor * trace(R) to the diagonal of R."""
    if dl_factor < 0:
        raise ValueError("diagonal loading factor must be >= 0")
    r = np.asarray(r, dtype=np.float64)
    return r + dl_factor * np.trace(r) * np.eye(r.shape[0])
