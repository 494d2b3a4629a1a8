"""Weight computations: DAS, MV, sparse-Capon (SC) and the sparse-regularized
MV update, plus the subarray-averaged beamformed output.

All arithmetic is real: the steering vector is all-ones (channels are
pre-delayed) and RF samples are real, so conjugate transposes reduce to plain
transposes. The sparse-regularized method iterates a reweighted closed-form
update: at each step the l1 penalty on the snapshot outputs is converted to a
quadratic via a diagonal of reciprocal output magnitudes, which augments the
covariance before the Capon solve.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .delays import SnapshotMatrix
from .errors import DimensionMismatch, NotPositiveDefinite
from .numerics import spd_solve, symmetrize


class Method(str, Enum):
    DAS = "das"
    MV = "mv"
    SC = "sc"
    MSMV = "msmv"


@dataclass(frozen=True)
class WeightVector:
    values: np.ndarray
    method: Method
    iterations_run: int = 0


@dataclass(frozen=True)
class MsmvConfig:
    """Knobs for the sparse-regularized MV iteration.

    ``penalty_window`` selects which snapshot columns enter the sparsity
    penalty: "full" uses every subarray x temporal column (the same set the
    covariance averages over), "center" restricts it to the temporal-offset-0
    columns that form the beamformed output.
    """

    beta: float = 1.0
    n_iter: int = 10
    early_stop: bool = False
    early_stop_tol: float = 1e-6
    epsilon_floor_rel: float = 1e-12
    penalty_window: str = "full"

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.n_iter < 0:
            raise ValueError("n_iter must be >= 0")
        if self.epsilon_floor_rel <= 0:
            raise ValueError("epsilon_floor_rel must be > 0")
        if self.penalty_window not in ("full", "center"):
            raise ValueError("penalty_window must be 'full' or 'center'")


def das_weight(L: int) -> WeightVector:
    """Uniform 1/L weights (unit sum, comparable gain to the adaptive methods)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return WeightVector(values=np.full(L, 1.0 / L), method=Method.DAS)


def _capon_solve(a_mat: np.ndarray) -> np.ndarray:
    """w = A^-1 1 / (1^T A^-1 1) without forming an explicit inverse."""
    ones = np.ones(a_mat.shape[0])
    x = spd_solve(a_mat, ones)
    return x / x.sum()


def mv_weight(r_loaded: np.ndarray) -> WeightVector:
    """Minimum-variance (Capon) weights for an all-ones steering vector.

    Raises:
        NotPositiveDefinite: covariance was not loaded to positive definiteness;
            callers fall back to DAS for that pixel.
    """
    return WeightVector(values=_capon_solve(r_loaded), method=Method.MV)


def sc_weight(
    r_loaded: np.ndarray, alpha: float, n_iter: int, n_steer: int = 4
) -> WeightVector:
    """Sparse-Capon fixed-point iteration with an all-ones constraint matrix.

    With the steering vector all-ones, the penalty term collapses to a
    constant rank-one loading and the fixed point coincides with the MV
    weight; this routine exists to verify that equivalence executably.
    ``n_steer`` is the number of (identical) steering columns; the result is
    independent of it.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    L = r_loaded.shape[0]
    w = _capon_solve(r_loaded)
    if alpha == 0.0:
        return WeightVector(values=w, method=Method.SC, iterations_run=0)
    ones_mat = np.ones((L, L))
    it = 0
    for it in range(1, n_iter + 1):
        # C D(w) C^T with C = ones(L, n_steer) and D = |sum(w)|^-1 I
        s = abs(w.sum())
        d_term = alpha * n_steer / s * ones_mat
        w = _capon_solve(symmetrize(r_loaded + d_term))
    return WeightVector(values=w, method=Method.SC, iterations_run=it)


def reweight_diagonal(
    x: np.ndarray, w: np.ndarray, epsilon_floor_rel: float = 1e-12
) -> np.ndarray | None:
    """Reciprocal clamped snapshot-output magnitudes, 1/max(|x_n^T w|, eps).

    The clamp floor is epsilon_floor_rel times the largest output magnitude,
    which keeps the p-2 = -1 exponent defined at sparse solutions. Returns
    None (the all-zero-outputs marker) when every output is exactly zero; the
    caller then drops the penalty term, reducing the step to MV.
    """
    if x.shape[0] != w.shape[0]:
        raise DimensionMismatch(
            f"snapshot rows {x.shape[0]} != weight length {w.shape[0]}"
        )
    mag = np.abs(x.T @ w)
    peak = mag.max() if mag.size else 0.0
    if peak == 0.0:
        return None
    return 1.0 / np.maximum(mag, epsilon_floor_rel * peak)


def msmv_weight(
    r_loaded: np.ndarray, snapshots: SnapshotMatrix, cfg: MsmvConfig = MsmvConfig()
) -> WeightVector:
    """Sparse-regularized MV weights via the iteratively reweighted update.

    Starts from the MV weight (the iteration is insensitive to the
    initializer) and repeatedly solves with the covariance augmented by
    beta * X D X^T, D the reweighting diagonal of the previous iterate. Runs
    cfg.n_iter steps, or stops early once the infinity-norm step falls below
    cfg.early_stop_tol when early stopping is enabled.
    """
    x = (
        snapshots.center_columns
        if cfg.penalty_window == "center"
        else snapshots.columns
    )
    if x.shape[0] != r_loaded.shape[0]:
        raise DimensionMismatch(
            f"snapshot rows {x.shape[0]} != covariance dim {r_loaded.shape[0]}"
        )
    w = _capon_solve(r_loaded)
    if cfg.beta == 0.0 or cfg.n_iter == 0:
        return WeightVector(values=w, method=Method.MSMV, iterations_run=0)
    it = 0
    for k in range(1, cfg.n_iter + 1):
        d = reweight_diagonal(x, w, cfg.epsilon_floor_rel)
        if d is None:
            a_mat = r_loaded
        else:
            # form the penalty as B B^T with B = X sqrt(D): numerically PSD
            b = x * np.sqrt(cfg.beta * d)
            a_mat = symmetrize(r_loaded + b @ b.T)
        try:
            w_next = _capon_solve(a_mat)
        except NotPositiveDefinite:
            # reweighting saturated the conditioning (deep nulls); keep the
            # last valid iterate rather than discarding the pixel
            break
        it = k
        step = np.max(np.abs(w_next - w))
        w = w_next
        if cfg.early_stop and step < cfg.early_stop_tol:
            break
    return WeightVector(values=w, method=Method.MSMV, iterations_run=it)


def msmv_objective(
    r: np.ndarray, snapshots: SnapshotMatrix, w: np.ndarray, beta: float
) -> float:
    """w^T R w + beta * ||X^T w||_1, the quantity the reweighted update descends."""
    x = snapshots.columns
    return float(w @ r @ w + beta * np.sum(np.abs(x.T @ w)))


def beamform_output(snapshots: SnapshotMatrix, w: WeightVector) -> float:
    """Subarray-averaged output: mean of w^T X_l over the center-time columns.

    The temporal-offset columns feed only the covariance and the sparsity
    penalty; the output itself uses the offset-0 subarray columns.
    """
    values = np.asarray(w.values)
    if values.shape[0] != snapshots.subarray_len:
        raise DimensionMismatch(
            f"weight length {values.shape[0]} != subarray length "
            f"{snapshots.subarray_len}"
        )
    return float(np.mean(values @ snapshots.center_columns))
