"""Per-focal-point delays and snapshot extraction.

Delays are one-way (photoacoustic) times of flight expressed in fractional
sample indices; reads at fractional indices use linear interpolation and
out-of-record reads return 0 so edge pixels still reconstruct.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSubarrayLength
from .phantom import ArrayGeometry, RfFrame


@dataclass(frozen=True)
class FocalPoint:
    x: float  # m
    z: float  # m, depth > 0

    def __post_init__(self):
        if self.z <= 0:
            raise ValueError("focal point depth must be positive")


@dataclass(frozen=True)
class SnapshotMatrix:
    """Delayed subarray snapshots for one focal point.

    Columns are ordered temporal-major: for each temporal offset
    n = -K..K (in order), all subarrays l = 0..M-L in order.
    """

    columns: np.ndarray  # (L, (2K+1)(M-L+1))
    subarray_len: int
    n_subarrays: int
    temporal_half_window: int

    @property
    def n_columns(self) -> int:
        return self.columns.shape[1]

    @property
    def center_columns(self) -> np.ndarray:
        """The temporal-offset-0 block, used for the beamformed output."""
        k = self.temporal_half_window
        return self.columns[:, k * self.n_subarrays:(k + 1) * self.n_subarrays]


def delay_samples(geometry: ArrayGeometry, p: FocalPoint) -> np.ndarray:
    """One-way delay of each element to the focal point, in fractional samples."""
    d = np.hypot(geometry.element_x - p.x, p.z)
    return d / geometry.sound_speed * geometry.sampling_rate


def _interp_at(samples: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """Linear interpolation of each row of ``samples`` at its own fractional
    index; indices outside [0, T-1] read as 0."""
    n_t = samples.shape[1]
    k = np.floor(tau).astype(np.int64)
    frac = tau - k
    rows = np.arange(samples.shape[0])
    lo = np.where((k >= 0) & (k <= n_t - 1), samples[rows, np.clip(k, 0, n_t - 1)], 0.0)
    hi = np.where(
        (k + 1 >= 0) & (k + 1 <= n_t - 1), samples[rows, np.clip(k + 1, 0, n_t - 1)], 0.0
    )
    return (1.0 - frac) * lo + frac * hi


def extract_delayed(frame: RfFrame, p: FocalPoint, time_offset: int = 0) -> np.ndarray:
    """Delayed sample per element for a focal point, shape (M,)."""
    tau = delay_samples(frame.geometry, p) + time_offset
    return _interp_at(frame.samples, tau)


def build_snapshots(frame: RfFrame, p: FocalPoint, L: int, K: int) -> SnapshotMatrix:
    """Builds the L x (2K+1)(M-L+1) snapshot matrix for one focal point.

    For each temporal offset n in -K..K the delayed vector is sliced into the
    M-L+1 overlapping length-L subarrays.

    Raises:
        InvalidSubarrayLength: L outside [1, M].
    """
    m = frame.geometry.n_elements
    if not 1 <= L <= m:
        raise InvalidSubarrayLength(f"subarray length {L} outside [1, {m}]")
    if K < 0:
        raise ValueError("temporal half window K must be >= 0")
    n_sub = m - L + 1
    cols = np.empty((L, (2 * K + 1) * n_sub))
    for i, n in enumerate(range(-K, K + 1)):
        delayed = extract_delayed(frame, p, n)
        windows = np.lib.stride_tricks.sliding_window_view(delayed, L)  # (n_sub, L)
        cols[:, i * n_sub:(i + 1) * n_sub] = windows.T
    return SnapshotMatrix(
        columns=cols, subarray_len=L, n_subarrays=n_sub, temporal_half_window=K
    )
