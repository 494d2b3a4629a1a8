"""Image formation: per-pixel reconstruction loop, envelope detection and
log compression."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import hilbert

from .beamformers import (
    Method,
    MsmvConfig,
    beamform_output,
    das_weight,
    msmv_weight,
    mv_weight,
)
from .covariance import apply_dl, default_dl_factor, estimate
from .delays import FocalPoint, build_snapshots
from .errors import ConfigError, NotPositiveDefinite
from .phantom import RfFrame


@dataclass(frozen=True)
class ImageGrid:
    x_min: float
    x_max: float
    z_min: float
    z_max: float
    nx: int
    nz: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.z_min < self.z_max):
            raise ConfigError("grid bounds must satisfy x_min < x_max, z_min < z_max")
        if self.nx < 1 or self.nz < 1:
            raise ConfigError("grid.nx and grid.nz must be >= 1")

    @property
    def x_coords(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def z_coords(self) -> np.ndarray:
        return np.linspace(self.z_min, self.z_max, self.nz)


@dataclass(frozen=True)
class PaImage:
    """Reconstructed image: raw beamformed plane plus optional envelope/db views.

    Planes are (nz, nx), depth down the rows.
    """

    grid: ImageGrid
    beamformed: np.ndarray
    method: Method
    fallback_pixel_count: int = 0
    envelope: np.ndarray | None = None  # normalized to unit max
    db: np.ndarray | None = None
    dynamic_range_db: float = 50.0


def reconstruct(
    frame: RfFrame,
    grid: ImageGrid,
    method: Method,
    L: int | None = None,
    K: int = 2,
    dl_factor: float | None = None,
    msmv: MsmvConfig = MsmvConfig(),
    workers: int = 1,
) -> PaImage:
    """Per-pixel beamformed plane for one method.

    Every pixel runs snapshots -> covariance -> diagonal loading -> weights ->
    subarray-averaged output (DAS skips the covariance). A pixel whose loaded
    covariance still fails the positive-definiteness check (an identically
    zero neighborhood) falls back to the DAS value and is counted in
    fallback_pixel_count; the image is never aborted.

    Output is deterministic and independent of ``workers``; threads write
    disjoint rows.
    """
    method = Method(method)
    m = frame.geometry.n_elements
    if L is None:
        L = m // 2
    if not 1 <= L <= m:
        raise ConfigError(f"L={L} outside [1, {m}] for an {m}-element array")
    if K < 0:
        raise ConfigError("K must be >= 0")
    if dl_factor is None:
        dl_factor = default_dl_factor(L)
    if workers < 1:
        raise ConfigError("workers must be >= 1")

    xs = grid.x_coords
    zs = grid.z_coords
    plane = np.zeros((grid.nz, grid.nx))
    fallbacks = np.zeros(grid.nz, dtype=np.int64)
    das_w = das_weight(L)

    def run_row(iz: int) -> None:
        z = zs[iz]
        for ix, x in enumerate(xs):
            snaps = build_snapshots(frame, FocalPoint(x, z), L, K)
            if method is Method.DAS:
                plane[iz, ix] = beamform_output(snaps, das_w)
                continue
            r_loaded = apply_dl(estimate(snaps), dl_factor)
            try:
                if method is Method.MV:
                    w = mv_weight(r_loaded)
                else:
                    w = msmv_weight(r_loaded, snaps, msmv)
            except NotPositiveDefinite:
                fallbacks[iz] += 1
                w = das_w
            plane[iz, ix] = beamform_output(snaps, w)

    if workers == 1:
        for iz in range(grid.nz):
            run_row(iz)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_row, range(grid.nz)))

    return PaImage(
        grid=grid,
        beamformed=plane,
        method=method,
        fallback_pixel_count=int(fallbacks.sum()),
    )


def envelope_detect(beamformed: np.ndarray) -> np.ndarray:
    """Magnitude of the analytic signal along depth, column by column.

    The analytic signal is formed in the frequency domain: negative
    frequencies zeroed, positive doubled, DC and Nyquist kept singly.
    """
    beamformed = np.asarray(beamformed, dtype=np.float64)
    if not np.any(beamformed):
        return np.zeros_like(beamformed)
    return np.abs(hilbert(beamformed, axis=0))


def log_compress(envelope: np.ndarray, dynamic_range_db: float) -> np.ndarray:
    """Normalize to unit max and map to dB, clamped to [-dynamic_range, 0]."""
    if dynamic_range_db <= 0:
        raise ConfigError("dynamic_range_db must be > 0")
    envelope = np.asarray(envelope, dtype=np.float64)
    peak = envelope.max(initial=0.0)
    if peak == 0.0:
        return np.full_like(envelope, -dynamic_range_db)
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(envelope / peak)
    return np.maximum(db, -dynamic_range_db)


def finalize(image: PaImage, dynamic_range_db: float = 50.0) -> PaImage:
    """Fills in the normalized envelope and log-compressed planes."""
    env = envelope_detect(image.beamformed)
    peak = env.max(initial=0.0)
    env_norm = env / peak if peak > 0.0 else env
    return replace(
        image,
        envelope=env_norm,
        db=log_compress(env, dynamic_range_db),
        dynamic_range_db=float(dynamic_range_db),
    )
