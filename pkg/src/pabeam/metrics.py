"""Quantitative image evaluation: SNR, lateral profiles, FWHM, peak sidelobe."""

from dataclasses import dataclass, field

import numpy as np

from .delays import FocalPoint
from .errors import DegenerateImage, DepthOutOfGrid, NoPeakFound, WidthUnbounded
from .pipeline import PaImage


@dataclass(frozen=True)
class TargetSpec:
    targets: tuple  # of FocalPoint
    depth_tolerance: float = 1e-3  # m


@dataclass(frozen=True)
class TargetMetrics:
    depth: float
    fwhm: float
    peak_sidelobe_db: float


@dataclass(frozen=True)
class MetricsReport:
    method: str
    snr_db: float
    per_target: tuple = field(default_factory=tuple)


def snr(image: PaImage) -> float:
    """20 log10 of (max - min) over the standard deviation, on the normalized
    linear envelope plane.

    Raises:
        DegenerateImage: the envelope is constant (zero standard deviation).
    """
    env = _require_envelope(image)
    std = float(np.std(env))
    if std == 0.0:
        raise DegenerateImage("constant envelope plane has no SNR")
    return float(20.0 * np.log10((env.max() - env.min()) / std))


def _require_envelope(image: PaImage) -> np.ndarray:
    if image.envelope is None:
        raise ValueError("image has no envelope plane; run pipeline.finalize first")
    return image.envelope


def _depth_row(image: PaImage, depth: float) -> int:
    zs = image.grid.z_coords
    if not zs[0] <= depth <= zs[-1]:
        raise DepthOutOfGrid(f"depth {depth} outside grid [{zs[0]}, {zs[-1]}]")
    return int(np.argmin(np.abs(zs - depth)))


def lateral_profile(image: PaImage, depth: float) -> np.ndarray:
    """dB-plane row nearest to ``depth``; returns an (nx, 2) array of
    (x, value_db) pairs."""
    if image.db is None:
        raise ValueError("image has no db plane; run pipeline.finalize first")
    row = _depth_row(image, depth)
    return np.column_stack([image.grid.x_coords, image.db[row]])


def _find_peak(profile: np.ndarray, xs: np.ndarray, x0: float) -> int:
    """Index of the local maximum nearest x0.

    Raises NoPeakFound when the profile has no interior local maximum (flat or
    monotone rows carry no target)."""
    interior = (profile[1:-1] >= profile[:-2]) & (profile[1:-1] >= profile[2:])
    cand = np.nonzero(interior)[0] + 1
    cand = cand[profile[cand] > 0.0]
    if cand.size == 0:
        raise NoPeakFound(f"no local maximum near x = {x0}")
    return int(cand[np.argmin(np.abs(xs[cand] - x0))])


def fwhm(image: PaImage, target: FocalPoint) -> float:
    """Full width at half maximum of the lateral envelope profile through the
    target's depth row, with sub-pixel half crossings by linear interpolation.

    Raises:
        NoPeakFound: no local maximum on the row.
        WidthUnbounded: the profile never falls below half max within the grid.
    """
    env = _require_envelope(image)
    row = _depth_row(image, target.z)
    profile = env[row]
    xs = image.grid.x_coords
    ipk = _find_peak(profile, xs, target.x)
    half = 0.5 * profile[ipk]

    def cross(direction: int) -> float:
        i = ipk
        while 0 <= i + direction < len(profile):
            j = i + direction
            if profile[j] < half:
                # linear interpolation between samples i and j
                t = (profile[i] - half) / (profile[i] - profile[j])
                return xs[i] + t * (xs[j] - xs[i])
            i = j
        raise WidthUnbounded(
            f"profile never falls below half max {'right' if direction > 0 else 'left'} "
            f"of the peak at x = {xs[ipk]}"
        )

    return float(cross(+1) - cross(-1))


def peak_sidelobe(
    image: PaImage, target: FocalPoint, mainlobe_exclusion: float | None = None
) -> float:
    """Highest dB-profile value outside the mainlobe, relative to the peak.

    ``mainlobe_exclusion`` defaults to 3x the measured FWHM of the target.
    """
    if image.db is None:
        raise ValueError("image has no db plane; run pipeline.finalize first")
    env = _require_envelope(image)
    row = _depth_row(image, target.z)
    xs = image.grid.x_coords
    ipk = _find_peak(env[row], xs, target.x)
    if mainlobe_exclusion is None:
        mainlobe_exclusion = 3.0 * fwhm(image, target)
    outside = np.abs(xs - xs[ipk]) > mainlobe_exclusion
    if not np.any(outside):
        raise NoPeakFound("mainlobe exclusion covers the whole row")
    db_row = image.db[row]
    return float(db_row[outside].max() - db_row[ipk])


def evaluate(image: PaImage, spec: TargetSpec) -> MetricsReport:
    """SNR plus per-target FWHM and peak sidelobe for every target."""
    per_target = []
    for t in spec.targets:
        per_target.append(
            TargetMetrics(
                depth=t.z,
                fwhm=fwhm(image, t),
                peak_sidelobe_db=peak_sidelobe(image, t),
            )
        )
    return MetricsReport(
        method=image.method.value, snr_db=snr(image), per_target=tuple(per_target)
    )
