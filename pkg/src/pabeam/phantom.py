"""Analytic forward model for point-absorber phantoms.

Generates synthetic RF channel data for a linear array: a bandlimited
Gaussian-modulated pulse radiated from each point absorber, spherical 1/d
spreading, sub-sample arrival times split linearly between adjacent samples,
plus optional Gaussian channel noise.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.signal import gausspulse

from .errors import InvalidBandwidth, TargetOutOfRange, ZeroSignal

# Envelope level (relative to peak) below which the synthetic pulse is truncated.
PULSE_TRUNCATION = 1e-4


@dataclass(frozen=True)
class ArrayGeometry:
    """Linear array in the z=0 plane, elements centered on x=0."""

    n_elements: int
    pitch: float            # m
    sound_speed: float      # m/s
    sampling_rate: float    # Hz
    center_frequency: float  # Hz
    fractional_bandwidth: float
    element_x: np.ndarray = field(default=None)  # filled in __post_init__

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError("n_elements must be >= 1")
        if not 0.0 < self.fractional_bandwidth <= 1.0:
            raise InvalidBandwidth(
                f"fractional_bandwidth must be in (0, 1], got {self.fractional_bandwidth}"
            )
        nyquist = 2.0 * self.center_frequency * (1.0 + self.fractional_bandwidth / 2.0)
        if self.sampling_rate < nyquist:
            raise ValueError(
                f"sampling_rate {self.sampling_rate} below pulse-band Nyquist {nyquist}"
            )
        if self.element_x is None:
            m = self.n_elements
            x = (np.arange(m) - (m - 1) / 2.0) * self.pitch
            object.__setattr__(self, "element_x", x)
        else:
            x = np.asarray(self.element_x, dtype=np.float64)
            if x.shape != (self.n_elements,):
                raise ValueError("element_x length must equal n_elements")
            if np.any(np.diff(x) <= 0):
                raise ValueError("element x positions must be strictly increasing")
            object.__setattr__(self, "element_x", x)


@dataclass(frozen=True)
class Absorber:
    x: float          # m
    z: float          # m, depth > 0
    radius: float = 0.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.z <= 0:
            raise ValueError("absorber must be in front of the array (z > 0)")
        if self.radius < 0 or self.amplitude <= 0:
            raise ValueError("radius must be >= 0 and amplitude > 0")


@dataclass(frozen=True)
class Phantom:
    absorbers: tuple

    @classmethod
    def from_points(cls, points) -> "Phantom":
        return cls(absorbers=tuple(points))


@dataclass(frozen=True)
class RfFrame:
    """Raw multi-channel time series, one row per element."""

    geometry: ArrayGeometry
    samples: np.ndarray  # (M, T) float64
    channel_snr_db: float | None = None

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]


def synth_pulse(f0: float, fractional_bandwidth: float, fs: float) -> np.ndarray:
    """Gaussian-modulated cosine pulse with a given -6 dB fractional bandwidth.

    The pulse is symmetric with unit peak at its center sample and truncated
    where the Gaussian envelope falls below 1e-4 of the peak.

    Raises:
        InvalidBandwidth: bandwidth outside (0, 1].
    """
    if not 0.0 < fractional_bandwidth <= 1.0:
        raise InvalidBandwidth(
            f"fractional bandwidth must be in (0, 1], got {fractional_bandwidth}"
        )
    tpr_db = 20.0 * np.log10(PULSE_TRUNCATION)
    t_cut = gausspulse(
        "cutoff", fc=f0, bw=fractional_bandwidth, bwr=-6, tpr=tpr_db
    )
    half = int(np.ceil(t_cut * fs))
    t = np.arange(-half, half + 1) / fs
    return gausspulse(t, fc=f0, bw=fractional_bandwidth, bwr=-6)


def simulate_rf(geometry: ArrayGeometry, phantom: Phantom, t_max: float) -> RfFrame:
    """Simulates one RF frame for a point-absorber phantom.

    Each absorber contributes amplitude/d times the emission pulse delayed by
    d/c on every channel; fractional arrival times are split linearly between
    the two adjacent samples.

    Raises:
        TargetOutOfRange: an absorber lies beyond t_max * c of some element.
    """
    fs = geometry.sampling_rate
    c = geometry.sound_speed
    n_t = int(np.ceil(t_max * fs))
    samples = np.zeros((geometry.n_elements, n_t))
    pulse = synth_pulse(
        geometry.center_frequency, geometry.fractional_bandwidth, fs
    )
    center = (len(pulse) - 1) // 2
    idx = np.arange(len(pulse))

    for ab in phantom.absorbers:
        dx = geometry.element_x - ab.x
        d = np.hypot(dx, ab.z)
        if np.any(d > t_max * c):
            raise TargetOutOfRange(
                f"absorber at ({ab.x}, {ab.z}) beyond t_max*c = {t_max * c:.4g} m"
            )
        tau = d / c * fs  # fractional sample index of arrival
        for m in range(geometry.n_elements):
            pos = tau[m] + idx - center
            k = np.floor(pos).astype(np.int64)
            frac = pos - k
            contrib = (ab.amplitude / d[m]) * pulse
            lo_ok = (k >= 0) & (k < n_t)
            hi_ok = (k + 1 >= 0) & (k + 1 < n_t)
            np.add.at(samples[m], k[lo_ok], (1.0 - frac[lo_ok]) * contrib[lo_ok])
            np.add.at(samples[m], k[hi_ok] + 1, frac[hi_ok] * contrib[hi_ok])

    return RfFrame(geometry=geometry, samples=samples)


def add_channel_noise(frame: RfFrame, snr_db: float, rng_seed: int) -> RfFrame:
    """Adds i.i.d. Gaussian channel noise at a prescribed SNR.

    Signal power is the mean square over the nonzero-support samples. Noise
    streams are derived per channel from (seed, channel index), so output is
    deterministic and independent of how channels are iterated.

    Raises:
        ZeroSignal: the frame carries no signal to reference the SNR against.
    """
    support = frame.samples != 0.0
    if not np.any(support):
        raise ZeroSignal("cannot set an SNR on an all-zero frame")
    p_sig = np.mean(frame.samples[support] ** 2)
    sigma = np.sqrt(p_sig / 10.0 ** (snr_db / 10.0))
    noisy = frame.samples.copy()
    for m in range(frame.samples.shape[0]):
        rng = np.random.default_rng([int(rng_seed), m])
        noisy[m] += sigma * rng.standard_normal(frame.samples.shape[1])
    return replace(frame, samples=noisy, channel_snr_db=float(snr_db))
