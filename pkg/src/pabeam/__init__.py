"""Linear-array photoacoustic image formation.

A numpy/scipy toolkit for synthesizing point-absorber RF data and
reconstructing it with delay-and-sum, minimum-variance (Capon) and
sparse-regularized minimum-variance beamformers, plus the image metrics
(SNR, FWHM, peak sidelobe) used to compare them.
"""

from .beamformers import (
    Method,
    MsmvConfig,
    WeightVector,
    beamform_output,
    das_weight,
    msmv_weight,
    mv_weight,
    reweight_diagonal,
    sc_weight,
)
from .covariance import apply_dl, default_dl_factor, estimate
from .delays import FocalPoint, SnapshotMatrix, build_snapshots, delay_samples, extract_delayed
from .metrics import MetricsReport, TargetSpec, evaluate, fwhm, lateral_profile, peak_sidelobe, snr
from .numerics import spd_solve
from .phantom import (
    Absorber,
    ArrayGeometry,
    Phantom,
    RfFrame,
    add_channel_noise,
    simulate_rf,
    synth_pulse,
)
from .pipeline import ImageGrid, PaImage, envelope_detect, finalize, log_compress, reconstruct

__version__ = "0.1.0"
