"""Watch the reweighted sparse iteration descend its objective.

The sparse-regularized beamformer minimizes  w'Rw + beta * ||X'w||_1  under a
unit-gain constraint by repeatedly solving a weighted quadratic problem. This
demo prints the objective and the fraction of near-zero snapshot outputs after
each iteration at an off-axis pixel, where sparsification is what suppresses
the sidelobe. Run:

    python3 demos/04_sparse_iteration.py
"""

import numpy as np

from pabeam import (
    Absorber,
    ArrayGeometry,
    FocalPoint,
    MsmvConfig,
    Phantom,
    add_channel_noise,
    apply_dl,
    build_snapshots,
    default_dl_factor,
    estimate,
    msmv_weight,
    mv_weight,
    simulate_rf,
)
from pabeam.beamformers import msmv_objective

geometry = ArrayGeometry(
    n_elements=64,
    pitch=0.38e-3,
    sound_speed=1540.0,
    sampling_rate=100e6,
    center_frequency=5e6,
    fractional_bandwidth=0.77,
)
phantom = Phantom.from_points([Absorber(0.0, 0.030, amplitude=10.0)])
frame = add_channel_noise(simulate_rf(geometry, phantom, 50e-6), 50.0, 1)

# a pixel 1.5 mm off the target axis: DAS sees a sidelobe here
snaps = build_snapshots(frame, FocalPoint(1.5e-3, 0.030), L=32, K=2)
r = apply_dl(estimate(snaps), default_dl_factor(32))

w0 = mv_weight(r).values
f0 = msmv_objective(r, snaps, w0, beta=1.0)
mags0 = np.abs(snaps.columns.T @ w0)
print(f"iter  0 (mv start)  objective {f0:10.4f}  "
      f"outputs < 1% of max: {np.mean(mags0 < 0.01 * mags0.max()):.0%}")

for k in range(1, 11):
    w = msmv_weight(r, snaps, MsmvConfig(beta=1.0, n_iter=k)).values
    f = msmv_objective(r, snaps, w, beta=1.0)
    mags = np.abs(snaps.columns.T @ w)
    print(f"iter {k:2d}             objective {f:10.4f}  "
          f"outputs < 1% of max: {np.mean(mags < 0.01 * mags.max()):.0%}")

print()
print("The objective never increases, and more and more snapshot outputs are")
print("driven toward zero: that is the l1 penalty at work.")
