"""File formats and run configuration.

RF frames and raw image planes share the same interchange pattern: a raw
little-endian float32 binary next to a JSON sidecar describing it, so the
metrics stage never re-derives pipeline state. Display output is 8-bit
grayscale PGM (P5).
"""

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .beamformers import Method, MsmvConfig
from .covariance import default_dl_factor
from .delays import FocalPoint
from .errors import ConfigError
from .metrics import MetricsReport, TargetMetrics, TargetSpec
from .phantom import Absorber, ArrayGeometry, Phantom, RfFrame
from .pipeline import ImageGrid, PaImage, finalize

RF_MAGIC = "PARF"
RF_VERSION = 1


# ---------------------------------------------------------------------------
# Run configuration


@dataclass(frozen=True)
class RunConfig:
    geometry: ArrayGeometry
    phantom: Phantom | None
    grid: ImageGrid
    method: Method
    L: int
    K: int
    dl_factor: float
    msmv: MsmvConfig
    noise_snr_db: float | None
    noise_seed: int
    dynamic_range_db: float
    t_max: float
    workers: int


def _get(raw: dict, path: str, default=None, required: bool = False):
    node = raw
    parts = path.split(".")
    for i, key in enumerate(parts):
        if not isinstance(node, dict) or key not in node:
            if required:
                raise ConfigError(f"missing required config field: {path}")
            return default
        node = node[key]
    return node


def _num(raw: dict, path: str, default=None, required: bool = False):
    v = _get(raw, path, default, required)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"config field {path} must be a number, got {v!r}")
    return v


def resolve_config(raw: dict) -> RunConfig:
    """Fills in defaults and validates a raw config dict.

    Defaults mirror the reference imaging setup: 128 elements at 0.3 mm pitch,
    5 MHz center frequency, 77% bandwidth, 1540 m/s, fs = 20 MHz, L = M/2,
    K = 2, diagonal loading 1/(100 L), beta = 1 with 10 iterations, 50 dB
    dynamic range.

    Raises:
        ConfigError: naming the JSON path of the offending field.
    """
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")

    m = int(_num(raw, "geometry.n_elements", 128))
    try:
        geometry = ArrayGeometry(
            n_elements=m,
            pitch=float(_num(raw, "geometry.pitch", 0.3e-3)),
            sound_speed=float(_num(raw, "geometry.sound_speed", 1540.0)),
            sampling_rate=float(_num(raw, "geometry.sampling_rate", 20e6)),
            center_frequency=float(_num(raw, "geometry.center_frequency", 5e6)),
            fractional_bandwidth=float(
                _num(raw, "geometry.fractional_bandwidth", 0.77)
            ),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"geometry: {exc}") from exc

    phantom = None
    absorbers = _get(raw, "phantom.absorbers")
    if absorbers is not None:
        if not isinstance(absorbers, list) or not absorbers:
            raise ConfigError("phantom.absorbers must be a non-empty list")
        pts = []
        for i, ab in enumerate(absorbers):
            try:
                pts.append(
                    Absorber(
                        x=float(_num(ab, "x", required=True)),
                        z=float(_num(ab, "z", required=True)),
                        radius=float(_num(ab, "radius", 1e-4)),
                        amplitude=float(_num(ab, "amplitude", 1.0)),
                    )
                )
            except ConfigError as exc:
                raise ConfigError(f"phantom.absorbers[{i}]: {exc}") from exc
            except ValueError as exc:
                raise ConfigError(f"phantom.absorbers[{i}]: {exc}") from exc
        phantom = Phantom.from_points(pts)

    wavelength = geometry.sound_speed / geometry.center_frequency
    x_min = float(_num(raw, "grid.x_min", -10e-3))
    x_max = float(_num(raw, "grid.x_max", 10e-3))
    z_min = float(_num(raw, "grid.z_min", 15e-3))
    z_max = float(_num(raw, "grid.z_max", 70e-3))
    # default resolution: quarter wavelength axially, half laterally
    nx_default = max(2, round((x_max - x_min) / (wavelength / 2)) + 1)
    nz_default = max(2, round((z_max - z_min) / (wavelength / 4)) + 1)
    try:
        grid = ImageGrid(
            x_min=x_min,
            x_max=x_max,
            z_min=z_min,
            z_max=z_max,
            nx=int(_num(raw, "grid.nx", nx_default)),
            nz=int(_num(raw, "grid.nz", nz_default)),
        )
    except ConfigError as exc:
        raise ConfigError(f"grid: {exc}") from exc

    method_name = _get(raw, "method", "msmv")
    try:
        method = Method(str(method_name).lower())
    except ValueError as exc:
        raise ConfigError(f"method: unknown method {method_name!r}") from exc

    L = int(_num(raw, "L", m // 2))
    if not 1 <= L <= m:
        raise ConfigError(f"L: {L} outside [1, {m}]")
    K = int(_num(raw, "K", 2))
    if K < 0:
        raise ConfigError("K: must be >= 0")
    dl = float(_num(raw, "dl", default_dl_factor(L)))
    if dl < 0:
        raise ConfigError("dl: must be >= 0")

    try:
        msmv = MsmvConfig(
            beta=float(_num(raw, "msmv.beta", 1.0)),
            n_iter=int(_num(raw, "msmv.n_iter", 10)),
            early_stop=bool(_get(raw, "msmv.early_stop", False)),
            early_stop_tol=float(_num(raw, "msmv.early_stop_tol", 1e-6)),
            epsilon_floor_rel=float(_num(raw, "msmv.epsilon_floor_rel", 1e-12)),
            penalty_window=str(_get(raw, "msmv.penalty_window", "full")),
        )
    except ValueError as exc:
        raise ConfigError(f"msmv: {exc}") from exc

    snr_db = _num(raw, "noise.snr_db")
    seed = int(_num(raw, "noise.seed", 0))

    t_max = _num(raw, "t_max")
    if t_max is None:
        if phantom is not None:
            d_max = max(
                float(np.max(np.hypot(geometry.element_x - ab.x, ab.z)))
                for ab in phantom.absorbers
            )
        else:
            d_max = grid.z_max + abs(grid.x_max)
        # pulse tail margin: 2 us covers the truncated emission pulse
        t_max = d_max / geometry.sound_speed + 2e-6
    t_max = float(t_max)

    dr = float(_num(raw, "dynamic_range_db", 50.0))
    if dr <= 0:
        raise ConfigError("dynamic_range_db: must be > 0")
    workers = int(_num(raw, "workers", 1))
    if workers < 1:
        raise ConfigError("workers: must be >= 1")

    return RunConfig(
        geometry=geometry,
        phantom=phantom,
        grid=grid,
        method=method,
        L=L,
        K=K,
        dl_factor=dl,
        msmv=msmv,
        noise_snr_db=None if snr_db is None else float(snr_db),
        noise_seed=seed,
        dynamic_range_db=dr,
        t_max=t_max,
        workers=workers,
    )


def config_to_dict(cfg: RunConfig) -> dict:
    """Fully resolved config as a plain JSON-serializable dict.

    Re-resolving this dict reproduces the run exactly, so it doubles as the
    run manifest.
    """
    out = {
        "geometry": {
            "n_elements": cfg.geometry.n_elements,
            "pitch": cfg.geometry.pitch,
            "sound_speed": cfg.geometry.sound_speed,
            "sampling_rate": cfg.geometry.sampling_rate,
            "center_frequency": cfg.geometry.center_frequency,
            "fractional_bandwidth": cfg.geometry.fractional_bandwidth,
        },
        "grid": asdict(cfg.grid),
        "method": cfg.method.value,
        "L": cfg.L,
        "K": cfg.K,
        "dl": cfg.dl_factor,
        "msmv": asdict(cfg.msmv),
        "noise": {"snr_db": cfg.noise_snr_db, "seed": cfg.noise_seed},
        "dynamic_range_db": cfg.dynamic_range_db,
        "t_max": cfg.t_max,
        "workers": cfg.workers,
    }
    if cfg.phantom is not None:
        out["phantom"] = {
            "absorbers": [asdict(ab) for ab in cfg.phantom.absorbers]
        }
    return out


def load_config(path) -> RunConfig:
    with open(path) as f:
        return resolve_config(json.load(f))


# ---------------------------------------------------------------------------
# RF frame files


def _pair(base) -> tuple[Path, Path]:
    base = Path(base)
    if base.suffix in (".bin", ".json"):
        base = base.with_suffix("")
    return base.with_suffix(".bin"), base.with_suffix(".json")


def write_rf(base, frame: RfFrame) -> None:
    """Writes an RF frame as <base>.bin (f32le, element-major) + <base>.json."""
    bin_path, json_path = _pair(base)
    frame.samples.astype("<f4").tofile(bin_path)
    header = {
        "magic": RF_MAGIC,
        "version": RF_VERSION,
        "n_elements": frame.geometry.n_elements,
        "n_samples": frame.n_samples,
        "sampling_rate": frame.geometry.sampling_rate,
        "sound_speed": frame.geometry.sound_speed,
        "center_frequency": frame.geometry.center_frequency,
        "fractional_bandwidth": frame.geometry.fractional_bandwidth,
        "element_x": list(frame.geometry.element_x),
        "sample_encoding": "f32le",
        "channel_snr_db": frame.channel_snr_db,
    }
    json_path.write_text(json.dumps(header, indent=2))


def read_rf(base) -> RfFrame:
    bin_path, json_path = _pair(base)
    header = json.loads(json_path.read_text())
    if header.get("magic") != RF_MAGIC or header.get("version") != RF_VERSION:
        raise ConfigError(f"{json_path}: not a version-{RF_VERSION} {RF_MAGIC} header")
    element_x = np.asarray(header["element_x"], dtype=np.float64)
    pitch = float(np.median(np.diff(element_x))) if element_x.size > 1 else 1.0
    geometry = ArrayGeometry(
        n_elements=int(header["n_elements"]),
        pitch=pitch,
        sound_speed=float(header["sound_speed"]),
        sampling_rate=float(header["sampling_rate"]),
        center_frequency=float(header["center_frequency"]),
        fractional_bandwidth=float(header["fractional_bandwidth"]),
        element_x=element_x,
    )
    data = np.fromfile(bin_path, dtype="<f4").astype(np.float64)
    m, t = int(header["n_elements"]), int(header["n_samples"])
    if data.size != m * t:
        raise ConfigError(f"{bin_path}: expected {m * t} samples, found {data.size}")
    snr = header.get("channel_snr_db")
    return RfFrame(
        geometry=geometry,
        samples=data.reshape(m, t),
        channel_snr_db=None if snr is None else float(snr),
    )


# ---------------------------------------------------------------------------
# Image files


def write_image(base, image: PaImage) -> None:
    """Writes <base>.bin (raw beamformed plane, f32le, row-major nz x nx),
    <base>.json sidecar and <base>.pgm (8-bit view of the db plane)."""
    bin_path, json_path = _pair(base)
    image.beamformed.astype("<f4").tofile(bin_path)
    sidecar = {
        "grid": asdict(image.grid),
        "method": image.method.value,
        "dynamic_range_db": image.dynamic_range_db,
        "fallback_pixel_count": image.fallback_pixel_count,
        "plane_encoding": "f32le",
    }
    json_path.write_text(json.dumps(sidecar, indent=2))
    img = image if image.db is not None else finalize(image, image.dynamic_range_db)
    write_pgm(Path(base).with_suffix(".pgm"), img.db, img.dynamic_range_db)


def read_image(base) -> PaImage:
    """Reads a raw image pair and recomputes the envelope and db views."""
    bin_path, json_path = _pair(base)
    sidecar = json.loads(json_path.read_text())
    grid = ImageGrid(**sidecar["grid"])
    data = np.fromfile(bin_path, dtype="<f4").astype(np.float64)
    if data.size != grid.nx * grid.nz:
        raise ConfigError(
            f"{bin_path}: expected {grid.nx * grid.nz} pixels, found {data.size}"
        )
    image = PaImage(
        grid=grid,
        beamformed=data.reshape(grid.nz, grid.nx),
        method=Method(sidecar["method"]),
        fallback_pixel_count=int(sidecar.get("fallback_pixel_count", 0)),
        dynamic_range_db=float(sidecar.get("dynamic_range_db", 50.0)),
    )
    return finalize(image, image.dynamic_range_db)


def write_pgm(path, db: np.ndarray, dynamic_range_db: float) -> None:
    """8-bit binary PGM of a db plane; -DR maps to 0 and 0 dB to 255."""
    gray = np.rint((db + dynamic_range_db) / dynamic_range_db * 255.0)
    gray = np.clip(gray, 0, 255).astype(np.uint8)
    nz, nx = gray.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{nx} {nz}\n255\n".encode("ascii"))
        f.write(gray.tobytes())


# ---------------------------------------------------------------------------
# Profiles, targets and metrics reports


def write_profile_csv(path, profile: np.ndarray) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["x_m", "value_db"])
        for x, v in profile:
            writer.writerow([repr(float(x)), repr(float(v))])


def load_targets(path) -> TargetSpec:
    raw = json.loads(Path(path).read_text())
    targets = raw.get("targets")
    if not targets:
        raise ConfigError("targets: must be a non-empty list")
    pts = []
    for i, t in enumerate(targets):
        try:
            pts.append(FocalPoint(x=float(t["x"]), z=float(t["z"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"targets[{i}]: {exc}") from exc
    return TargetSpec(
        targets=tuple(pts), depth_tolerance=float(raw.get("depth_tolerance", 1e-3))
    )


METRICS_CSV_COLUMNS = ["method", "snr_db", "depth_m", "fwhm_m", "peak_sidelobe_db"]


def write_metrics_csv(path, reports: list[MetricsReport]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(METRICS_CSV_COLUMNS)
        for rep in reports:
            for t in rep.per_target:
                writer.writerow(
                    [
                        rep.method,
                        repr(rep.snr_db),
                        repr(t.depth),
                        repr(t.fwhm),
                        repr(t.peak_sidelobe_db),
                    ]
                )


def write_metrics_json(path, reports: list[MetricsReport]) -> None:
    Path(path).write_text(json.dumps([asdict(r) for r in reports], indent=2))


def read_metrics_json(path) -> list[MetricsReport]:
    raw = json.loads(Path(path).read_text())
    return [
        MetricsReport(
            method=r["method"],
            snr_db=r["snr_db"],
            per_target=tuple(TargetMetrics(**t) for t in r["per_target"]),
        )
        for r in raw
    ]
