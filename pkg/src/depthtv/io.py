"""File formats: float depth images (PFM), 16-bit depth PNGs, sparse-sample
text files, log-depth colour exports, and the flat key-value config.

Wire contracts:

* ``.pfm`` -- grayscale portable float map, little-endian float32, rows
  stored bottom-to-top. Lossless at float32 precision.
* 16-bit depth PNG -- stored value = round(depth_metres * 256), 0 marks an
  invalid pixel.
* sparse text -- header line ``rows cols``, then one ``row col depth``
  record per sample, depth printed with 6 significant digits.
* config -- ``section.key = value`` lines, ``#`` comments.
"""

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .grid import DepthGrid, IntensityGrid, SparseDepth
from .metrics import EvalMask

DEPTH_PNG_SCALE = 256.0

DEFAULT_CONFIG = {
    "scene.rows": 128,
    "scene.cols": 128,
    "scene.seed": 0,
    "scene.ground_bottom_depth": 2.0,
    "scene.ground_row_gradient": 0.1,
    "scene.background_depth": 20.0,
    "scene.n_boxes": 6,
    "scene.n_stripes": 2,
    "scene.boxes": "",
    "scene.stripes": "",
    "acquisition.sampling_rate": 0.0625,
    "acquisition.sigma0": 0.02,
    "acquisition.sigma1": 0.005,
    "acquisition.max_range": 100.0,
    "acquisition.fov_row_start": 0,
    "acquisition.fov_row_stop": 0,  # 0 = full height
    "acquisition.seed": 0,
    "canny.gaussian_sigma": 1.4,
    "canny.low_threshold": 0.1,
    "canny.high_threshold": 0.2,
    "prior.window": 5,
    "prior.jump_threshold": 0.05,
    "solver.beta": 0.005,
    "solver.gamma": 0.001,
    "solver.rho": 0.05,
    "solver.max_iters": 6000,
    "solver.tol_primal": 1e-5,
    "solver.tol_dual": 1e-5,
}


# ---------------------------------------------------------------------------
# Portable float map


def write_pfm(path, values):
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("PFM writer takes a 2-D array")
    rows, cols = values.shape
    with open(path, "wb") as f:
        f.write(b"Pf\n")
        f.write(f"{cols} {rows}\n".encode("ascii"))
        f.write(b"-1.0\n")
        f.write(np.flipud(values).astype("<f4").tobytes())


def read_pfm(path):
    with open(path, "rb") as f:
        magic = f.readline().strip()
        if magic != b"Pf":
            raise ValueError(f"not a grayscale PFM file: magic {magic!r}")
        dims = f.readline().split()
        if len(dims) != 2:
            raise ValueError("malformed PFM dimension header")
        cols, rows = (int(v) for v in dims)
        if rows < 1 or cols < 1 or rows * cols > (1 << 30):
            raise ValueError(f"unreasonable PFM dimensions {rows}x{cols}")
        scale = float(f.readline())
        dtype = "<f4" if scale < 0 else ">f4"
        data = f.read(rows * cols * 4)
    if len(data) != rows * cols * 4:
        raise ValueError("truncated PFM payload")
    img = np.frombuffer(data, dtype=dtype).reshape(rows, cols)
    return np.flipud(img).astype(np.float64)


# ---------------------------------------------------------------------------
# Depth grids


def write_depth(path, grid: DepthGrid, valid=None):
    """Write depth by extension: .pfm float, .png 16-bit (x256, 0 = invalid)."""
    path = Path(path)
    if path.suffix == ".pfm":
        write_pfm(path, grid.values)
        return
    if path.suffix == ".png":
        stored = np.round(grid.values * DEPTH_PNG_SCALE)
        if stored.max() > 65535:
            warnings.warn("depth exceeds 16-bit range at x256 scale; clipping")
        stored = np.clip(stored, 0, 65535).astype(np.uint16)
        if valid is not None:
            stored = np.where(valid.mask if isinstance(valid, EvalMask) else valid, stored, 0)
        Image.fromarray(stored).save(path)  # uint16 maps to 16-bit grayscale
        return
    raise ValueError(f"unsupported depth extension {path.suffix!r}")


def read_depth_with_mask(path):
    """(DepthGrid, EvalMask): PFM -> full mask, 16-bit PNG -> stored > 0."""
    path = Path(path)
    if path.suffix == ".pfm":
        values = read_pfm(path)
        return DepthGrid(values), EvalMask.full(*values.shape)
    if path.suffix == ".png":
        stored = np.asarray(Image.open(path), dtype=np.uint16)
        if stored.ndim != 2:
            raise ValueError("depth PNG must be single-channel 16-bit")
        if not stored.any():
            raise ValueError("depth PNG has no valid pixels")
        return DepthGrid(stored / DEPTH_PNG_SCALE), EvalMask(stored > 0)
    raise ValueError(f"unsupported depth extension {path.suffix!r}")


def read_depth(path) -> DepthGrid:
    return read_depth_with_mask(path)[0]


# ---------------------------------------------------------------------------
# Intensity


def write_intensity(path, img: IntensityGrid):
    write_pfm(path, img.values)


def read_intensity(path) -> IntensityGrid:
    """Read intensity; PFM direct, otherwise any PIL image converted to
    grayscale in [0, 1]."""
    path = Path(path)
    if path.suffix == ".pfm":
        return IntensityGrid(np.clip(read_pfm(path), 0.0, 1.0))
    img = Image.open(path)
    if img.mode not in ("L", "I;16", "I"):
        img = img.convert("L")
    arr = np.asarray(img, dtype=np.float64)
    peak = 65535.0 if arr.max() > 255 else 255.0
    return IntensityGrid(np.clip(arr / peak, 0.0, 1.0))


# ---------------------------------------------------------------------------
# Sparse samples


def write_sparse(path, s: SparseDepth):
    rows_idx, cols_idx, vals = s.sample_arrays()
    lines = [f"{s.rows} {s.cols}"]
    lines.extend(
        f"{r} {c} {v:.6g}" for r, c, v in zip(rows_idx.tolist(), cols_idx.tolist(), vals.tolist())
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_sparse(path) -> SparseDepth:
    """Parse a sparse-sample file; duplicate pixels keep the last record
    (with a warning), out-of-bounds coordinates are an error. A body with
    zero records parses fine and fails later, at solve time."""
    text = Path(path).read_text(encoding="ascii")
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"{path}: empty sparse-sample file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"{path}: header must be 'rows cols'")
    rows, cols = int(header[0]), int(header[1])
    mask = np.zeros((rows, cols), dtype=bool)
    values = np.zeros((rows, cols), dtype=np.float64)
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"{path}: bad record {ln!r}")
        r, c, d = int(parts[0]), int(parts[1]), float(parts[2])
        if not (0 <= r < rows and 0 <= c < cols):
            raise ValueError(f"{path}: sample ({r}, {c}) outside {rows}x{cols}")
        if mask[r, c]:
            warnings.warn(f"{path}: duplicate sample at ({r}, {c}); last record wins")
        mask[r, c] = True
        values[r, c] = d
    return SparseDepth(mask, values)


# ---------------------------------------------------------------------------
# Colour export


def _hsv_to_rgb(h, s, v):
    sector = np.floor(h * 6.0)
    f = h * 6.0 - sector
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    lut = [(v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q)]
    sector = sector.astype(int) % 6
    rgb = np.zeros(h.shape + (3,))
    for idx, channels in enumerate(lut):
        sel = sector == idx
        for ch in range(3):
            rgb[..., ch][sel] = np.broadcast_to(channels[ch], h.shape)[sel]
    return rgb


def export_colorized(grid: DepthGrid, path):
    """8-bit colour render with hue linear in log(depth) between the scene
    minimum and maximum; non-positive depths are clamped up with a warning."""
    values = grid.values
    if values.min() <= 0.0:
        positive = values[values > 0.0]
        floor = positive.min() if positive.size else 1e-3
        warnings.warn("non-positive depths clamped for log colouring")
        values = np.maximum(values, floor)
    logd = np.log(values)
    lo, hi = float(logd.min()), float(logd.max())
    t = np.zeros_like(logd) if hi == lo else (logd - lo) / (hi - lo)
    hue = 0.70 * t  # red (near) to blue (far)
    rgb = _hsv_to_rgb(hue, np.ones_like(hue), np.ones_like(hue))
    Image.fromarray((rgb * 255.0).round().astype(np.uint8), mode="RGB").save(path)


# ---------------------------------------------------------------------------
# Config


def _coerce(key, raw):
    default = DEFAULT_CONFIG[key]
    if isinstance(default, bool):
        return raw.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def read_config(path):
    """Defaults overlaid with ``section.key = value`` lines from the file."""
    cfg = dict(DEFAULT_CONFIG)
    for lineno, ln in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if "=" not in ln:
            raise ValueError(f"{path}:{lineno}: expected 'section.key = value'")
        key, _, raw = ln.partition("=")
        key = key.strip()
        if key not in DEFAULT_CONFIG:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        cfg[key] = _coerce(key, raw.strip())
    return cfg


def write_config(path, cfg):
    lines = [f"{key} = {cfg[key]}" for key in sorted(cfg)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Frame bundles


@dataclass(frozen=True)
class FrameBundle:
    """One co-registered frame: intensity, sparse samples, optional truth."""

    frame_id: str
    intensity: IntensityGrid
    sparse: SparseDepth
    truth: DepthGrid = None
    eval_mask: EvalMask = None

    def __post_init__(self):
        if self.intensity.shape != self.sparse.shape:
            raise ValueError("intensity and sparse sample dimensions differ")
        if self.truth is not None and self.truth.shape != self.intensity.shape:
            raise ValueError("truth dimensions differ from intensity")
        if self.eval_mask is not None and self.eval_mask.mask.shape != self.intensity.shape:
            raise ValueError("evaluation mask dimensions differ from intensity")


def save_frame(directory, bundle: FrameBundle):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_intensity(directory / "intensity.pfm", bundle.intensity)
    write_sparse(directory / "sparse.txt", bundle.sparse)
    if bundle.truth is not None:
        write_depth(directory / "truth.pfm", bundle.truth)
    return directory


def load_frame(directory) -> FrameBundle:
    directory = Path(directory)
    intensity = read_intensity(directory / "intensity.pfm")
    sparse = read_sparse(directory / "sparse.txt")
    truth = None
    eval_mask = None
    truth_path = directory / "truth.pfm"
    if truth_path.exists():
        truth, eval_mask = read_depth_with_mask(truth_path)
    return FrameBundle(directory.name, intensity, sparse, truth, eval_mask)


def write_json(path, payload):
    """Canonical JSON: sorted keys, stable layout, trailing newline."""
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
