"""Edge-guided jump prior: coarse depth fill, edge detection, and signed
depth-jump estimation across each edge pixel.

The pipeline is: nearest-sample upsampling of the sparse depth, Canny edges
on the intensity image, then windowed medians of the coarse depth on either
side of every edge pixel. The result is a per-pixel pair of signed jumps
(row direction, column direction) that is nonzero only on edge pixels and
vectorises to a length-2n guidance vector for the solver.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from . import kernels
from .grid import DepthGrid, SparseDepth, _check_field, _freeze

DEFAULT_JUMP_THRESHOLD = 0.05


@dataclass(frozen=True)
class CannyParams:
    """Gaussian smoothing width and hysteresis thresholds (relative to the
    maximum gradient magnitude)."""

    gaussian_sigma: float = 1.4
    low_threshold: float = 0.1
    high_threshold: float = 0.2

    def __post_init__(self):
        if self.gaussian_sigma <= 0:
            raise ValueError("gaussian_sigma must be > 0")
        if not (0.0 < self.low_threshold < self.high_threshold <= 1.0):
            raise ValueError("thresholds must satisfy 0 < low < high <= 1")


@dataclass(frozen=True)
class EdgeMask:
    """Binary per-pixel edge flags."""

    edge: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.edge)
        if arr.dtype != np.bool_ or arr.ndim != 2:
            raise ValueError("edge mask must be a 2-D boolean array")
        object.__setattr__(self, "edge", _freeze(arr))

    @property
    def rows(self):
        return self.edge.shape[0]

    @property
    def cols(self):
        return self.edge.shape[1]


@dataclass(frozen=True)
class InformingPrior:
    """Signed depth jumps per pixel: row direction and column direction."""

    jump_row: np.ndarray
    jump_col: np.ndarray

    def __post_init__(self):
        jr = _check_field(self.jump_row, "row jumps")
        jc = _check_field(self.jump_col, "column jumps")
        if jr.shape != jc.shape:
            raise ValueError(f"jump shapes differ: {jr.shape} vs {jc.shape}")
        object.__setattr__(self, "jump_row", _freeze(jr))
        object.__setattr__(self, "jump_col", _freeze(jc))

    @property
    def rows(self):
        return self.jump_row.shape[0]

    @property
    def cols(self):
        return self.jump_row.shape[1]

    @property
    def uhat(self):
        """Length-2n vector [vec(row jumps); vec(column jumps)]."""
        return np.concatenate(
            [self.jump_row.flatten(order="F"), self.jump_col.flatten(order="F")]
        )

    @classmethod
    def zero(cls, rows, cols):
        return cls(np.zeros((rows, cols)), np.zeros((rows, cols)))


def coarse_upsample(s: SparseDepth) -> DepthGrid:
    """Dense fill with each pixel's nearest sample value (Euclidean pixel
    distance, ties to the smaller column-major vector index)."""
    if s.count == 0:
        raise ValueError("cannot upsample zero samples")
    rows_idx, cols_idx, vals = s.sample_arrays()
    return DepthGrid(kernels.nearest_fill(s.rows, s.cols, rows_idx, cols_idx, vals))


def detect_edges(img, params: CannyParams) -> EdgeMask:
    """Canny edges: Gaussian smoothing, central-difference gradients,
    4-direction non-maximum suppression, hysteresis linking."""
    smoothed = ndimage.gaussian_filter(img.values, sigma=params.gaussian_sigma)
    gy, gx = np.gradient(smoothed)
    mag = np.hypot(gx, gy)
    peak = mag.max()
    if peak == 0.0:
        return EdgeMask(np.zeros(img.shape, dtype=bool))
    theta = np.arctan2(gy, gx)
    theta = np.where(theta < 0, theta + np.pi, theta)
    dbin = (np.floor((theta + np.pi / 8) / (np.pi / 4)).astype(np.int64) % 4).astype(np.uint8)
    survivors = kernels.canny_nms(mag, dbin)
    weak = survivors & (mag >= params.low_threshold * peak)
    strong = weak & (mag >= params.high_threshold * peak)
    return EdgeMask(kernels.hysteresis(strong, weak))


def estimate_jumps(e: EdgeMask, coarse: DepthGrid, window,
                   jump_threshold=DEFAULT_JUMP_THRESHOLD) -> InformingPrior:
    """Windowed-median jump estimates at edge pixels.

    For an edge pixel, the row jump is median(right window) - median(left
    window) over the ``window`` nearest pixels on each side in its row, kept
    only when its magnitude exceeds ``jump_threshold``; the column jump
    compares below against above. Border-clipped empty windows abstain.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    if (e.rows, e.cols) != coarse.shape:
        raise ValueError(f"edge mask {e.edge.shape} does not match grid {coarse.shape}")
    jr, jc = kernels.median_jumps(e.edge, coarse.values, window, jump_threshold)
    return InformingPrior(jr, jc)


def build_prior(s: SparseDepth, img, params: CannyParams, window,
                jump_threshold=DEFAULT_JUMP_THRESHOLD) -> InformingPrior:
    """Full prior pipeline: coarse fill, edge detection, jump estimation."""
    if s.shape != img.shape:
        raise ValueError(f"sparse depth {s.shape} does not match intensity {img.shape}")
    return estimate_jumps(
        detect_edges(img, params), coarse_upsample(s), window, jump_threshold
    )
