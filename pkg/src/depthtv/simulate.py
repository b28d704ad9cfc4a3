"""Synthetic piecewise-planar scenes and range-sensor acquisition.

Scenes are a receding ground plane capped by a constant far background,
overwritten by constant-depth boxes; intensity is a shaded base with the
boxes and optional texture-only stripes painted on top, so depth edges and
intensity-only edges sit at exactly known pixel coordinates. Acquisition
draws a Bernoulli pixel mask inside an elevation band, adds Gaussian noise
whose standard deviation grows linearly with depth, and drops returns
beyond the maximum range.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .grid import DepthGrid, IntensityGrid, SparseDepth

_SHADING_AMPLITUDE = 0.02
_SHADING_SIGMA = 6.0


@dataclass(frozen=True)
class Box:
    """Half-open pixel rectangle [top, bottom) x [left, right) with constant
    depth and intensity."""

    top: int
    left: int
    bottom: int
    right: int
    depth: float
    intensity: float

    def __post_init__(self):
        if not (self.top < self.bottom and self.left < self.right):
            raise ValueError(f"degenerate rectangle {self}")
        if self.depth <= 0:
            raise ValueError("box depth must be > 0")
        if not (0.0 <= self.intensity <= 1.0):
            raise ValueError("box intensity must lie in [0, 1]")


@dataclass(frozen=True)
class Stripe:
    """Intensity-only rectangle: paints intensity, leaves depth untouched."""

    top: int
    left: int
    bottom: int
    right: int
    intensity: float

    def __post_init__(self):
        if not (self.top < self.bottom and self.left < self.right):
            raise ValueError(f"degenerate rectangle {self}")
        if not (0.0 <= self.intensity <= 1.0):
            raise ValueError("stripe intensity must lie in [0, 1]")


@dataclass(frozen=True)
class SceneSpec:
    rows: int = 128
    cols: int = 128
    ground_plane: tuple = (2.0, 0.1)  # depth at bottom row, added per row upward
    background_depth: float = 20.0
    boxes: tuple = ()
    texture_stripes: tuple = ()
    seed: int = 0

    def __post_init__(self):
        if self.rows < 2 or self.cols < 2:
            raise ValueError("scene needs at least 2 rows and 2 columns")
        bottom, gradient = self.ground_plane
        if bottom <= 0 or self.background_depth <= 0:
            raise ValueError("depths must be > 0")
        if gradient < 0:
            raise ValueError("ground gradient must be >= 0")
        for rect in tuple(self.boxes) + tuple(self.texture_stripes):
            if rect.top < 0 or rect.left < 0 or rect.bottom > self.rows or rect.right > self.cols:
                raise ValueError(f"rectangle out of bounds: {rect}")
        object.__setattr__(self, "boxes", tuple(self.boxes))
        object.__setattr__(self, "texture_stripes", tuple(self.texture_stripes))


@dataclass(frozen=True)
class AcquisitionSpec:
    sampling_rate: float = 0.0625
    sigma0: float = 0.02
    sigma1: float = 0.005
    max_range: float = 100.0
    fov_rows: tuple = None  # (start, stop) half-open row band; None = all rows
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.sampling_rate <= 1.0):
            raise ValueError("sampling_rate must lie in (0, 1]")
        if self.sigma0 < 0 or self.sigma1 < 0:
            raise ValueError("noise coefficients must be >= 0")
        if self.max_range <= 0:
            raise ValueError("max_range must be > 0")
        if self.fov_rows is not None:
            start, stop = self.fov_rows
            if start < 0 or stop <= start:
                raise ValueError(f"bad fov_rows {self.fov_rows}")


def generate_scene(spec: SceneSpec):
    """Deterministic (DepthGrid, IntensityGrid) pair for a scene spec."""
    rows, cols = spec.rows, spec.cols
    bottom, gradient = spec.ground_plane
    row = np.arange(rows, dtype=np.float64)[:, None]
    ground = bottom + (rows - 1 - row) * gradient
    depth = np.minimum(np.broadcast_to(ground, (rows, cols)), spec.background_depth).copy()

    rng = np.random.default_rng(spec.seed)
    shading = ndimage.gaussian_filter(rng.standard_normal((rows, cols)), _SHADING_SIGMA)
    peak = np.abs(shading).max()
    if peak > 0:
        shading *= _SHADING_AMPLITUDE / peak
    intensity = 0.55 - 0.15 * (row / (rows - 1)) + shading
    intensity = np.broadcast_to(intensity, (rows, cols)).copy()

    for box in spec.boxes:
        depth[box.top:box.bottom, box.left:box.right] = box.depth
        intensity[box.top:box.bottom, box.left:box.right] = box.intensity
    for stripe in spec.texture_stripes:
        intensity[stripe.top:stripe.bottom, stripe.left:stripe.right] = stripe.intensity

    return DepthGrid(depth), IntensityGrid(np.clip(intensity, 0.0, 1.0))


def random_scene_spec(rows, cols, seed, n_boxes=6, n_stripes=2):
    """Edge-rich scene: seeded random boxes at distinct depths plus
    texture-only stripes. Box intensities alternate between dark and bright
    bands so every depth edge carries real image contrast."""
    rng = np.random.default_rng(seed)
    boxes = []
    for i in range(n_boxes):
        h = int(rng.integers(rows // 8, rows // 3 + 1))
        w_ = int(rng.integers(cols // 8, cols // 3 + 1))
        top = int(rng.integers(1, rows - h))
        left = int(rng.integers(1, cols - w_))
        depth = float(rng.uniform(1.5, 16.0))
        intensity = float(rng.uniform(0.75, 0.95) if i % 2 else rng.uniform(0.05, 0.25))
        boxes.append(Box(top, left, top + h, left + w_, depth, intensity))
    stripes = []
    for _ in range(n_stripes):
        h = int(rng.integers(rows // 10, rows // 4 + 1))
        w_ = int(rng.integers(cols // 10, cols // 4 + 1))
        top = int(rng.integers(1, rows - h))
        left = int(rng.integers(1, cols - w_))
        stripes.append(Stripe(top, left, top + h, left + w_, float(rng.uniform(0.05, 0.95))))
    return SceneSpec(
        rows=rows, cols=cols, boxes=tuple(boxes), texture_stripes=tuple(stripes), seed=seed
    )


def sample_lidar(truth: DepthGrid, acq: AcquisitionSpec) -> SparseDepth:
    """Noisy Bernoulli samples of the true depth within the elevation band;
    returns beyond max_range are dropped, values are clamped at zero."""
    rows, cols = truth.shape
    rng = np.random.default_rng(acq.seed)
    draw = rng.random((rows, cols)) < acq.sampling_rate
    noise = rng.standard_normal((rows, cols))

    fov = np.zeros((rows, cols), dtype=bool)
    if acq.fov_rows is None:
        fov[:] = True
    else:
        start, stop = acq.fov_rows
        fov[start:stop, :] = True

    mask = draw & fov & (truth.values <= acq.max_range)
    if not mask.any():
        raise ValueError("acquisition produced zero samples")
    std = acq.sigma0 + acq.sigma1 * truth.values
    values = np.where(mask, np.maximum(truth.values + std * noise, 0.0), 0.0)
    return SparseDepth(mask, values)
