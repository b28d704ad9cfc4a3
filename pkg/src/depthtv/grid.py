"""Image-grid containers and column-major vectorisation.

All pixel fields are M x N float64 arrays indexed (row, col). The shared
vector layout is column-major: vector index ``i`` holds pixel
``(i % M, i // M)``, so a full grid flattens to length ``n = M * N``.
Containers are immutable after construction and safe to share.
"""

from dataclasses import dataclass

import numpy as np


def _freeze(arr):
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def _check_field(values, name):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 2 or arr.shape[1] < 2:
        raise ValueError(
            f"{name} needs at least 2 rows and 2 columns (difference stencils "
            f"need neighbours), got {arr.shape}"
        )
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True)
class DepthGrid:
    """Dense per-pixel depth field in metres."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze(_check_field(self.values, "depth grid")))

    @property
    def rows(self):
        return self.values.shape[0]

    @property
    def cols(self):
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape


@dataclass(frozen=True)
class IntensityGrid:
    """Grayscale image with values in [0, 1]; colour inputs are converted on ingest."""

    values: np.ndarray

    def __post_init__(self):
        arr = _check_field(self.values, "intensity grid")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("intensity values must lie in [0, 1]")
        object.__setattr__(self, "values", _freeze(arr))

    @property
    def rows(self):
        return self.values.shape[0]

    @property
    def cols(self):
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape


@dataclass(frozen=True)
class SparseDepth:
    """Sparse depth samples: boolean mask plus metric values on the mask.

    Off-mask entries of ``values`` are normalised to zero so equal sample
    sets compare bit-identical. A zero-sample instance is representable
    (files parse before they are solvable); operations that need samples
    raise instead.
    """

    mask: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        mask = np.asarray(self.mask)
        if mask.dtype != np.bool_:
            raise ValueError("sample mask must be boolean")
        vals = _check_field(self.values, "sparse depth values")
        if mask.shape != vals.shape:
            raise ValueError(f"mask shape {mask.shape} != values shape {vals.shape}")
        if mask.shape[0] < 2 or mask.shape[1] < 2:
            raise ValueError("sample grid needs at least 2 rows and 2 columns")
        if mask.any() and vals[mask].min() < 0.0:
            raise ValueError("sampled depth values must be >= 0")
        vals = np.where(mask, vals, 0.0)
        object.__setattr__(self, "mask", _freeze(mask))
        object.__setattr__(self, "values", _freeze(vals))

    @property
    def rows(self):
        return self.mask.shape[0]

    @property
    def cols(self):
        return self.mask.shape[1]

    @property
    def shape(self):
        return self.mask.shape

    @property
    def count(self):
        return int(self.mask.sum())

    def sample_arrays(self):
        """Sample coordinates and values ordered by ascending vector index."""
        cols, rows = np.nonzero(self.mask.T)
        return rows, cols, self.values[rows, cols]


def vectorize(g):
    """Column-major flatten: output index c*M + r holds pixel (r, c)."""
    values = g.values if hasattr(g, "values") else np.asarray(g, dtype=np.float64)
    return values.flatten(order="F")


def devectorize(v, rows, cols):
    """Inverse of :func:`vectorize`; rebuilds the M x N grid."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size != rows * cols:
        raise ValueError(f"vector of length {v.size} does not fill a {rows}x{cols} grid")
    return DepthGrid(v.reshape((rows, cols), order="F"))
