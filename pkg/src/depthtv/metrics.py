"""Reconstruction error metrics over valid ground-truth pixels."""

from dataclasses import dataclass

import numpy as np

from .grid import _freeze


@dataclass(frozen=True)
class EvalMask:
    """Pixels where ground truth is valid (sparse ground truth supported)."""

    mask: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.mask)
        if arr.dtype != np.bool_ or arr.ndim != 2:
            raise ValueError("evaluation mask must be a 2-D boolean array")
        if not arr.any():
            raise ValueError("evaluation mask must select at least one pixel")
        object.__setattr__(self, "mask", _freeze(arr))

    @classmethod
    def full(cls, rows, cols):
        return cls(np.ones((rows, cols), dtype=bool))


def _masked_diff(x, truth, m):
    if x.shape != truth.shape or x.shape != m.mask.shape:
        raise ValueError(
            f"shape mismatch: x {x.shape}, truth {truth.shape}, mask {m.mask.shape}"
        )
    return (x.values - truth.values)[m.mask]


def mae(x, truth, m: EvalMask):
    """Mean absolute error in metres over masked pixels."""
    return float(np.mean(np.abs(_masked_diff(x, truth, m))))


def rmse(x, truth, m: EvalMask):
    """Root mean squared error in metres over masked pixels."""
    return float(np.sqrt(np.mean(np.square(_masked_diff(x, truth, m)))))
