"""Confidence weights for the two regularisers, derived from the jump prior.

A unit step leaves exactly two adjacent nonzeros in its second difference
but only one in its first difference, located at the step index s given the
forward stencils. The curvature weight is therefore cleared at s and at the
second nonzero of the pair: s + M in the row block (the horizontally next
pixel under column-major layout) and s + 1 in the column block (the
vertically next pixel). The plain-TV weight stays at identity.
"""

from dataclasses import dataclass

import numpy as np

from .grid import _freeze


@dataclass(frozen=True)
class WeightMasks:
    """Diagonal weights for the curvature term (w1) and the prior-TV term
    (w2), stored as length-2n vectors with entries in [0, 1]."""

    rows: int
    cols: int
    w1: np.ndarray
    w2: np.ndarray

    def __post_init__(self):
        n2 = 2 * self.rows * self.cols
        w1 = np.asarray(self.w1, dtype=np.float64)
        w2 = np.asarray(self.w2, dtype=np.float64)
        for name, w in (("w1", w1), ("w2", w2)):
            if w.shape != (n2,):
                raise ValueError(f"{name} must have shape ({n2},), got {w.shape}")
            if w.min() < 0.0 or w.max() > 1.0:
                raise ValueError(f"{name} entries must lie in [0, 1]")
        object.__setattr__(self, "w1", _freeze(w1))
        object.__setattr__(self, "w2", _freeze(w2))

    def blocks(self, which):
        """(2, M, N) stack of the row/column blocks of w1 or w2."""
        w = {"w1": self.w1, "w2": self.w2}[which]
        n = self.rows * self.cols
        shape = (self.rows, self.cols)
        return np.stack(
            [w[:n].reshape(shape, order="F"), w[n:].reshape(shape, order="F")]
        )


def build_weights(prior) -> WeightMasks:
    """0/1 masks from the prior: w1 clears each jump support index and its
    stencil partner (s + M in the row block, s + 1 in the column block,
    clipped at the block end); w2 is identity."""
    rows, cols = prior.rows, prior.cols
    n = rows * cols
    support = np.abs(prior.uhat) > 0.0

    w1 = np.ones(2 * n)
    row_zero = support[:n].copy()
    row_zero[rows:] |= support[: n - rows]
    w1[:n][row_zero] = 0.0
    col_zero = support[n:].copy()
    col_zero[1:] |= support[n : 2 * n - 1]
    w1[n:][col_zero] = 0.0

    return WeightMasks(rows, cols, w1, np.ones(2 * n))


def identity_weights(rows, cols) -> WeightMasks:
    """All-ones masks; the curvature term acts everywhere (baseline mode)."""
    n2 = 2 * rows * cols
    return WeightMasks(rows, cols, np.ones(n2), np.ones(n2))
