"""Pure-numpy implementations of the hot kernels.

Semantics here are the contract; the compiled backend must match these
functions bit-for-bit (same stencils, same tie-breaks, same median rule).
"""

import numpy as np
from scipy import ndimage

NAME = "numpy"

_EIGHT_CONNECTED = np.ones((3, 3), dtype=int)

# NMS neighbour offsets per quantised gradient direction bin:
# 0 horizontal gradient, 1 down-right diagonal, 2 vertical, 3 down-left diagonal.
_NMS_OFFSETS = ((0, -1, 0, 1), (-1, -1, 1, 1), (-1, 0, 1, 0), (-1, 1, 1, -1))


def first_diff(x):
    """Periodic forward differences: along the row (next column) and down the column."""
    dr = np.roll(x, -1, axis=1) - x
    dc = np.roll(x, -1, axis=0) - x
    return dr, dc


def first_diff_adjoint(yr, yc):
    return (np.roll(yr, 1, axis=1) - yr) + (np.roll(yc, 1, axis=0) - yc)


def second_diff(x):
    """Periodic centred second differences along rows and columns."""
    hr = np.roll(x, -1, axis=1) - 2.0 * x + np.roll(x, 1, axis=1)
    hc = np.roll(x, -1, axis=0) - 2.0 * x + np.roll(x, 1, axis=0)
    return hr, hc


def second_diff_adjoint(yr, yc):
    # The centred stencil is self-adjoint.
    hr, _ = second_diff(yr)
    _, hc = second_diff(yc)
    return hr + hc


def soft_threshold(v, tau):
    return np.sign(v) * np.maximum(np.abs(v) - tau, 0.0)


def nearest_fill(rows, cols, sample_r, sample_c, sample_v):
    """Nearest-sample fill; ties broken by the sample order given.

    Callers pass samples sorted by ascending column-major vector index, so
    argmin's first-hit rule implements the smaller-vector-index tie-break.
    """
    out = np.empty((rows, cols), dtype=np.float64)
    pr, pc = np.indices((rows, cols))
    pr = pr.ravel()
    pc = pc.ravel()
    k = sample_r.size
    chunk = max(1, (1 << 22) // max(k, 1))
    for start in range(0, pr.size, chunk):
        sl = slice(start, start + chunk)
        d2 = (pr[sl, None] - sample_r[None, :]) ** 2 + (pc[sl, None] - sample_c[None, :]) ** 2
        out[pr[sl], pc[sl]] = sample_v[np.argmin(d2, axis=1)]
    return out


def canny_nms(mag, dbin):
    """Keep pixels that are maximal against both neighbours along their
    gradient direction bin; the outer border is always suppressed.

    The comparison is strict against the earlier neighbour (smaller row,
    then smaller column) and non-strict against the later one, so a tied
    two-pixel plateau thins to its earlier pixel instead of staying two
    pixels wide.
    """
    keep = np.zeros(mag.shape, dtype=bool)
    for b, (r0, c0, r1, c1) in enumerate(_NMS_OFFSETS):
        na = np.roll(np.roll(mag, -r0, axis=0), -c0, axis=1)
        nb = np.roll(np.roll(mag, -r1, axis=0), -c1, axis=1)
        keep |= (dbin == b) & (mag > na) & (mag >= nb)
    keep[0, :] = keep[-1, :] = False
    keep[:, 0] = keep[:, -1] = False
    return keep


def hysteresis(strong, weak):
    """Weak pixels 8-connected to a strong pixel survive (strong must be a
    subset of weak)."""
    strong = strong.astype(bool, copy=False)
    if not strong.any():
        return np.zeros(strong.shape, dtype=bool)
    labels, _ = ndimage.label(weak.astype(bool, copy=False), structure=_EIGHT_CONNECTED)
    keep = np.unique(labels[strong])
    keep = keep[keep != 0]
    return np.isin(labels, keep)


def median_jumps(edge, coarse, window, threshold):
    """Signed depth jumps at edge pixels from side-window medians.

    Row jump compares medians of the ``window`` pixels right and left of the
    edge in its row; column jump compares below against above. Windows are
    clipped at the border; an empty side means no jump. Jumps at or below
    ``threshold`` in magnitude are zeroed.
    """
    rows, cols = coarse.shape
    jr = np.zeros((rows, cols), dtype=np.float64)
    jc = np.zeros((rows, cols), dtype=np.float64)
    for r, c in zip(*np.nonzero(edge.astype(bool, copy=False))):
        left = coarse[r, max(0, c - window):c]
        right = coarse[r, c + 1:c + 1 + window]
        if left.size and right.size:
            d = np.median(right) - np.median(left)
            if abs(d) > threshold:
                jr[r, c] = d
        up = coarse[max(0, r - window):r, c]
        down = coarse[r + 1:r + 1 + window, c]
        if up.size and down.size:
            d = np.median(down) - np.median(up)
            if abs(d) > threshold:
                jc[r, c] = d
    return jr, jc
