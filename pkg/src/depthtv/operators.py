"""Periodic first/second difference operators and FFT inversion of their
normal equations.

Both operators map a length-n column-major vector to length 2n: the first n
entries are the row-direction block (differences taken along a row, i.e.
across columns), the last n the column-direction block. Periodic wrap makes
every block circulant, so ``a*I + b*H'H + c*D'D`` diagonalises under the 2D
DFT and solves in O(n log n).

Stencils (zero-based pixel (r, c), wrap mod M/N):

    first,  row block:  x(r, c+1) - x(r, c)
    first,  col block:  x(r+1, c) - x(r, c)
    second, row block:  x(r, c+1) - 2 x(r, c) + x(r, c-1)
    second, col block:  x(r+1, c) - 2 x(r, c) + x(r-1, c)
"""

from dataclasses import dataclass

import numpy as np

from . import kernels


def _as_image(x, rows, cols, expected):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size != expected:
        raise ValueError(f"expected vector of length {expected}, got shape {x.shape}")
    return x.reshape((rows, cols), order="F")


def _vec(img):
    return img.flatten(order="F")


def apply_first_diff(x, rows, cols):
    """[D_r x; D_c x] for column-major x of length rows*cols."""
    dr, dc = kernels.first_diff(_as_image(x, rows, cols, rows * cols))
    return np.concatenate([_vec(dr), _vec(dc)])


def apply_second_diff(x, rows, cols):
    """[H_r x; H_c x] for column-major x of length rows*cols."""
    hr, hc = kernels.second_diff(_as_image(x, rows, cols, rows * cols))
    return np.concatenate([_vec(hr), _vec(hc)])


@dataclass(frozen=True)
class DiffOperator:
    """First ("first") or second ("second") difference operator on an M x N grid."""

    kind: str
    rows: int
    cols: int

    def __post_init__(self):
        if self.kind not in ("first", "second"):
            raise ValueError(f"kind must be 'first' or 'second', got {self.kind!r}")
        if self.rows < 2 or self.cols < 2:
            raise ValueError("operators need at least a 2x2 grid")

    @property
    def n(self):
        return self.rows * self.cols

    def apply(self, x):
        if self.kind == "first":
            return apply_first_diff(x, self.rows, self.cols)
        return apply_second_diff(x, self.rows, self.cols)

    def adjoint(self, y):
        return apply_adjoint(self, y)


def apply_adjoint(op, y):
    """Exact adjoint of ``op.apply`` under the standard inner product."""
    n = op.n
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.size != 2 * n:
        raise ValueError(f"expected vector of length {2 * n}, got shape {y.shape}")
    yr = y[:n].reshape((op.rows, op.cols), order="F")
    yc = y[n:].reshape((op.rows, op.cols), order="F")
    if op.kind == "first":
        return _vec(kernels.first_diff_adjoint(yr, yc))
    return _vec(kernels.second_diff_adjoint(yr, yc))


def first_diff_eigenvalues(rows, cols):
    """Complex DFT eigenvalue fields (row block, column block) of D."""
    wc = np.exp(2j * np.pi * np.arange(cols) / cols) - 1.0
    wr = np.exp(2j * np.pi * np.arange(rows) / rows) - 1.0
    lam_row = np.broadcast_to(wc[None, :], (rows, cols)).copy()
    lam_col = np.broadcast_to(wr[:, None], (rows, cols)).copy()
    return lam_row, lam_col


def second_diff_eigenvalues(rows, cols):
    """Real DFT eigenvalue fields (row block, column block) of H."""
    wc = 2.0 * np.cos(2.0 * np.pi * np.arange(cols) / cols) - 2.0
    wr = 2.0 * np.cos(2.0 * np.pi * np.arange(rows) / rows) - 2.0
    lam_row = np.broadcast_to(wc[None, :], (rows, cols)).copy()
    lam_col = np.broadcast_to(wr[:, None], (rows, cols)).copy()
    return lam_row + 0j, lam_col + 0j


@dataclass(frozen=True)
class CirculantSpectrum:
    """Per-frequency eigenvalues of a circulant operator on an M x N grid."""

    rows: int
    cols: int
    eigenvalues: np.ndarray

    @classmethod
    def normal(cls, a, b, c, rows, cols):
        """Spectrum of a*I + b*H'H + c*D'D (real, >= a for a, b, c >= 0)."""
        dr, dc = first_diff_eigenvalues(rows, cols)
        hr, hc = second_diff_eigenvalues(rows, cols)
        eig = a + b * (np.abs(hr) ** 2 + np.abs(hc) ** 2) + c * (np.abs(dr) ** 2 + np.abs(dc) ** 2)
        return cls(rows, cols, eig)


def solve_normal_image(a, b, c, rhs_img, spectrum=None):
    """Image-space solve of (a*I + b*H'H + c*D'D) x = rhs via the real FFT."""
    if a <= 0:
        raise ValueError("a must be > 0 (system is singular or indefinite otherwise)")
    if b < 0 or c < 0:
        raise ValueError("b and c must be >= 0")
    rows, cols = rhs_img.shape
    if spectrum is None:
        spectrum = CirculantSpectrum.normal(a, b, c, rows, cols)
    eig_half = spectrum.eigenvalues[:, : cols // 2 + 1]
    return np.fft.irfft2(np.fft.rfft2(rhs_img) / eig_half, s=(rows, cols))


def circulant_solve(a, b, c, rhs, rows, cols):
    """Vector-space solve of (a*I + b*H'H + c*D'D) x = rhs."""
    rhs_img = _as_image(rhs, rows, cols, rows * cols)
    return _vec(solve_normal_image(a, b, c, rhs_img))
