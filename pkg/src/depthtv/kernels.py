"""Hot-kernel dispatch: compiled extension when available, numpy otherwise.

The native lane is selected at import time. ``DEPTHTV_BACKEND=numpy`` (or
``native``) forces a lane; ``set_backend`` switches at runtime for tests and
benchmarks. Both lanes produce bit-identical results.
"""

import os

import numpy as np

from . import _kernels_numpy

try:
    from . import _kernels_native
except ImportError:
    _kernels_native = None

_BACKENDS = {"numpy": _kernels_numpy}
if _kernels_native is not None:
    _BACKENDS["native"] = _kernels_native


def available_backends():
    return tuple(sorted(_BACKENDS))


def _initial_backend():
    forced = os.environ.get("DEPTHTV_BACKEND", "auto").lower()
    if forced in _BACKENDS:
        return _BACKENDS[forced]
    if forced not in ("auto", ""):
        raise ImportError(
            f"DEPTHTV_BACKEND={forced!r} is not available; built backends: {available_backends()}"
        )
    return _BACKENDS.get("native", _kernels_numpy)


_impl = _initial_backend()


def backend_name():
    return _impl.NAME


def set_backend(name):
    """Switch the active kernel lane; returns the previously active name."""
    global _impl
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; built backends: {available_backends()}")
    previous = _impl.NAME
    _impl = _BACKENDS[name]
    return previous


def get_backend(name):
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; built backends: {available_backends()}")
    return _BACKENDS[name]


def _c2d(arr):
    return np.ascontiguousarray(arr, dtype=np.float64)


def first_diff(x):
    return _impl.first_diff(_c2d(x))


def first_diff_adjoint(yr, yc):
    return _impl.first_diff_adjoint(_c2d(yr), _c2d(yc))


def second_diff(x):
    return _impl.second_diff(_c2d(x))


def second_diff_adjoint(yr, yc):
    return _impl.second_diff_adjoint(_c2d(yr), _c2d(yc))


def soft_threshold(v, tau):
    return _impl.soft_threshold(np.ascontiguousarray(v, dtype=np.float64), float(tau))


def nearest_fill(rows, cols, sample_r, sample_c, sample_v):
    return _impl.nearest_fill(
        int(rows),
        int(cols),
        np.ascontiguousarray(sample_r, dtype=np.int64),
        np.ascontiguousarray(sample_c, dtype=np.int64),
        np.ascontiguousarray(sample_v, dtype=np.float64),
    )


def canny_nms(mag, dbin):
    out = _impl.canny_nms(_c2d(mag), np.ascontiguousarray(dbin, dtype=np.uint8))
    return out.astype(bool, copy=False)


def hysteresis(strong, weak):
    out = _impl.hysteresis(
        np.ascontiguousarray(strong, dtype=np.uint8),
        np.ascontiguousarray(weak, dtype=np.uint8),
    )
    return out.astype(bool, copy=False)


def median_jumps(edge, coarse, window, threshold):
    return _impl.median_jumps(
        np.ascontiguousarray(edge, dtype=np.uint8),
        _c2d(coarse),
        int(window),
        float(threshold),
    )
