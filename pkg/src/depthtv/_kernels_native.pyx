# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels.

Must stay bit-identical to ``_kernels_numpy``: same stencil evaluation
order, same nearest-sample tie-break, same even-window median rule.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "native"


def first_diff(const double[:, ::1] x):
    cdef Py_ssize_t m = x.shape[0], n = x.shape[1], r, c, cn, rn
    dr_arr = np.empty((m, n), dtype=np.float64)
    dc_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] dr = dr_arr, dc = dc_arr
    for r in range(m):
        rn = r + 1 if r + 1 < m else 0
        for c in range(n):
            cn = c + 1 if c + 1 < n else 0
            dr[r, c] = x[r, cn] - x[r, c]
            dc[r, c] = x[rn, c] - x[r, c]
    return dr_arr, dc_arr


def first_diff_adjoint(const double[:, ::1] yr, const double[:, ::1] yc):
    cdef Py_ssize_t m = yr.shape[0], n = yr.shape[1], r, c, cp, rp
    out_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for r in range(m):
        rp = r - 1 if r > 0 else m - 1
        for c in range(n):
            cp = c - 1 if c > 0 else n - 1
            out[r, c] = (yr[r, cp] - yr[r, c]) + (yc[rp, c] - yc[r, c])
    return out_arr


def second_diff(const double[:, ::1] x):
    cdef Py_ssize_t m = x.shape[0], n = x.shape[1], r, c, cn, cp, rn, rp
    hr_arr = np.empty((m, n), dtype=np.float64)
    hc_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] hr = hr_arr, hc = hc_arr
    for r in range(m):
        rn = r + 1 if r + 1 < m else 0
        rp = r - 1 if r > 0 else m - 1
        for c in range(n):
            cn = c + 1 if c + 1 < n else 0
            cp = c - 1 if c > 0 else n - 1
            hr[r, c] = (x[r, cn] - 2.0 * x[r, c]) + x[r, cp]
            hc[r, c] = (x[rn, c] - 2.0 * x[r, c]) + x[rp, c]
    return hr_arr, hc_arr


def second_diff_adjoint(const double[:, ::1] yr, const double[:, ::1] yc):
    cdef Py_ssize_t m = yr.shape[0], n = yr.shape[1], r, c, cn, cp, rn, rp
    out_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for r in range(m):
        rn = r + 1 if r + 1 < m else 0
        rp = r - 1 if r > 0 else m - 1
        for c in range(n):
            cn = c + 1 if c + 1 < n else 0
            cp = c - 1 if c > 0 else n - 1
            out[r, c] = ((yr[r, cn] - 2.0 * yr[r, c]) + yr[r, cp]) + \
                        ((yc[rn, c] - 2.0 * yc[r, c]) + yc[rp, c])
    return out_arr


def soft_threshold(v, double tau):
    shape = v.shape
    flat_arr = np.ascontiguousarray(v).reshape(-1)
    out_arr = np.empty_like(flat_arr)
    cdef const double[::1] src = flat_arr
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, size = src.shape[0]
    cdef double val, mag
    for i in range(size):
        val = src[i]
        mag = (val if val >= 0.0 else -val) - tau
        if mag <= 0.0:
            out[i] = 0.0
        else:
            out[i] = mag if val > 0.0 else -mag
    return out_arr.reshape(shape)


def nearest_fill(Py_ssize_t rows, Py_ssize_t cols,
                 const long long[::1] sample_r, const long long[::1] sample_c,
                 const double[::1] sample_v):
    cdef Py_ssize_t k = sample_r.shape[0], r, c, j
    cdef long long best, d2, dr, dc
    cdef Py_ssize_t best_j
    out_arr = np.empty((rows, cols), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for r in range(rows):
        for c in range(cols):
            best = -1
            best_j = 0
            for j in range(k):
                dr = sample_r[j] - r
                dc = sample_c[j] - c
                d2 = dr * dr + dc * dc
                if best < 0 or d2 < best:
                    best = d2
                    best_j = j
            out[r, c] = sample_v[best_j]
    return out_arr


def canny_nms(const double[:, ::1] mag, const unsigned char[:, ::1] dbin):
    cdef Py_ssize_t m = mag.shape[0], n = mag.shape[1], r, c
    cdef int b
    cdef double g, na, nb
    out_arr = np.zeros((m, n), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    for r in range(1, m - 1):
        for c in range(1, n - 1):
            g = mag[r, c]
            b = dbin[r, c]
            if b == 0:
                na = mag[r, c - 1]; nb = mag[r, c + 1]
            elif b == 1:
                na = mag[r - 1, c - 1]; nb = mag[r + 1, c + 1]
            elif b == 2:
                na = mag[r - 1, c]; nb = mag[r + 1, c]
            else:
                na = mag[r - 1, c + 1]; nb = mag[r + 1, c - 1]
            if g > na and g >= nb:
                out[r, c] = 1
    return out_arr


def hysteresis(const unsigned char[:, ::1] strong, const unsigned char[:, ::1] weak):
    cdef Py_ssize_t m = strong.shape[0], n = strong.shape[1], r, c, rr, cc, top
    cdef Py_ssize_t r2, c2
    out_arr = np.zeros((m, n), dtype=np.uint8)
    cdef unsigned char[:, ::1] out = out_arr
    stack_arr = np.empty(m * n, dtype=np.int64)
    cdef long long[::1] stack = stack_arr
    top = 0
    for r in range(m):
        for c in range(n):
            if strong[r, c] and not out[r, c]:
                out[r, c] = 1
                stack[top] = r * n + c
                top += 1
                while top > 0:
                    top -= 1
                    rr = stack[top] // n
                    cc = stack[top] % n
                    for r2 in range(rr - 1 if rr > 0 else 0,
                                    rr + 2 if rr + 2 <= m else m):
                        for c2 in range(cc - 1 if cc > 0 else 0,
                                        cc + 2 if cc + 2 <= n else n):
                            if weak[r2, c2] and not out[r2, c2]:
                                out[r2, c2] = 1
                                stack[top] = r2 * n + c2
                                top += 1
    return out_arr


cdef double _median_sorted(double* buf, Py_ssize_t size):
    # insertion sort; windows are small
    cdef Py_ssize_t i, j
    cdef double key
    for i in range(1, size):
        key = buf[i]
        j = i - 1
        while j >= 0 and buf[j] > key:
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = key
    if size % 2 == 1:
        return buf[size // 2]
    return (buf[size // 2 - 1] + buf[size // 2]) / 2.0


def median_jumps(const unsigned char[:, ::1] edge, const double[:, ::1] coarse,
                 int window, double threshold):
    cdef Py_ssize_t m = coarse.shape[0], n = coarse.shape[1], r, c, i, lo, hi
    cdef Py_ssize_t na_, nb_
    cdef double da, db, d
    jr_arr = np.zeros((m, n), dtype=np.float64)
    jc_arr = np.zeros((m, n), dtype=np.float64)
    cdef double[:, ::1] jr = jr_arr, jc = jc_arr
    buf_arr = np.empty(window, dtype=np.float64)
    cdef double[::1] buf = buf_arr
    cdef double* bp = &buf[0]
    for r in range(m):
        for c in range(n):
            if not edge[r, c]:
                continue
            # row jump: left window vs right window along row r
            lo = c - window if c - window > 0 else 0
            na_ = c - lo
            for i in range(na_):
                bp[i] = coarse[r, lo + i]
            da = _median_sorted(bp, na_) if na_ > 0 else 0.0
            hi = c + 1 + window if c + 1 + window < n else n
            nb_ = hi - (c + 1)
            for i in range(nb_):
                bp[i] = coarse[r, c + 1 + i]
            db = _median_sorted(bp, nb_) if nb_ > 0 else 0.0
            if na_ > 0 and nb_ > 0:
                d = db - da
                if d > threshold or -d > threshold:
                    jr[r, c] = d
            # column jump: window above vs window below along column c
            lo = r - window if r - window > 0 else 0
            na_ = r - lo
            for i in range(na_):
                bp[i] = coarse[lo + i, c]
            da = _median_sorted(bp, na_) if na_ > 0 else 0.0
            hi = r + 1 + window if r + 1 + window < m else m
            nb_ = hi - (r + 1)
            for i in range(nb_):
                bp[i] = coarse[r + 1 + i, c]
            db = _median_sorted(bp, nb_) if nb_ > 0 else 0.0
            if na_ > 0 and nb_ > 0:
                d = db - da
                if d > threshold or -d > threshold:
                    jc[r, c] = d
    return jr_arr, jc_arr
