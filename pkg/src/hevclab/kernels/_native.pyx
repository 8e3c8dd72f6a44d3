# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for intra prediction and SATD.

Bit-identical to the NumPy reference in ``_ref.py``; all arithmetic is
integer (arithmetic right shifts match Python's floor semantics).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef int[33] ANGLES
ANGLES[:] = [32, 26, 21, 17, 13, 9, 5, 2, 0,
             -2, -5, -9, -13, -17, -21, -26, -32,
             -26, -21, -17, -13, -9, -5, -2, 0,
             2, 5, 9, 13, 17, 21, 26, 32]

cdef int inv_angle(int angle):
    if angle == -2: return -4096
    if angle == -5: return -1638
    if angle == -9: return -910
    if angle == -13: return -630
    if angle == -17: return -482
    if angle == -21: return -390
    if angle == -26: return -315
    return -256  # -32


cdef int log2_int(int n):
    cdef int k = 0
    while (1 << k) < n:
        k += 1
    return k


cdef void _fill_dc(int[:, ::1] out, const int[::1] top, const int[::1] left, int n):
    cdef long long acc = 0
    cdef int i, j, dc
    for i in range(1, n + 1):
        acc += top[i] + left[i]
    dc = <int>((acc + n) >> (log2_int(n) + 1))
    for i in range(n):
        for j in range(n):
            out[i, j] = dc


cdef void _fill_planar(int[:, ::1] out, const int[::1] top, const int[::1] left, int n):
    cdef int shift = log2_int(n) + 1
    cdef int tr = top[n + 1]
    cdef int bl = left[n + 1]
    cdef int x, y, h, v
    for y in range(n):
        for x in range(n):
            h = (n - 1 - x) * left[y + 1] + (x + 1) * tr
            v = (n - 1 - y) * top[x + 1] + (y + 1) * bl
            out[y, x] = (h + v + n) >> shift


cdef void _build_ref(int* ref, int* base_out, const int[::1] primary,
                     const int[::1] secondary, int angle, int n):
    # ref must hold at least 3n+1 ints; ref[base + k] = logical index k.
    cdef int base, k, neg, inv
    if angle >= 0:
        base = 0
        for k in range(2 * n + 1):
            ref[k] = primary[k]
    else:
        neg = (n * angle) >> 5  # prediction reads logical indices >= neg + 1
        base = -neg
        for k in range(n + 1):
            ref[base + k] = primary[k]
        inv = inv_angle(angle)
        for k in range(-1, neg, -1):
            ref[base + k] = secondary[(k * inv + 128) >> 8]
    base_out[0] = base


cdef void _fill_angular(int[:, ::1] out, const int[::1] top, const int[::1] left,
                        int mode, int n):
    cdef int angle = ANGLES[mode - 2]
    cdef bint vertical = mode >= 18
    cdef int ref_buf[193]  # 3*64 + 1
    cdef int base = 0
    cdef int scan, i, proj, idx, frac, v
    if vertical:
        _build_ref(ref_buf, &base, top, left, angle, n)
    else:
        _build_ref(ref_buf, &base, left, top, angle, n)
    for scan in range(n):
        proj = (scan + 1) * angle
        idx = proj >> 5
        frac = proj & 31
        for i in range(n):
            if frac == 0:
                v = ref_buf[base + 1 + idx + i]
            else:
                v = ((32 - frac) * ref_buf[base + 1 + idx + i]
                     + frac * ref_buf[base + 2 + idx + i] + 16) >> 5
            if vertical:
                out[scan, i] = v
            else:
                out[i, scan] = v


def predict_block(int mode, top, left, int n):
    cdef cnp.ndarray[int, ndim=2] out = np.empty((n, n), dtype=np.int32)
    cdef const int[::1] t = np.ascontiguousarray(top, dtype=np.int32)
    cdef const int[::1] l = np.ascontiguousarray(left, dtype=np.int32)
    if mode == 0:
        _fill_planar(out, t, l, n)
    elif mode == 1:
        _fill_dc(out, t, l, n)
    else:
        _fill_angular(out, t, l, mode, n)
    return out


cdef void _wht8(long long* v):
    cdef long long a0 = v[0] + v[4]
    cdef long long a4 = v[0] - v[4]
    cdef long long a1 = v[1] + v[5]
    cdef long long a5 = v[1] - v[5]
    cdef long long a2 = v[2] + v[6]
    cdef long long a6 = v[2] - v[6]
    cdef long long a3 = v[3] + v[7]
    cdef long long a7 = v[3] - v[7]
    cdef long long b0 = a0 + a2
    cdef long long b2 = a0 - a2
    cdef long long b1 = a1 + a3
    cdef long long b3 = a1 - a3
    cdef long long b4 = a4 + a6
    cdef long long b6 = a4 - a6
    cdef long long b5 = a5 + a7
    cdef long long b7 = a5 - a7
    v[0] = b0 + b1
    v[1] = b0 - b1
    v[2] = b2 + b3
    v[3] = b2 - b3
    v[4] = b4 + b5
    v[5] = b4 - b5
    v[6] = b6 + b7
    v[7] = b6 - b7


cdef void _wht4(long long* v):
    cdef long long a0 = v[0] + v[2]
    cdef long long a2 = v[0] - v[2]
    cdef long long a1 = v[1] + v[3]
    cdef long long a3 = v[1] - v[3]
    v[0] = a0 + a1
    v[1] = a0 - a1
    v[2] = a2 + a3
    v[3] = a2 - a3


cdef long long _satd_tile(long long* d, int t):
    # d is a flat t*t tile buffer, overwritten in place.
    cdef long long m[64]
    cdef int i, j
    cdef long long acc = 0
    for i in range(t):
        if t == 8:
            _wht8(d + 8 * i)
        else:
            _wht4(d + 4 * i)
    for j in range(t):
        for i in range(t):
            m[j * t + i] = d[i * t + j]
    for j in range(t):
        if t == 8:
            _wht8(m + 8 * j)
        else:
            _wht4(m + 4 * j)
    for i in range(t * t):
        acc += m[i] if m[i] >= 0 else -m[i]
    return acc >> (log2_int(t) + 1)


cdef long long _satd_mv(const int[:, ::1] res, int n):
    cdef long long total = 0
    cdef long long buf[64]
    cdef int ty, tx, i, j
    cdef int t = 8 if n >= 8 else 4
    for ty in range(0, n, t):
        for tx in range(0, n, t):
            for i in range(t):
                for j in range(t):
                    buf[i * t + j] = res[ty + i, tx + j]
            total += _satd_tile(buf, t)
    return total


def satd(residual):
    cdef const int[:, ::1] res = np.ascontiguousarray(residual, dtype=np.int32)
    return int(_satd_mv(res, res.shape[0]))


def rmd_satd(block, top, left):
    cdef const int[:, ::1] blk = np.ascontiguousarray(block, dtype=np.int32)
    cdef const int[::1] t = np.ascontiguousarray(top, dtype=np.int32)
    cdef const int[::1] l = np.ascontiguousarray(left, dtype=np.int32)
    cdef int n = blk.shape[0]
    cdef cnp.ndarray[long long, ndim=1] out = np.empty(35, dtype=np.int64)
    cdef cnp.ndarray[int, ndim=2] pred = np.empty((n, n), dtype=np.int32)
    cdef int[:, ::1] pv = pred
    cdef int[:, ::1] diff = np.empty((n, n), dtype=np.int32)
    cdef int mode, i, j
    for mode in range(35):
        if mode == 0:
            _fill_planar(pv, t, l, n)
        elif mode == 1:
            _fill_dc(pv, t, l, n)
        else:
            _fill_angular(pv, t, l, mode, n)
        for i in range(n):
            for j in range(n):
                diff[i, j] = blk[i, j] - pv[i, j]
        out[mode] = _satd_mv(diff, n)
    return out


def predict_many(modes, top, left, int n):
    cdef const int[::1] t = np.ascontiguousarray(top, dtype=np.int32)
    cdef const int[::1] l = np.ascontiguousarray(left, dtype=np.int32)
    cdef const int[::1] ms = np.ascontiguousarray(modes, dtype=np.int32)
    cdef int k = ms.shape[0]
    cdef cnp.ndarray[int, ndim=3] out = np.empty((k, n, n), dtype=np.int32)
    cdef int[:, :, ::1] ov = out
    cdef int i, mode
    for i in range(k):
        mode = ms[i]
        if mode == 0:
            _fill_planar(ov[i], t, l, n)
        elif mode == 1:
            _fill_dc(ov[i], t, l, n)
        else:
            _fill_angular(ov[i], t, l, mode, n)
    return out


def fetch_reference(recon, coded, int x, int y, int n):
    cdef const unsigned char[:, ::1] rec = recon
    cdef const unsigned char[:, ::1] cod = coded.view(np.uint8)
    cdef int ph = rec.shape[0]
    cdef int pw = rec.shape[1]
    cdef int m = 4 * n + 1
    cdef int vals[257]
    cdef unsigned char av[257]
    cdef int i, k, sx, sy, first
    # scan order: left column bottom-up, corner, top row left-to-right
    for i in range(m):
        if i <= 2 * n:
            sx = x - 1
            sy = y + 2 * n - 1 - i
        else:
            sx = x + i - (2 * n + 1)
            sy = y - 1
        if 0 <= sx < pw and 0 <= sy < ph and cod[sy, sx]:
            vals[i] = rec[sy, sx]
            av[i] = 1
        else:
            vals[i] = 0
            av[i] = 0
    first = -1
    for i in range(m):
        if av[i]:
            first = i
            break
    if first < 0:
        for i in range(m):
            vals[i] = 128
    else:
        for i in range(first):
            vals[i] = vals[first]
        for i in range(first + 1, m):
            if not av[i]:
                vals[i] = vals[i - 1]
    cdef cnp.ndarray[int, ndim=1] top_out = np.empty(2 * n + 1, dtype=np.int32)
    cdef cnp.ndarray[int, ndim=1] left_out = np.empty(2 * n + 1, dtype=np.int32)
    top_out[0] = vals[2 * n]
    left_out[0] = vals[2 * n]
    for k in range(1, 2 * n + 1):
        left_out[k] = vals[2 * n - k]
        top_out[k] = vals[2 * n + k]
    return top_out, left_out
