"""NumPy reference implementation of the encoder hot kernels.

All kernels are integer-exact: the compiled backend in ``_native.pyx``
must produce bit-identical results.  Reference layout for prediction:
``top`` and ``left`` are int32 arrays of length 2N+1 whose element 0 is
the shared corner sample; ``top[k]`` is the sample at (x+k-1, y-1) and
``left[k]`` the sample at (x-1, y+k-1).
"""

from __future__ import annotations

import numpy as np

# Displacement per mode 2..34 in 1/32-pel units (near-horizontal and
# near-vertical angles are densest).
INTRA_ANGLES = (
    32, 26, 21, 17, 13, 9, 5, 2, 0,        # 2..10 (10 = pure horizontal)
    -2, -5, -9, -13, -17, -21, -26, -32,   # 11..17
    -26, -21, -17, -13, -9, -5, -2, 0,     # 18..25 (26 = pure vertical)
    2, 5, 9, 13, 17, 21, 26, 32,           # 26..34
)

# Inverse displacement (rounded 8192/angle in 1/256 units) used to project
# the secondary reference for negative angles.
INV_ANGLES = {-2: -4096, -5: -1638, -9: -910, -13: -630,
              -17: -482, -21: -390, -26: -315, -32: -256}

PLANAR, DC = 0, 1
N_MODES = 35


def _hadamard(order: int) -> np.ndarray:
    h = np.array([[1]], dtype=np.int64)
    while h.shape[0] < order:
        h = np.block([[h, h], [h, -h]])
    return h

_H4 = _hadamard(4)
_H8 = _hadamard(8)


def predict_block(mode: int, top: np.ndarray, left: np.ndarray, n: int) -> np.ndarray:
    """Predict an NxN block from its reference arrays. Returns int32."""
    if mode == PLANAR:
        return _predict_planar(top, left, n)
    if mode == DC:
        return _predict_dc(top, left, n)
    return _predict_angular(mode, top, left, n)


def _predict_dc(top, left, n):
    shift = n.bit_length()  # log2(n) + 1
    dc = (int(top[1 : n + 1].sum()) + int(left[1 : n + 1].sum()) + n) >> shift
    return np.full((n, n), dc, dtype=np.int32)


def _predict_planar(top, left, n):
    shift = n.bit_length()
    xs = np.arange(n, dtype=np.int32)
    ys = np.arange(n, dtype=np.int32)
    t = top[1 : n + 1].astype(np.int32)
    l = left[1 : n + 1].astype(np.int32)
    tr = np.int32(top[n + 1])
    bl = np.int32(left[n + 1])
    horiz = (n - 1 - xs)[None, :] * l[:, None] + (xs + 1)[None, :] * tr
    vert = (n - 1 - ys)[:, None] * t[None, :] + (ys + 1)[:, None] * bl
    return (horiz + vert + n) >> shift


def _extended_ref(primary, secondary, angle, n):
    """1-D reference for an angular mode, offset so index 0 is the corner.

    Returns (ref, base) where ref[base + k] holds logical index k; negative
    k projects into the secondary reference via the inverse angle.
    """
    if angle >= 0:
        ref = primary[: 2 * n + 1].astype(np.int32)
        return ref, 0
    neg = (n * angle) >> 5  # prediction reads logical indices >= neg + 1
    ref = np.zeros(n + 1 - neg, dtype=np.int32)
    base = -neg
    ref[base : base + n + 1] = primary[: n + 1]
    inv = INV_ANGLES[angle]
    for k in range(-1, neg, -1):
        ref[base + k] = secondary[(k * inv + 128) >> 8]
    return ref, base


def _predict_angular(mode, top, left, n):
    angle = INTRA_ANGLES[mode - 2]
    vertical = mode >= 18
    primary, secondary = (top, left) if vertical else (left, top)
    ref, base = _extended_ref(primary, secondary, angle, n)

    out = np.empty((n, n), dtype=np.int32)
    for scan in range(n):
        proj = (scan + 1) * angle
        idx = proj >> 5
        frac = proj & 31
        lo = ref[base + 1 + idx : base + 1 + idx + n]
        if frac == 0:
            row = lo
        else:
            hi = ref[base + 2 + idx : base + 2 + idx + n]
            row = ((32 - frac) * lo + frac * hi + 16) >> 5
        if vertical:
            out[scan, :] = row
        else:
            out[:, scan] = row
    return out


def satd(residual: np.ndarray) -> int:
    """Sum of absolute Hadamard-transformed differences, 8x8-tiled.

    Blocks smaller than 8 use a 4x4 transform; each tile's coefficient sum
    is right-shifted by log2(tile)+1 before accumulation.
    """
    n = residual.shape[0]
    t = min(n, 8)
    h = _H8 if t == 8 else _H4
    shift = t.bit_length()  # log2(t) + 1
    res = residual.astype(np.int64)
    total = 0
    for ty in range(0, n, t):
        for tx in range(0, n, t):
            tile = res[ty : ty + t, tx : tx + t]
            coeffs = h @ tile @ h.T
            total += int(np.abs(coeffs).sum()) >> shift
    return total


def rmd_satd(block: np.ndarray, top: np.ndarray, left: np.ndarray) -> np.ndarray:
    """SATD of (block - prediction) for all 35 modes. Returns int64[35]."""
    n = block.shape[0]
    blk = block.astype(np.int32)
    out = np.empty(N_MODES, dtype=np.int64)
    for mode in range(N_MODES):
        out[mode] = satd(blk - predict_block(mode, top, left, n))
    return out


def predict_many(modes, top: np.ndarray, left: np.ndarray, n: int) -> np.ndarray:
    """Predictions for a list of modes, stacked to (K, N, N) int32."""
    return np.stack([predict_block(int(m), top, left, n) for m in modes])


def fetch_reference(recon: np.ndarray, coded: np.ndarray, x: int, y: int, n: int):
    """Reference arrays (top, left) of length 2N+1 sharing the corner.

    Scans left column bottom-up, corner, then top row; unavailable samples
    (outside the plane or not yet coded) take the nearest available one in
    scan order, and a fully unavailable border yields 128.
    """
    ph, pw = recon.shape
    m = 4 * n + 1
    px = np.empty(m, dtype=np.intp)
    py = np.empty(m, dtype=np.intp)
    px[: 2 * n + 1] = x - 1
    px[2 * n + 1 :] = np.arange(x, x + 2 * n)
    py[: 2 * n] = np.arange(y + 2 * n - 1, y - 1, -1)
    py[2 * n :] = y - 1

    inside = (px >= 0) & (px < pw) & (py >= 0) & (py < ph)
    cx = np.clip(px, 0, pw - 1)
    cy = np.clip(py, 0, ph - 1)
    vals = recon[cy, cx].astype(np.int32)
    avail = inside & coded[cy, cx]

    if not avail.any():
        vals[:] = 128
    else:
        idx = np.where(avail, np.arange(m), -1)
        np.maximum.accumulate(idx, out=idx)
        first = int(avail.argmax())
        idx[:first] = first
        vals = vals[idx]

    left = np.empty(2 * n + 1, dtype=np.int32)
    top = np.empty(2 * n + 1, dtype=np.int32)
    left[0] = top[0] = vals[2 * n]
    left[1:] = vals[2 * n - 1 :: -1]
    top[1:] = vals[2 * n + 1 :]
    return top, left
