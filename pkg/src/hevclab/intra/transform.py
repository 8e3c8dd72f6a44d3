"""Orthonormal DCT-II transform, quantization, and reconstruction."""

from __future__ import annotations

import numpy as np

from .costs import coeff_bits


def _dct_matrix(n: int) -> np.ndarray:
    k = np.arange(n)[:, None].astype(np.float64)
    x = np.arange(n)[None, :].astype(np.float64)
    m = np.sqrt(2.0 / n) * np.cos(np.pi * (2 * x + 1) * k / (2 * n))
    m[0, :] = np.sqrt(1.0 / n)
    return m

_DCT = {n: _dct_matrix(n) for n in (4, 8, 16, 32, 64)}


def round_half_away(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def transform_quantize_batch(residuals: np.ndarray, qstep: float) -> np.ndarray:
    """Forward DCT + uniform quantization (round half away from zero) of a
    (K, N, N) residual stack. Returns quantized int64 coefficients."""
    n = residuals.shape[-1]
    m = _DCT[n]
    coeffs = m @ residuals.astype(np.float64) @ m.T
    return round_half_away(coeffs / qstep).astype(np.int64)


def reconstruct_batch(preds: np.ndarray, q: np.ndarray, qstep: float) -> np.ndarray:
    """Dequantize, inverse-transform, add predictions, clip to [0, 255]."""
    n = preds.shape[-1]
    m = _DCT[n]
    rec_res = m.T @ (q.astype(np.float64) * qstep) @ m
    rec = preds.astype(np.float64) + round_half_away(rec_res)
    return np.clip(rec, 0, 255).astype(np.uint8)


def transform_quantize(residual: np.ndarray, qstep: float):
    """Single-block forward path; returns (quantized block, rate bits)."""
    q = transform_quantize_batch(residual[None], qstep)[0]
    return q, coeff_bits(q)


def reconstruct(pred: np.ndarray, q: np.ndarray, qstep: float) -> np.ndarray:
    return reconstruct_batch(pred[None], q[None], qstep)[0]
