"""Training losses: RD-weighted cross-entropy and expectation regression."""

from __future__ import annotations

import numpy as np

PROB_FLOOR = 1e-12


def size_loss(probs: np.ndarray, labels: np.ndarray, rd_loss: np.ndarray,
              th_rd: float, w: float):
    """Cross-entropy where easy samples (rd_loss < th_rd) are down-weighted
    by w.  Returns (mean loss, gradient w.r.t. the logits)."""
    if not 0.0 < w <= 1.0:
        raise ValueError("w must be in (0, 1]")
    n = probs.shape[0]
    scale = np.where(rd_loss < th_rd, w, 1.0)
    p = np.clip(probs, PROB_FLOOR, None)
    per_sample = -(labels * np.log(p)).sum(axis=1)
    loss = float((scale * per_sample).mean())
    dlogits = scale[:, None] * (probs - labels) / n
    return loss, dlogits


def mnrc_loss(pred: np.ndarray, target: np.ndarray):
    """Batch-mean squared error over 3-component expectation vectors.

    Returns (loss, gradient w.r.t. pred): loss = (1/N) sum_i |t_i - p_i|^2,
    gradient 2 (p - t) / N.
    """
    n = pred.shape[0]
    diff = pred - target
    loss = float((diff * diff).sum() / n)
    return loss, 2.0 * diff / n
