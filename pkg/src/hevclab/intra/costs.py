"""QP-derived Lagrangian cost model and the coefficient-rate surrogate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CostModel:
    """lambda/Qstep pair for one QP (HEVC-style relations)."""

    qp: int
    lam: float
    qstep: float

    @classmethod
    def for_qp(cls, qp: int) -> "CostModel":
        if not 0 <= qp <= 51:
            raise ValueError(f"qp {qp} outside [0, 51]")
        return cls(qp=qp, lam=0.57 * 2.0 ** ((qp - 12) / 3.0),
                   qstep=2.0 ** ((qp - 4) / 6.0))


# Signaling surrogate: one split flag per CU at depths 0..2, one PU-size
# flag per 8x8 CU; exp-Golomb-style length for quantized coefficients.
SPLIT_FLAG_BITS = 1
PU_FLAG_BITS = 1


def coeff_bits_batch(q: np.ndarray) -> np.ndarray:
    """Rate of each quantized block in a (K, N, N) stack: zero coefficients
    cost nothing, the rest 2*floor(log2|c|) + 3 (length including sign)."""
    a = np.abs(q)
    nz = a > 0
    # ints < 2**53 convert exactly; frexp exponent - 1 == floor(log2)
    exps = (np.frexp(a.astype(np.float64))[1] - 1) * nz
    return 2 * exps.sum(axis=(-2, -1)) + 3 * nz.sum(axis=(-2, -1))


def coeff_bits(q: np.ndarray) -> int:
    return int(coeff_bits_batch(q[None])[0])
