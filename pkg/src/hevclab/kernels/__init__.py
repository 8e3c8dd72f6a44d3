"""Hot-kernel dispatch: compiled extension when built, NumPy otherwise.

Both backends are integer-exact and bit-identical; the compiled one is
roughly an order of magnitude faster on the encoder inner loops.  Set
``HEVCLAB_KERNELS=numpy`` to force the fallback, or call
:func:`use_backend` (used by the benchmark and the parity tests).
"""

from __future__ import annotations

import os

from . import _ref

INTRA_ANGLES = _ref.INTRA_ANGLES
N_MODES = _ref.N_MODES
PLANAR = _ref.PLANAR
DC = _ref.DC

try:
    from . import _native
except ImportError:
    _native = None

_BACKENDS = {"numpy": _ref}
if _native is not None:
    _BACKENDS["native"] = _native

BACKEND = os.environ.get("HEVCLAB_KERNELS", "native" if _native else "numpy")
if BACKEND not in _BACKENDS:
    raise ImportError(
        f"kernel backend {BACKEND!r} unavailable (have: {sorted(_BACKENDS)})"
    )

_impl = _BACKENDS[BACKEND]


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def use_backend(name: str) -> str:
    """Switch the active backend; returns the previous one."""
    global _impl, BACKEND
    if name not in _BACKENDS:
        raise ValueError(f"kernel backend {name!r} unavailable (have: {sorted(_BACKENDS)})")
    previous = BACKEND
    BACKEND = name
    _impl = _BACKENDS[name]
    return previous


def predict_block(mode, top, left, n):
    return _impl.predict_block(mode, top, left, n)


def predict_many(modes, top, left, n):
    return _impl.predict_many(modes, top, left, n)


def satd(residual):
    return _impl.satd(residual)


def rmd_satd(block, top, left):
    return _impl.rmd_satd(block, top, left)


def fetch_reference(recon, coded, x, y, n):
    return _impl.fetch_reference(recon, coded, x, y, n)
