from .costs import CostModel
from .encoder import (
    EARLY_SPLIT,
    EARLY_TERMINATE,
    RD_CHECK,
    EncodeControl,
    EncodeResult,
    EncodeStats,
    FrameState,
    LeafResult,
    ModeCost,
    PartitionTree,
    encode_ctu_full,
    encode_frame,
    fetch_reference,
    full_leaf_evals,
    psnr_db,
    rdo_leaf,
    rough_mode_decision,
)
from .modes import RMD_PREFIX, derive_mpm, mode_bits

__all__ = [
    "CostModel", "EncodeControl", "EncodeResult", "EncodeStats", "FrameState",
    "LeafResult", "ModeCost", "PartitionTree", "RD_CHECK", "EARLY_TERMINATE",
    "EARLY_SPLIT", "RMD_PREFIX", "derive_mpm", "mode_bits", "encode_ctu_full",
    "encode_frame", "fetch_reference", "full_leaf_evals", "psnr_db",
    "rdo_leaf", "rough_mode_decision",
]
