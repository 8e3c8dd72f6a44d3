"""Reference quadtree intra encoder and its fast-decision hook points.

The exhaustive path (default :class:`EncodeControl`) is the oracle: every
node evaluates both its leaf coding and its split alternative and keeps
the cheaper tree.  Fast pipelines steer the identical recursion through a
control object; with all decisions left at RD-check and default candidate
counts the output is bit-identical to the oracle.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..frames import BlockRef, Frame, iter_blocks
from . import modes as intra_modes
from .costs import CostModel, coeff_bits_batch
from .transform import reconstruct_batch, transform_quantize_batch

RD_CHECK = "rd_check"
EARLY_TERMINATE = "early_term"
EARLY_SPLIT = "early_split"
ACTIONS = (RD_CHECK, EARLY_TERMINATE, EARLY_SPLIT)


class EncodeControl:
    """Per-block decision hooks; the defaults reproduce the oracle."""

    def split_action(self, block: BlockRef) -> str:
        return RD_CHECK

    def rmd_prefix(self, block: BlockRef) -> int:
        return intra_modes.RMD_PREFIX[block.depth]


@dataclass(frozen=True)
class ModeCost:
    mode: int
    j_had: float
    satd: int
    r_mode: int


@dataclass
class LeafResult:
    mode: int
    j_rdo: float
    sse: int
    r_total: int
    reconstruction: np.ndarray
    rmd_rank: int | None  # 1-based rank in the RMD prefix, None if via MPM


@dataclass
class PartitionTree:
    block: BlockRef
    split: bool
    j_subtree: float
    children: tuple["PartitionTree", ...] | None = None
    leaf: LeafResult | None = None
    j_leaf_alt: float | None = None
    j_split_alt: float | None = None

    def nodes(self):
        yield self
        if self.split:
            for child in self.children:
                yield from child.nodes()

    def leaves(self):
        for node in self.nodes():
            if not node.split:
                yield node

    def total_bits(self) -> int:
        bits = 0
        for node in self.nodes():
            if node.block.depth <= 3:
                bits += 1  # split flag (depths 0..2) or PU-size flag (depth 3)
            if not node.split:
                bits += node.leaf.r_total
        return bits

    def dump_lines(self) -> list[str]:
        lines = []
        for node in self.nodes():
            mode = -1 if node.split else node.leaf.mode
            b = node.block
            lines.append(f"{b.x} {b.y} {b.size} {int(node.split)} {mode} {node.j_subtree!r}")
        return lines


@dataclass
class EncodeStats:
    leaf_evals: int = 0
    rdo_mode_evals: int = 0
    actions: dict = field(default_factory=lambda: {d: {a: 0 for a in ACTIONS} for d in range(4)})
    reached: dict = field(default_factory=lambda: {d: 0 for d in range(5)})


@dataclass
class EncodeResult:
    trees: list[PartitionTree]
    total_bits: int
    psnr_db: float
    wall_ms: float
    stats: EncodeStats
    reconstruction: np.ndarray


def full_leaf_evals(frame: Frame) -> int:
    """Leaf evaluations the exhaustive encoder performs (341 per CTU)."""
    n_ctu = (frame.padded_width // 64) * (frame.padded_height // 64)
    return n_ctu * (1 + 4 + 16 + 64 + 256)


class FrameState:
    """Single-writer reconstruction buffer plus coded/mode bookkeeping."""

    def __init__(self, frame: Frame):
        ph, pw = frame.samples.shape
        self.recon = np.zeros((ph, pw), dtype=np.uint8)
        self.coded = np.zeros((ph, pw), dtype=bool)
        # chosen intra mode at 4x4 granularity, -1 where uncoded
        self.modes = np.full((ph // 4, pw // 4), -1, dtype=np.int16)

    def snapshot(self, block: BlockRef):
        ys = slice(block.y, block.y + block.size)
        xs = slice(block.x, block.x + block.size)
        gys = slice(block.y // 4, (block.y + block.size) // 4)
        gxs = slice(block.x // 4, (block.x + block.size) // 4)
        return (self.recon[ys, xs].copy(), self.coded[ys, xs].copy(),
                self.modes[gys, gxs].copy())

    def restore(self, block: BlockRef, snap) -> None:
        ys = slice(block.y, block.y + block.size)
        xs = slice(block.x, block.x + block.size)
        gys = slice(block.y // 4, (block.y + block.size) // 4)
        gxs = slice(block.x // 4, (block.x + block.size) // 4)
        self.recon[ys, xs] = snap[0]
        self.coded[ys, xs] = snap[1]
        self.modes[gys, gxs] = snap[2]

    def commit_leaf(self, block: BlockRef, leaf: LeafResult) -> None:
        ys = slice(block.y, block.y + block.size)
        xs = slice(block.x, block.x + block.size)
        self.recon[ys, xs] = leaf.reconstruction
        self.coded[ys, xs] = True
        self.modes[block.y // 4 : (block.y + block.size) // 4,
                   block.x // 4 : (block.x + block.size) // 4] = leaf.mode

    def neighbor_mode(self, px: int, py: int) -> int | None:
        if px < 0 or py < 0:
            return None
        if not self.coded[py, px]:
            return None
        return int(self.modes[py // 4, px // 4])


def fetch_reference(state: FrameState, block: BlockRef):
    """Reference arrays (top, left) of length 2N+1 sharing the corner.

    Unavailable samples take the nearest available one in the standard
    bottom-left-to-top-right scan; a fully unavailable border yields 128.
    """
    return kernels.fetch_reference(state.recon, state.coded, block.x, block.y,
                                   block.size)


def _mpms_for(state: FrameState, block: BlockRef):
    left = state.neighbor_mode(block.x - 1, block.y)
    above = state.neighbor_mode(block.x, block.y - 1)
    return intra_modes.derive_mpm(left, above)


def _rmd_order(orig: np.ndarray, top, left, cm: CostModel, mpms):
    satds = kernels.rmd_satd(orig, top, left)
    bits = np.full(intra_modes.N_MODES, 6, dtype=np.int64)
    for m in mpms:
        bits[m] = 2
    j = satds.astype(np.float64) + cm.lam * bits
    order = np.argsort(j, kind="stable")  # stable: ties keep the lower index
    return order, j, satds, bits


def rough_mode_decision(frame: Frame, state: FrameState, block: BlockRef,
                        cm: CostModel) -> list[ModeCost]:
    """All 35 modes ranked by Hadamard cost (ties to the lower index)."""
    orig = _block_samples(frame, block)
    top, left = fetch_reference(state, block)
    mpms = _mpms_for(state, block)
    order, j, satds, bits = _rmd_order(orig, top, left, cm, mpms)
    return [ModeCost(int(m), float(j[m]), int(satds[m]), int(bits[m])) for m in order]


def _block_samples(frame: Frame, block: BlockRef) -> np.ndarray:
    return frame.samples[block.y : block.y + block.size,
                         block.x : block.x + block.size].astype(np.int32)


def rdo_leaf(orig: np.ndarray, top, left, candidates, cm: CostModel,
             mpms, prefix_len: int) -> LeafResult:
    """Full RD evaluation of the candidate modes; returns the argmin.

    Ties keep the earlier list position.  ``prefix_len`` marks how many
    leading candidates came from the RMD ranking (for the rank record).
    All candidates are evaluated as one stacked batch.
    """
    n = orig.shape[0]
    preds = kernels.predict_many(candidates, top, left, n)
    q = transform_quantize_batch(orig[None] - preds, cm.qstep)
    mbits = np.array([intra_modes.mode_bits(m, mpms) for m in candidates])
    r_total = mbits + coeff_bits_batch(q)
    recs = reconstruct_batch(preds, q, cm.qstep)
    diff = orig[None] - recs.astype(np.int32)
    sse = (diff * diff).sum(axis=(1, 2))
    j = sse + cm.lam * r_total
    pos = int(np.argmin(j))  # first minimum: earlier list position wins ties
    rank = pos + 1 if pos < prefix_len else None
    return LeafResult(mode=candidates[pos], j_rdo=float(j[pos]), sse=int(sse[pos]),
                      r_total=int(r_total[pos]), reconstruction=recs[pos],
                      rmd_rank=rank)


def _candidate_list(order, mpms, prefix_len: int) -> list[int]:
    cands = [int(m) for m in order[:prefix_len]]
    for m in mpms:
        if m not in cands:
            cands.append(m)
    return cands


def _eval_leaf(frame: Frame, state: FrameState, block: BlockRef, cm: CostModel,
               control: EncodeControl, stats: EncodeStats) -> LeafResult:
    orig = _block_samples(frame, block)
    top, left = fetch_reference(state, block)
    mpms = _mpms_for(state, block)
    order, _, _, _ = _rmd_order(orig, top, left, cm, mpms)
    prefix = max(1, min(control.rmd_prefix(block), intra_modes.N_MODES))
    candidates = _candidate_list(order, mpms, prefix)
    stats.leaf_evals += 1
    stats.rdo_mode_evals += len(candidates)
    return rdo_leaf(orig, top, left, candidates, cm, mpms, prefix)


def _encode_node(frame: Frame, state: FrameState, block: BlockRef,
                 cm: CostModel, control: EncodeControl,
                 stats: EncodeStats) -> PartitionTree:
    depth = block.depth
    stats.reached[depth] += 1

    if depth == 4:
        leaf = _eval_leaf(frame, state, block, cm, control, stats)
        state.commit_leaf(block, leaf)
        return PartitionTree(block, split=False, j_subtree=leaf.j_rdo, leaf=leaf,
                             j_leaf_alt=leaf.j_rdo)

    action = control.split_action(block)
    stats.actions[depth][action] += 1
    flag_cost = cm.lam * 1.0  # split flag, or PU-size flag at depth 3

    leaf = None
    j_leaf = math.inf
    if action != EARLY_SPLIT:
        leaf = _eval_leaf(frame, state, block, cm, control, stats)
        j_leaf = leaf.j_rdo + flag_cost
        if action == EARLY_TERMINATE:
            state.commit_leaf(block, leaf)
            return PartitionTree(block, split=False, j_subtree=j_leaf, leaf=leaf,
                                 j_leaf_alt=j_leaf)

    snap = state.snapshot(block) if action == RD_CHECK else None
    children = tuple(
        _encode_node(frame, state, child, cm, control, stats)
        for child in block.children()
    )
    j_split = sum(c.j_subtree for c in children) + flag_cost

    if action == EARLY_SPLIT:
        return PartitionTree(block, split=True, j_subtree=j_split, children=children,
                             j_split_alt=j_split)

    if j_leaf <= j_split:
        state.restore(block, snap)
        state.commit_leaf(block, leaf)
        return PartitionTree(block, split=False, j_subtree=j_leaf, leaf=leaf,
                             j_leaf_alt=j_leaf, j_split_alt=j_split)
    return PartitionTree(block, split=True, j_subtree=j_split, children=children,
                         j_leaf_alt=j_leaf, j_split_alt=j_split)


def encode_ctu_full(frame: Frame, state: FrameState, ctu: BlockRef, cm: CostModel,
                    control: EncodeControl | None = None,
                    stats: EncodeStats | None = None) -> PartitionTree:
    if ctu.depth != 0:
        raise ValueError("encode_ctu_full expects a CTU-aligned depth-0 block")
    return _encode_node(frame, state, ctu, cm, control or EncodeControl(),
                        stats or EncodeStats())


def psnr_db(orig: np.ndarray, recon: np.ndarray) -> float:
    diff = orig.astype(np.float64) - recon.astype(np.float64)
    mse = float((diff * diff).mean())
    if mse == 0.0:
        return 99.99
    return 10.0 * math.log10(255.0 * 255.0 / mse)


def encode_frame(frame: Frame, cm: CostModel,
                 control: EncodeControl | None = None) -> EncodeResult:
    """Encode all CTUs in raster order; the oracle path when control is None."""
    control = control or EncodeControl()
    state = FrameState(frame)
    stats = EncodeStats()
    t0 = time.perf_counter()
    trees = [
        _encode_node(frame, state, ctu, cm, control, stats)
        for ctu in iter_blocks(frame, 0)
    ]
    wall_ms = (time.perf_counter() - t0) * 1000.0
    total_bits = sum(t.total_bits() for t in trees)
    rec = state.recon[: frame.height, : frame.width]
    orig = frame.samples[: frame.height, : frame.width]
    return EncodeResult(trees=trees, total_bits=total_bits,
                        psnr_db=psnr_db(orig, rec), wall_ms=wall_ms,
                        stats=stats, reconstruction=state.recon.copy())
