"""Luma frame loading, CTU-aligned padding, and block iteration.

Frames are 8-bit single-plane (luma) images padded to 64-sample multiples
by edge replication.  Two file formats are supported: headerless raw luma
with a key=value sidecar manifest, and binary portable graymap (P5).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

CTU_SIZE = 64

# depth <-> block size, fixed: 64->0, 32->1, 16->2, 8->3, 4->4
SIZE_FOR_DEPTH = (64, 32, 16, 8, 4)


class FrameFormatError(ValueError):
    """Malformed frame file or manifest."""


def depth_for_size(size: int) -> int:
    try:
        return SIZE_FOR_DEPTH.index(size)
    except ValueError:
        raise ValueError(f"invalid block size {size}") from None


@dataclass(frozen=True)
class BlockRef:
    """A square block aligned to its own size inside the padded frame."""

    x: int
    y: int
    size: int
    depth: int

    def __post_init__(self):
        if SIZE_FOR_DEPTH[self.depth] != self.size:
            raise ValueError(f"size {self.size} does not match depth {self.depth}")
        if self.x % self.size or self.y % self.size:
            raise ValueError(f"block origin ({self.x},{self.y}) not aligned to {self.size}")

    def children(self) -> tuple["BlockRef", ...]:
        h = self.size // 2
        d = self.depth + 1
        return (
            BlockRef(self.x, self.y, h, d),
            BlockRef(self.x + h, self.y, h, d),
            BlockRef(self.x, self.y + h, h, d),
            BlockRef(self.x + h, self.y + h, h, d),
        )


@dataclass(frozen=True)
class Frame:
    """An 8-bit luma plane padded to CTU multiples by edge replication.

    ``samples`` has shape (padded_height, padded_width) and is read-only;
    ``width``/``height`` keep the pre-padding dimensions.
    """

    width: int
    height: int
    samples: np.ndarray

    def __post_init__(self):
        if self.samples.dtype != np.uint8 or self.samples.ndim != 2:
            raise ValueError("samples must be a 2-D uint8 array")
        ph, pw = self.samples.shape
        if pw % CTU_SIZE or ph % CTU_SIZE:
            raise ValueError("padded dimensions must be multiples of 64")
        if pw < self.width or ph < self.height:
            raise ValueError("padded plane smaller than declared dimensions")
        self.samples.setflags(write=False)

    @property
    def padded_width(self) -> int:
        return self.samples.shape[1]

    @property
    def padded_height(self) -> int:
        return self.samples.shape[0]


def pad_to_ctu(plane: np.ndarray) -> np.ndarray:
    """Pad a 2-D plane to 64-multiples, replicating the last row/column."""
    h, w = plane.shape
    ph = -(-h // CTU_SIZE) * CTU_SIZE
    pw = -(-w // CTU_SIZE) * CTU_SIZE
    if (ph, pw) == (h, w):
        return plane.copy()
    return np.pad(plane, ((0, ph - h), (0, pw - w)), mode="edge")


def frame_from_array(plane: np.ndarray) -> Frame:
    plane = np.ascontiguousarray(plane, dtype=np.uint8)
    h, w = plane.shape
    return Frame(width=w, height=h, samples=pad_to_ctu(plane))


def _read_manifest(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise FrameFormatError(f"{path}: bad manifest line {line!r}")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _load_raw_luma(path: str) -> Frame:
    manifest = path + ".meta"
    if not os.path.exists(manifest):
        raise FrameFormatError(f"missing sidecar manifest {manifest}")
    meta = _read_manifest(manifest)
    try:
        width = int(meta["width"])
        height = int(meta["height"])
    except KeyError as exc:
        raise FrameFormatError(f"{manifest}: missing key {exc}") from None
    if width <= 0 or height <= 0:
        raise FrameFormatError(f"{manifest}: dimensions must be positive")
    data = np.fromfile(path, dtype=np.uint8)
    if data.size != width * height:
        raise FrameFormatError(
            f"{path}: file has {data.size} samples, manifest declares {width * height}"
        )
    return frame_from_array(data.reshape(height, width))


def _load_pgm(path: str) -> Frame:
    with open(path, "rb") as fh:
        blob = fh.read()

    # Tokenize the header: magic, width, height, maxval.  '#' starts a
    # comment running to end of line; binary data begins after the single
    # whitespace byte that follows maxval.
    pos = 0
    tokens = []
    while len(tokens) < 4:
        if pos >= len(blob):
            raise FrameFormatError(f"{path}: truncated header")
        c = blob[pos : pos + 1]
        if c == b"#":
            pos = blob.find(b"\n", pos)
            if pos < 0:
                raise FrameFormatError(f"{path}: unterminated comment")
            pos += 1
        elif c.isspace():
            pos += 1
        else:
            end = pos
            while end < len(blob) and not blob[end : end + 1].isspace() and blob[end : end + 1] != b"#":
                end += 1
            tokens.append(blob[pos:end])
            pos = end
    pos += 1  # single whitespace after maxval

    if tokens[0] != b"P5":
        raise FrameFormatError(f"{path}: not a binary portable graymap (magic {tokens[0]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FrameFormatError(f"{path}: non-numeric header field") from None
    if width <= 0 or height <= 0:
        raise FrameFormatError(f"{path}: dimensions must be positive")
    if not 0 < maxval <= 255:
        raise FrameFormatError(f"{path}: only 8-bit graymaps supported (maxval {maxval})")

    data = np.frombuffer(blob, dtype=np.uint8, offset=pos)
    if data.size < width * height:
        raise FrameFormatError(f"{path}: pixel data truncated")
    if data.size > width * height:
        raise FrameFormatError(f"{path}: trailing bytes after pixel data")
    return frame_from_array(data.reshape(height, width).copy())


def save_pgm(path: str, plane: np.ndarray) -> None:
    plane = np.ascontiguousarray(plane, dtype=np.uint8)
    h, w = plane.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(plane.tobytes())


def load_frame(path: str, fmt: str | None = None) -> Frame:
    """Load ``raw-luma`` or ``portable-graymap`` file as a padded Frame.

    When ``fmt`` is omitted it is inferred from the extension
    (.pgm -> graymap, anything else -> raw luma with sidecar).
    """
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    if fmt is None:
        fmt = "portable-graymap" if path.lower().endswith(".pgm") else "raw-luma"
    if fmt == "raw-luma":
        return _load_raw_luma(path)
    if fmt == "portable-graymap":
        return _load_pgm(path)
    raise ValueError(f"unknown frame format {fmt!r}")


def iter_blocks(frame: Frame, depth: int) -> list[BlockRef]:
    """All blocks of the given depth over the padded plane, raster order."""
    size = SIZE_FOR_DEPTH[depth]
    return [
        BlockRef(x, y, size, depth)
        for y in range(0, frame.padded_height, size)
        for x in range(0, frame.padded_width, size)
    ]
