"""Core raster types and file I/O.

Three raster types back the whole pipeline: ChannelStack (H x W x C float
image), DistanceMap (H x W scalar field) and BinaryMask (H x W 0/1).
ScribbleSet carries seed pixels. All of them validate on construction and
freeze their buffers, so instances are safe to share across threads.

On disk:
  * channel stacks use the CST container (little-endian): magic "CSTK",
    version u16, dtype u8 (1 = float32), reserved u8, then height/width/
    channels as u32, followed by the float32 payload in row-major
    pixel-major order.
  * masks use binary PGM (P5, maxval 255); values > 127 import as 1.
  * scribbles are a JSON array of {"x": int, "y": int, "label": int}.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

CST_MAGIC = b"CSTK"
CST_VERSION = 1
CST_DTYPE_FLOAT32 = 1
# magic(4) + version(2) + dtype(1) + reserved(1) + 3 * u32 dims
_CST_HEADER = struct.Struct("<4sHBBIII")
CST_HEADER_SIZE = _CST_HEADER.size

FOREGROUND_LABEL = 1


class CstError(ValueError):
    """Base class for CST container problems."""


class CstBadMagicError(CstError):
    pass


class CstVersionError(CstError):
    pass


class CstTruncatedError(CstError):
    pass


class CstNonFiniteError(CstError):
    pass


class PgmError(ValueError):
    """Malformed PGM mask file."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(eq=False)
class ChannelStack:
    """H x W x C float32 raster (hyperspectral cube, feature stack or RGB)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float32, order="C")
        if arr.ndim != 3:
            raise ValueError(f"stack must be H x W x C, got shape {arr.shape}")
        if min(arr.shape) < 1:
            raise ValueError(f"stack dimensions must be >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("stack contains non-finite values")
        self.data = _freeze(arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    def __eq__(self, other) -> bool:
        return isinstance(other, ChannelStack) and np.array_equal(self.data, other.data)


@dataclass(eq=False)
class DistanceMap:
    """Per-pixel non-negative distances, optionally normalized to [0, 1]."""

    data: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float32, order="C")
        if arr.ndim != 2:
            raise ValueError(f"distance map must be H x W, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("distance map contains non-finite values")
        if arr.size and float(arr.min()) < 0.0:
            raise ValueError("distance map contains negative values")
        if self.normalized and arr.size and float(arr.max()) > 1.0:
            raise ValueError("normalized map has values above 1")
        self.data = _freeze(arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DistanceMap)
            and self.normalized == other.normalized
            and np.array_equal(self.data, other.data)
        )


@dataclass(eq=False)
class BinaryMask:
    """H x W raster of 0/1 values (segmentations, ground truth, skeletons)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2:
            raise ValueError(f"mask must be H x W, got shape {arr.shape}")
        if arr.dtype == bool:
            arr = arr.astype(np.uint8)
        else:
            arr = np.array(arr, dtype=np.uint8, order="C")
            if arr.size and int(arr.max()) > 1:
                raise ValueError("mask values must be 0 or 1")
        self.data = _freeze(np.ascontiguousarray(arr))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    def count(self) -> int:
        return int(self.data.sum())

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryMask) and np.array_equal(self.data, other.data)


@dataclass(frozen=True)
class ScribbleSet:
    """Seed pixels drawn over a raster; label 1 marks foreground seeds."""

    points: tuple
    height: int
    width: int

    def __post_init__(self):
        pts = tuple((int(x), int(y), int(label)) for x, y, label in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate scribble points")
        for x, y, label in pts:
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise ValueError(f"scribble point ({x}, {y}) out of bounds "
                                 f"for {self.width} x {self.height}")
            if not (0 <= label <= 255):
                raise ValueError(f"label {label} outside u8 range")
        object.__setattr__(self, "points", pts)

    def foreground_xy(self) -> np.ndarray:
        """(N, 2) array of [x, y] for label-1 points, in insertion order."""
        fg = [(x, y) for x, y, label in self.points if label == FOREGROUND_LABEL]
        return np.asarray(fg, dtype=np.int64).reshape(-1, 2)

    @property
    def has_foreground(self) -> bool:
        return any(label == FOREGROUND_LABEL for _, _, label in self.points)

    def to_json(self) -> str:
        return json.dumps(
            [{"x": x, "y": y, "label": label} for x, y, label in self.points]
        )

    @classmethod
    def from_json(cls, text: str, height: int, width: int) -> "ScribbleSet":
        raw = json.loads(text)
        if not isinstance(raw, list):
            raise ValueError("scribble JSON must be an array")
        pts = []
        for item in raw:
            try:
                pts.append((int(item["x"]), int(item["y"]), int(item["label"])))
            except (TypeError, KeyError) as exc:
                raise ValueError(f"bad scribble entry: {item!r}") from exc
        return cls(points=tuple(pts), height=height, width=width)


# ---------------------------------------------------------------------------
# CST container
# ---------------------------------------------------------------------------

def write_channel_stack(stack: ChannelStack, path) -> None:
    """Serialize a stack to a CST file; parses back to an equal stack."""
    header = _CST_HEADER.pack(
        CST_MAGIC, CST_VERSION, CST_DTYPE_FLOAT32, 0,
        stack.height, stack.width, stack.channels,
    )
    payload = np.ascontiguousarray(stack.data, dtype="<f4").tobytes()
    Path(path).write_bytes(header + payload)


def read_channel_stack(path) -> ChannelStack:
    """Parse a CST file, validating magic, version and payload size."""
    blob = Path(path).read_bytes()
    return channel_stack_from_bytes(blob)


def channel_stack_from_bytes(blob: bytes) -> ChannelStack:
    if len(blob) < CST_HEADER_SIZE:
        raise CstTruncatedError(f"file too short for CST header ({len(blob)} bytes)")
    magic, version, dtype, reserved, h, w, c = _CST_HEADER.unpack_from(blob)
    if magic != CST_MAGIC:
        raise CstBadMagicError(f"bad magic {magic!r}")
    if version != CST_VERSION:
        raise CstVersionError(f"unsupported CST version {version}")
    if dtype != CST_DTYPE_FLOAT32:
        raise CstError(f"unsupported dtype code {dtype}")
    if reserved != 0:
        raise CstError(f"reserved byte must be 0, got {reserved}")
    if min(h, w, c) < 1:
        raise CstError(f"dimensions must be >= 1, got {h} x {w} x {c}")
    expected = h * w * c * 4
    payload = blob[CST_HEADER_SIZE:]
    if len(payload) < expected:
        raise CstTruncatedError(
            f"payload is {len(payload)} bytes, expected {expected}")
    if len(payload) > expected:
        raise CstError(f"{len(payload) - expected} trailing bytes after payload")
    values = np.frombuffer(payload, dtype="<f4").reshape(h, w, c)
    if not np.all(np.isfinite(values)):
        raise CstNonFiniteError("payload contains NaN or Inf")
    return ChannelStack(values)


def channel_stack_to_bytes(stack: ChannelStack) -> bytes:
    header = _CST_HEADER.pack(
        CST_MAGIC, CST_VERSION, CST_DTYPE_FLOAT32, 0,
        stack.height, stack.width, stack.channels,
    )
    return header + np.ascontiguousarray(stack.data, dtype="<f4").tobytes()


def write_distance_map(dmap: DistanceMap, path) -> None:
    """Export a distance map as a single-channel CST file."""
    write_channel_stack(ChannelStack(dmap.data[:, :, None]), path)


def read_distance_map(path) -> DistanceMap:
    """Read a single-channel CST file back as an (unnormalized) map."""
    stack = read_channel_stack(path)
    if stack.channels != 1:
        raise CstError(f"distance map CST must have 1 channel, got {stack.channels}")
    return DistanceMap(stack.data[:, :, 0], normalized=False)


# ---------------------------------------------------------------------------
# PGM masks
# ---------------------------------------------------------------------------

_MAX_MASK_PIXELS = 1 << 30  # refuse absurd headers before allocating


def write_mask_pgm(mask: BinaryMask, path) -> None:
    header = f"P5\n{mask.width} {mask.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + (mask.data * np.uint8(255)).tobytes())


def mask_to_pgm_bytes(mask: BinaryMask) -> bytes:
    header = f"P5\n{mask.width} {mask.height}\n255\n".encode("ascii")
    return header + (mask.data * np.uint8(255)).tobytes()


def read_mask_pgm(path) -> BinaryMask:
    return mask_from_pgm_bytes(Path(path).read_bytes())


def mask_from_pgm_bytes(blob: bytes) -> BinaryMask:
    """Parse a binary PGM; pixels above 127 become 1, the rest 0."""
    tokens, offset = _pgm_header_tokens(blob)
    if len(tokens) != 4:
        raise PgmError("incomplete PGM header")
    if tokens[0] != b"P5":
        raise PgmError(f"not a binary PGM (magic {tokens[0]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise PgmError("non-numeric PGM header field") from exc
    if width < 1 or height < 1:
        raise PgmError(f"bad dimensions {width} x {height}")
    if width * height > _MAX_MASK_PIXELS:
        raise PgmError(f"dimension overflow: {width} x {height}")
    if maxval != 255:
        raise PgmError(f"only maxval 255 supported, got {maxval}")
    payload = blob[offset:]
    if len(payload) < width * height:
        raise PgmError(f"payload is {len(payload)} bytes, "
                       f"expected {width * height}")
    pixels = np.frombuffer(payload[: width * height], dtype=np.uint8)
    return BinaryMask((pixels > 127).reshape(height, width))


def _pgm_header_tokens(blob: bytes):
    """Read the 4 header tokens, honoring '#' comments; returns payload offset."""
    tokens = []
    i = 0
    n = len(blob)
    while len(tokens) < 4 and i < n:
        ch = blob[i:i + 1]
        if ch in b" \t\r\n":
            i += 1
        elif ch == b"#":
            while i < n and blob[i:i + 1] != b"\n":
                i += 1
        else:
            j = i
            while j < n and blob[j:j + 1] not in b" \t\r\n#":
                j += 1
            tokens.append(blob[i:j])
            i = j
    if len(tokens) < 4:
        return tokens, i
    # exactly one whitespace byte separates the header from the payload
    return tokens, i + 1


# ---------------------------------------------------------------------------
# Scribble JSON files
# ---------------------------------------------------------------------------

def write_scribbles(scribbles: ScribbleSet, path) -> None:
    Path(path).write_text(scribbles.to_json())


def read_scribbles(path, height: int, width: int) -> ScribbleSet:
    return ScribbleSet.from_json(Path(path).read_text(), height=height, width=width)
