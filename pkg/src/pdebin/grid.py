"""Core 2-D field types, replicate boundary handling and image file I/O.

Images are held as row-major grids: ``ScalarField`` carries float samples
in [0, 1], ``BinaryMap`` carries {0, 1} masks where 0 marks ink (text) and
1 marks background. Reads outside a grid always resolve to the nearest
in-grid pixel (replicate / Neumann padding).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DimensionError, FormatError

# BT.709 luma weights for RGB inputs.
_LUMA_R, _LUMA_G, _LUMA_B = 0.2126, 0.7152, 0.0722


class BoundaryRule(Enum):
    """Out-of-grid reads resolve to the nearest in-grid pixel."""

    REPLICATE = "replicate"


@dataclass(frozen=True)
class ScalarField:
    """Immutable 2-D grid of finite samples in [0.0, 1.0]."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError(f"expected a non-empty 2-D grid, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("field samples must be finite")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("field samples must lie in [0, 1]")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class BinaryMap:
    """Immutable 2-D mask over {0, 1}; 0 denotes ink, 1 denotes background."""

    bits: np.ndarray

    def __post_init__(self):
        arr = np.array(self.bits)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError(f"expected a non-empty 2-D mask, got shape {arr.shape}")
        arr = arr.astype(np.uint8)
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("mask elements must be 0 or 1")
        arr.flags.writeable = False
        object.__setattr__(self, "bits", arr)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def to_field(self) -> ScalarField:
        return ScalarField(self.bits.astype(np.float64))


def sample_at(field: ScalarField, x: int, y: int,
              rule: BoundaryRule = BoundaryRule.REPLICATE) -> float:
    """Read a sample at signed coordinates; out-of-range indices replicate."""
    if rule is not BoundaryRule.REPLICATE:
        raise ValueError(f"unknown boundary rule {rule!r}")
    cy = min(max(y, 0), field.height - 1)
    cx = min(max(x, 0), field.width - 1)
    return float(field.data[cy, cx])


def load_image(path: str | Path) -> ScalarField:
    """Load a PNG (8/16-bit gray or RGB) or binary PGM (P5) as a ScalarField.

    Color inputs are reduced to gray with BT.709 luma weights; samples are
    scaled into [0, 1] by the format's maximum level (255, 65535, or the
    PGM header maxval).
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        return ScalarField(_read_pgm(path))
    if suffix == ".png":
        return ScalarField(_read_png(path))
    raise FormatError(f"unsupported image extension {suffix!r} (expected .png or .pgm)")


def save_image(obj: ScalarField | BinaryMap, path: str | Path) -> None:
    """Write a field or mask as an 8-bit grayscale PNG or PGM.

    ScalarField samples quantize with round-half-up to 255 levels; BinaryMap
    writes 0 -> 0 and 1 -> 255, so binary round-trips are lossless.
    """
    if isinstance(obj, ScalarField):
        levels = np.floor(255.0 * obj.data + 0.5).astype(np.uint8)
    elif isinstance(obj, BinaryMap):
        levels = obj.bits * np.uint8(255)
    else:
        raise TypeError(f"cannot save object of type {type(obj).__name__}")
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".png":
        Image.fromarray(levels, mode="L").save(path, format="PNG")
    elif suffix == ".pgm":
        _write_pgm(levels, path)
    else:
        raise FormatError(f"unsupported image extension {suffix!r} (expected .png or .pgm)")


def _read_png(path: Path) -> np.ndarray:
    try:
        im = Image.open(path)
    except UnidentifiedImageError as exc:
        raise FormatError(f"{path}: not a readable image") from exc
    with im:
        if im.format != "PNG":
            raise FormatError(f"{path}: expected PNG, found {im.format}")
        mode = im.mode
        if mode == "P":
            im = im.convert("RGB")
            mode = "RGB"
        if mode == "1":
            return np.asarray(im, dtype=np.float64)
        if mode in ("L", "LA"):
            arr = np.asarray(im, dtype=np.float64)
            if mode == "LA":
                arr = arr[:, :, 0]
            return arr / 255.0
        if mode in ("RGB", "RGBA"):
            arr = np.asarray(im, dtype=np.float64)
            gray = (_LUMA_R * arr[:, :, 0] + _LUMA_G * arr[:, :, 1]
                    + _LUMA_B * arr[:, :, 2])
            return gray / 255.0
        if mode in ("I", "I;16", "I;16B"):
            return np.asarray(im, dtype=np.float64) / 65535.0
        raise FormatError(f"{path}: unsupported PNG mode {mode!r}")


def _read_pgm(path: Path) -> np.ndarray:
    buf = path.read_bytes()
    if buf[:2] != b"P5":
        raise FormatError(f"{path}: not a binary (P5) PGM file")

    # Header: magic, width, height, maxval; '#' starts a comment to EOL.
    pos = 2
    fields: list[int] = []
    while len(fields) < 3:
        if pos >= len(buf):
            raise FormatError(f"{path}: truncated PGM header")
        c = buf[pos:pos + 1]
        if c in b" \t\r\n":
            pos += 1
        elif c == b"#":
            while pos < len(buf) and buf[pos:pos + 1] not in b"\r\n":
                pos += 1
        elif c.isdigit():
            start = pos
            while pos < len(buf) and buf[pos:pos + 1].isdigit():
                pos += 1
            fields.append(int(buf[start:pos]))
        else:
            raise FormatError(f"{path}: malformed PGM header")
    pos += 1  # single whitespace byte before the raster

    width, height, maxval = fields
    if width < 1 or height < 1:
        raise DimensionError(f"{path}: zero-dimension image {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise FormatError(f"{path}: maxval {maxval} out of range")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
    count = width * height
    needed = count * dtype.itemsize
    payload = buf[pos:pos + needed]
    if len(payload) < needed:
        raise FormatError(f"{path}: truncated PGM raster")
    raster = np.frombuffer(payload, dtype=dtype).astype(np.float64)
    return raster.reshape(height, width) / float(maxval)


def _write_pgm(levels: np.ndarray, path: Path) -> None:
    header = f"P5\n{levels.shape[1]} {levels.shape[0]}\n255\n"
    path.write_bytes(header.encode("ascii") + levels.tobytes())
