"""
Netpbm grey-map codec: binary (P5) and ASCII (P2) reading, canonical P5 writing.
"""

from pathlib import Path

import numpy as np

from core.errors import PgmFormatError
from core.image import as_gray_image

_WHITESPACE = b" \t\n\r\v\f"


class _HeaderReader:
    """Walks the header tokens of a PGM stream, skipping '#' comments."""

    def __init__(self, data: bytes, start: int):
        self.data = data
        self.pos = start

    def skip(self) -> None:
        data = self.data
        while self.pos < len(data):
            byte = data[self.pos:self.pos + 1]
            if byte != b"#" and byte not in _WHITESPACE:
                return
            if byte == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            else:
                self.pos += 1

    def integer(self, what: str) -> int:
        self.skip()
        start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if self.pos == start:
            if start >= len(data):
                raise PgmFormatError(f"Truncated input while reading {what}", start)
            raise PgmFormatError(f"Expected a decimal {what}", start)
        return int(data[start:self.pos])


def load_pgm(data: bytes) -> np.ndarray:
    """Decode a P5 or P2 grey-map with maxval <= 255 into a uint8 array."""
    magic = data[:2]
    if magic not in (b"P5", b"P2"):
        raise PgmFormatError(f"Unknown magic number {magic!r}", 0)

    reader = _HeaderReader(data, 2)
    reader.skip()
    width_at = reader.pos
    width = reader.integer("width")
    height = reader.integer("height")
    if width < 1 or height < 1:
        raise PgmFormatError(f"Image dimensions must be positive, got {width}x{height}", width_at)
    reader.skip()
    maxval_at = reader.pos
    maxval = reader.integer("maxval")
    if maxval < 1 or maxval > 255:
        raise PgmFormatError(f"Unsupported maxval {maxval}", maxval_at)

    count = width * height
    if magic == b"P5":
        if reader.pos >= len(data) or data[reader.pos:reader.pos + 1] not in _WHITESPACE:
            raise PgmFormatError("Missing separator before the raster", reader.pos)
        start = reader.pos + 1
        payload = data[start:start + count]
        if len(payload) < count:
            raise PgmFormatError(f"Truncated raster: expected {count} bytes, got {len(payload)}", start + len(payload))
        pixels = np.frombuffer(payload, dtype=np.uint8)
        above = np.flatnonzero(pixels > maxval)
        if above.size:
            raise PgmFormatError(f"Sample {pixels[above[0]]} exceeds maxval {maxval}", start + int(above[0]))
        return pixels.reshape(height, width).copy()

    pixels = np.empty(count, dtype=np.uint8)
    for index in range(count):
        reader.skip()
        at = reader.pos
        value = reader.integer("sample")
        if value > maxval:
            raise PgmFormatError(f"Sample {value} exceeds maxval {maxval}", at)
        pixels[index] = value
    return pixels.reshape(height, width)


def save_pgm(img: np.ndarray) -> bytes:
    """Encode an 8-bit image as canonical P5 with maxval 255."""
    img = as_gray_image(img)
    height, width = img.shape
    return b"P5\n%d %d\n255\n" % (width, height) + img.tobytes(order="C")


def save_pgm16(values: np.ndarray) -> bytes:
    """Encode non-negative integers (clamped to 65535) as a big-endian 16-bit P5."""
    arr = np.clip(np.asarray(values), 0, 65535).astype(">u2")
    height, width = arr.shape
    return b"P5\n%d %d\n65535\n" % (width, height) + arr.tobytes(order="C")


def save_mask_pgm(mask: np.ndarray) -> bytes:
    """Encode a boolean mask as a P5 with values {0, 255}."""
    return save_pgm(np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8))


def read_pgm(path: str | Path) -> np.ndarray:
    return load_pgm(Path(path).read_bytes())


def write_pgm(path: str | Path, img: np.ndarray) -> None:
    Path(path).write_bytes(save_pgm(img))
