"""Binary netpbm I/O: PGM (P5) for grayscale, PPM (P6) for RGB.

Only maxval 255 is supported.  Headers may contain `#` comments; writers
emit a single canonical header so identical images give identical bytes.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import FormatError

_WHITESPACE = b" \t\r\n\v\f"


class BadHeader(FormatError):
    """Magic, dimensions or maxval are unsupported or malformed."""


class TruncatedData(FormatError):
    """Raster data ends before height*width samples."""


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c == b"#":
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        elif c in _WHITESPACE:
            pos += 1
        else:
            break
    if pos >= n:
        raise BadHeader("header: stream ends before all header fields")
    start = pos
    while pos < n and data[pos : pos + 1] not in _WHITESPACE and data[pos] != ord("#"):
        pos += 1
    return data[start:pos], pos


def _parse_header(data: bytes, magic: bytes) -> tuple[int, int, int]:
    """Return (width, height, raster offset) after validating the header."""
    got, pos = _next_token(data, 0)
    if got != magic:
        raise BadHeader(f"magic: expected {magic.decode()}, got {got!r}")
    fields = []
    for name in ("width", "height", "maxval"):
        token, pos = _next_token(data, pos)
        try:
            value = int(token)
        except ValueError:
            raise BadHeader(f"{name}: {token!r} is not an integer") from None
        fields.append(value)
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise BadHeader(f"size: {width}x{height} (both dims must be >= 1)")
    if maxval != 255:
        raise BadHeader(f"maxval: {maxval} (only 255 is supported)")
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise BadHeader("header: missing whitespace before raster data")
    return width, height, pos + 1


def read_pgm(data: bytes) -> np.ndarray:
    """Parse binary PGM bytes into an (H, W) uint8 array."""
    width, height, offset = _parse_header(data, b"P5")
    expected = width * height
    if len(data) - offset < expected:
        raise TruncatedData(
            f"raster: expected {expected} bytes, got {len(data) - offset}"
        )
    arr = np.frombuffer(data, dtype=np.uint8, count=expected, offset=offset)
    return arr.reshape(height, width).copy()


def write_pgm(image: np.ndarray) -> bytes:
    img = np.ascontiguousarray(image, dtype=np.uint8)
    if img.ndim != 2:
        raise ValueError(f"PGM image must be 2-D, got shape {img.shape}")
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode()
    return header + img.tobytes()


def read_ppm(data: bytes) -> np.ndarray:
    """Parse binary PPM bytes into an (H, W, 3) uint8 array."""
    width, height, offset = _parse_header(data, b"P6")
    expected = width * height * 3
    if len(data) - offset < expected:
        raise TruncatedData(
            f"raster: expected {expected} bytes, got {len(data) - offset}"
        )
    arr = np.frombuffer(data, dtype=np.uint8, count=expected, offset=offset)
    return arr.reshape(height, width, 3).copy()


def write_ppm(image: np.ndarray) -> bytes:
    img = np.ascontiguousarray(image, dtype=np.uint8)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"PPM image must be (H, W, 3), got shape {img.shape}")
    header = f"P6\n{img.shape[1]} {img.shape[0]}\n255\n".encode()
    return header + img.tobytes()


def read_pgm_file(path: str | Path) -> np.ndarray:
    return read_pgm(Path(path).read_bytes())


def write_pgm_file(path: str | Path, image: np.ndarray) -> None:
    Path(path).write_bytes(write_pgm(image))


def write_ppm_file(path: str | Path, image: np.ndarray) -> None:
    Path(path).write_bytes(write_ppm(image))
