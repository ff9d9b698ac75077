"""CAMT container: a minimal binary format for small dense tensors.

Layout (all integers little-endian):

    offset  size  field
    0       4     magic, ASCII "CAMT"
    4       1     version, currently 1
    5       1     dtype code: 0 = float32, 1 = uint8
    6       1     ndim, 1..4
    7       4*n   dims, one uint32 per axis
    7+4n    ...   payload, row-major with the innermost axis last

The payload length must equal prod(dims) * itemsize, every dim must be >= 1
and prod(dims) must stay below 2**31.  There is exactly one valid encoding
per tensor, so equal tensors always serialize to identical bytes.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FormatError

MAGIC = b"CAMT"
VERSION = 1

DTYPE_FLOAT32 = 0
DTYPE_UINT8 = 1

MAX_ELEMENTS = 2**31

_NUMPY_DTYPES = {
    DTYPE_FLOAT32: np.dtype("<f4"),
    DTYPE_UINT8: np.dtype("u1"),
}


class BadMagic(FormatError):
    """First four bytes are not "CAMT"."""


class UnsupportedVersion(FormatError):
    """Version byte is not 1."""


class UnsupportedDtype(FormatError):
    """Dtype code is not a known element type."""


class TruncatedPayload(FormatError):
    """The stream ends before a header field or the payload is complete."""


class DimOverflow(FormatError):
    """ndim outside 1..4, a zero dim, or prod(dims) >= 2**31."""


class TrailingData(FormatError):
    """Extra bytes follow a complete tensor."""


def _check_dims(dims: tuple[int, ...]) -> None:
    if not 1 <= len(dims) <= 4:
        raise DimOverflow(f"ndim: {len(dims)} outside 1..4")
    for i, d in enumerate(dims):
        if d < 1:
            raise DimOverflow(f"dims[{i}]: {d} (every dim must be >= 1)")
    n = 1
    for d in dims:
        n *= d
    if n > MAX_ELEMENTS:
        raise DimOverflow(f"dims: product {n} exceeds {MAX_ELEMENTS}")


def write_camt(values: np.ndarray) -> bytes:
    """Serialize an array to canonical CAMT bytes.

    uint8 arrays keep their dtype; every other numeric dtype (bool included)
    is stored as float32.
    """
    arr = np.ascontiguousarray(values)
    if arr.dtype == np.uint8:
        code = DTYPE_UINT8
    else:
        code = DTYPE_FLOAT32
        arr = arr.astype(np.float32)
    _check_dims(arr.shape)
    header = struct.pack("<4sBBB", MAGIC, VERSION, code, arr.ndim)
    dims = struct.pack(f"<{arr.ndim}I", *arr.shape)
    payload = arr.astype(_NUMPY_DTYPES[code]).tobytes(order="C")
    return header + dims + payload


def read_camt(data: bytes) -> np.ndarray:
    """Parse CAMT bytes into a float32 or uint8 array of the stored shape."""
    if data[:4] != MAGIC:
        raise BadMagic(f"magic: expected {MAGIC!r}, got {bytes(data[:4])!r}")
    if len(data) < 5:
        raise TruncatedPayload("version: stream ends inside the header")
    version = data[4]
    if version != VERSION:
        raise UnsupportedVersion(f"version: {version} (supported: {VERSION})")
    if len(data) < 6:
        raise TruncatedPayload("dtype: stream ends inside the header")
    code = data[5]
    if code not in _NUMPY_DTYPES:
        raise UnsupportedDtype(f"dtype: code {code} (supported: 0=float32, 1=uint8)")
    if len(data) < 7:
        raise TruncatedPayload("ndim: stream ends inside the header")
    ndim = data[6]
    if not 1 <= ndim <= 4:
        raise DimOverflow(f"ndim: {ndim} outside 1..4")
    offset = 7 + 4 * ndim
    if len(data) < offset:
        raise TruncatedPayload("dims: stream ends inside the dims field")
    dims = struct.unpack_from(f"<{ndim}I", data, 7)
    _check_dims(dims)
    dtype = _NUMPY_DTYPES[code]
    count = 1
    for d in dims:
        count *= d
    expected = count * dtype.itemsize
    actual = len(data) - offset
    if actual < expected:
        raise TruncatedPayload(f"payload: expected {expected} bytes, got {actual}")
    if actual > expected:
        raise TrailingData(f"payload: {actual - expected} extra bytes after tensor")
    arr = np.frombuffer(data, dtype=dtype, count=count, offset=offset)
    return arr.reshape(dims).copy()


def read_camt_file(path: str | Path) -> np.ndarray:
    return read_camt(Path(path).read_bytes())


def write_camt_file(path: str | Path, values: np.ndarray) -> None:
    Path(path).write_bytes(write_camt(values))
