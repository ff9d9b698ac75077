"""Writer for the CAMT tensor container consumed by leafcam.

Wire format (little-endian): 4-byte magic "CAMT", version byte (1), dtype
byte (0 = float32, 1 = uint8), ndim byte (1..4), ndim uint32 dims, then the
row-major payload.  Exactly one encoding per tensor.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"CAMT"
VERSION = 1
MAX_ELEMENTS = 2**31


def write_camt(values: np.ndarray) -> bytes:
    arr = np.ascontiguousarray(values)
    if arr.dtype == np.uint8:
        code = 1
    else:
        code = 0
        arr = arr.astype(np.float32)
    if not 1 <= arr.ndim <= 4:
        raise ValueError(f"ndim {arr.ndim} outside 1..4")
    if arr.size == 0 or arr.size > MAX_ELEMENTS:
        raise ValueError(f"element count {arr.size} outside 1..{MAX_ELEMENTS}")
    header = struct.pack("<4sBBB", MAGIC, VERSION, code, arr.ndim)
    dims = struct.pack(f"<{arr.ndim}I", *arr.shape)
    return header + dims + arr.tobytes(order="C")


def write_camt_file(path: str | Path, values: np.ndarray) -> None:
    Path(path).write_bytes(write_camt(values))
