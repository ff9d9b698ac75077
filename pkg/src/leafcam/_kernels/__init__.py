"""Hot pixel kernels with backend selection at import time.

The compiled Cython extension is used when it imported successfully; the
numpy/pure-Python fallback otherwise.  Set ``LEAFCAM_PURE_PYTHON=1`` to
force the fallback (the benchmark and parity tests use this).

Masks are normalized to 0/1 uint8 and maps to contiguous float32 before
hitting a backend, so both backends see identical canonical inputs.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

if os.environ.get("LEAFCAM_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _cykernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def _as_mask(mask: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(mask) != 0, dtype=np.uint8)


def erode(mask: np.ndarray, k: int) -> np.ndarray:
    return _impl.erode(_as_mask(mask), int(k))


def dilate(mask: np.ndarray, k: int) -> np.ndarray:
    return _impl.dilate(_as_mask(mask), int(k))


def resize_bilinear(src: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    arr = np.ascontiguousarray(src, dtype=np.float32)
    return _impl.resize_bilinear(arr, int(out_h), int(out_w))


def label_components(mask: np.ndarray) -> tuple[np.ndarray, int]:
    return _impl.label_components(_as_mask(mask))
