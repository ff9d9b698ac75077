"""Pure-Python/numpy kernels: the fallback used when the compiled extension
is unavailable.  Semantics (border policy, label order, interpolation) must
stay bit-identical to ``_cykernels``; the parity tests enforce this.
"""
from __future__ import annotations

import numpy as np


def erode(mask: np.ndarray, k: int) -> np.ndarray:
    """Binary erosion by a solid k x k square; out-of-bounds counts as background."""
    if k == 1:
        return mask.copy()
    h, w = mask.shape
    r = k // 2
    pad = np.zeros((h, w + 2 * r), dtype=np.uint8)
    pad[:, r : r + w] = mask
    rows = np.minimum.reduce([pad[:, i : i + w] for i in range(k)])
    pad2 = np.zeros((h + 2 * r, w), dtype=np.uint8)
    pad2[r : r + h, :] = rows
    return np.minimum.reduce([pad2[i : i + h, :] for i in range(k)])


def dilate(mask: np.ndarray, k: int) -> np.ndarray:
    """Binary dilation by a solid k x k square, clipped to the image window."""
    if k == 1:
        return mask.copy()
    h, w = mask.shape
    r = k // 2
    pad = np.zeros((h, w + 2 * r), dtype=np.uint8)
    pad[:, r : r + w] = mask
    rows = np.maximum.reduce([pad[:, i : i + w] for i in range(k)])
    pad2 = np.zeros((h + 2 * r, w), dtype=np.uint8)
    pad2[r : r + h, :] = rows
    return np.maximum.reduce([pad2[i : i + h, :] for i in range(k)])


def resize_bilinear(src: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resample with pixel-center alignment.

    Source coordinate per output pixel d: (d + 0.5) * (in / out) - 0.5,
    clamped to [0, in - 1].  Interpolation uses the lerp form a + f*(b - a)
    in float64, so outputs never leave [src.min(), src.max()].
    """
    in_h, in_w = src.shape
    s = src.astype(np.float64)
    sy = np.clip((np.arange(out_h) + 0.5) * (in_h / out_h) - 0.5, 0.0, in_h - 1.0)
    sx = np.clip((np.arange(out_w) + 0.5) * (in_w / out_w) - 0.5, 0.0, in_w - 1.0)
    y0 = np.floor(sy).astype(np.intp)
    x0 = np.floor(sx).astype(np.intp)
    fy = (sy - y0)[:, None]
    fx = (sx - x0)[None, :]
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    a = s[y0[:, None], x0[None, :]]
    b = s[y0[:, None], x1[None, :]]
    c = s[y1[:, None], x0[None, :]]
    d = s[y1[:, None], x1[None, :]]
    top = a + fx * (b - a)
    bot = c + fx * (d - c)
    return (top + fy * (bot - top)).astype(np.float32)


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def label_components(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """8-connected labeling: returns (labels, n) with labels dense from 1,
    numbered by the scan order (row-major) of each component's first pixel.
    """
    h, w = mask.shape
    rows = mask.tolist()
    labels = [[0] * w for _ in range(h)]
    parent = [0]  # parent[i] for provisional label i; index 0 unused
    prev = [0] * w
    for y in range(h):
        row = rows[y]
        cur = labels[y]
        for x in range(w):
            if not row[x]:
                continue
            best = 0
            if x > 0 and cur[x - 1]:
                best = cur[x - 1]
            if y > 0:
                for nx in (x - 1, x, x + 1):
                    if 0 <= nx < w and prev[nx]:
                        n = prev[nx]
                        if not best:
                            best = n
                        elif n != best:
                            ra, rb = _find(parent, best), _find(parent, n)
                            if ra != rb:
                                # keep the smaller provisional id as root
                                if ra > rb:
                                    ra, rb = rb, ra
                                parent[rb] = ra
                                best = ra
            if not best:
                parent.append(len(parent))
                best = len(parent) - 1
            cur[x] = best
        prev = cur
    # densify: roots renumbered by first provisional occurrence == scan order
    dense = [0] * len(parent)
    n = 0
    for p in range(1, len(parent)):
        root = _find(parent, p)
        if not dense[root]:
            n += 1
            dense[root] = n
    out = np.zeros((h, w), dtype=np.int32)
    for y in range(h):
        cur = labels[y]
        orow = out[y]
        for x in range(w):
            if cur[x]:
                orow[x] = dense[_find(parent, cur[x])]
    return out, n
