"""Activation map -> binary lesion mask.

Thresholding combines Otsu's histogram split with a fixed floor: a pixel is
foreground only if it clears both, i.e. the effective threshold is the max
of the two.  An iterated morphological opening (square kernel) then strips
speckle and splits weakly-connected blobs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, netpbm


@dataclass(frozen=True)
class ThresholdConfig:
    t_floor: float = 0.2
    open_kernel: int = 3
    open_iterations: int = 3

    def __post_init__(self):
        if not 0.0 <= self.t_floor <= 1.0:
            raise ValueError(f"t_floor {self.t_floor} outside [0, 1]")
        if self.open_kernel < 1 or self.open_kernel % 2 == 0:
            raise ValueError(f"open_kernel {self.open_kernel} must be odd and >= 1")
        if self.open_iterations < 0:
            raise ValueError(f"open_iterations {self.open_iterations} must be >= 0")


def quantize(amap: np.ndarray) -> np.ndarray:
    """Map [0, 1] values onto the 256 histogram bins: round(v * 255)."""
    m = np.asarray(amap)
    if m.size == 0:
        raise ValueError("map is empty")
    if m.min() < 0.0 or m.max() > 1.0:
        raise ValueError("map values outside [0, 1]; normalize it first")
    return np.rint(m.astype(np.float64) * 255.0).astype(np.int64)


def otsu_threshold(amap: np.ndarray) -> int:
    """Otsu's threshold over the 256-bin histogram of a [0, 1] map.

    Returns the level T in 0..255 maximizing the between-class variance of
    the split {q <= T} / {q > T}.  Ties resolve to the lowest T; a
    single-bin histogram returns that bin's level.  The search uses exact
    integer arithmetic, so tie-breaking is never at the mercy of float
    rounding.
    """
    hist = np.bincount(quantize(amap).ravel(), minlength=256).tolist()
    occupied = [i for i, c in enumerate(hist) if c]
    if len(occupied) == 1:
        return occupied[0]
    total = sum(hist)
    total_sum = sum(i * c for i, c in enumerate(hist))
    # sigma_b^2(T) = w0*w1*(mu0-mu1)^2 is proportional to
    # (s0*c1 - s1*c0)^2 / (c0*c1); compare candidates by cross-multiplication.
    best_t = 0
    best_num = -1
    best_den = 1
    c0 = 0
    s0 = 0
    for t in range(256):
        c0 += hist[t]
        s0 += t * hist[t]
        c1 = total - c0
        if c0 == 0 or c1 == 0:
            num, den = 0, 1
        else:
            d = s0 * c1 - (total_sum - s0) * c0
            num, den = d * d, c0 * c1
        if num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    return best_t


def binarize(amap: np.ndarray, cfg: ThresholdConfig = ThresholdConfig()) -> np.ndarray:
    """Threshold a [0, 1] map: foreground iff q > T_otsu and v >= t_floor."""
    m = np.asarray(amap)
    t = otsu_threshold(m)
    fg = (quantize(m) > t) & (m >= cfg.t_floor)
    return fg.astype(np.uint8)


def morph_open(mask: np.ndarray, kernel: int = 3, iterations: int = 3) -> np.ndarray:
    """Opening: `iterations` erosions then `iterations` dilations by a solid
    kernel x kernel square.  Out-of-bounds pixels count as background for
    both passes; iterations=0 is the identity.
    """
    if kernel < 1 or kernel % 2 == 0:
        raise ValueError(f"kernel {kernel} must be odd and >= 1")
    if iterations < 0:
        raise ValueError(f"iterations {iterations} must be >= 0")
    out = np.ascontiguousarray(np.asarray(mask) != 0, dtype=np.uint8)
    for _ in range(iterations):
        out = _kernels.erode(out, kernel)
    for _ in range(iterations):
        out = _kernels.dilate(out, kernel)
    return out


def lesion_mask(amap: np.ndarray, cfg: ThresholdConfig = ThresholdConfig()) -> np.ndarray:
    """Full map -> mask step: threshold then open."""
    return morph_open(binarize(amap, cfg), cfg.open_kernel, cfg.open_iterations)


def mask_to_pgm(mask: np.ndarray) -> bytes:
    """Debug serialization: foreground 255, background 0."""
    return netpbm.write_pgm((np.asarray(mask) != 0).astype(np.uint8) * 255)
