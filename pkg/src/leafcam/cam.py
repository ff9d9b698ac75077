"""Activation-map math: weighted channel sums, gradient-mean weights,
min-max normalization and bilinear upsampling.
"""
from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import NonFiniteValues, ShapeMismatch


def _check_finite(arr: np.ndarray, name: str) -> None:
    if not np.isfinite(arr).all():
        raise NonFiniteValues(f"{name} contains non-finite values")


def compute_cam(
    features: np.ndarray, weights: np.ndarray, relu: bool = False
) -> np.ndarray:
    """Per-class evidence map: the channel-weighted sum of conv activations.

    features is (C, H, W), weights is length C; the result is (H, W) float32.
    With relu=True negative sums are clamped to zero.
    """
    feats = np.asarray(features)
    w = np.asarray(weights)
    if feats.ndim != 3:
        raise ShapeMismatch(f"features must be (C, H, W), got shape {feats.shape}")
    if w.ndim != 1 or w.shape[0] != feats.shape[0]:
        raise ShapeMismatch(
            f"weights length {w.shape} does not match {feats.shape[0]} channels"
        )
    _check_finite(feats, "features")
    _check_finite(w, "weights")
    cam = np.tensordot(w.astype(np.float64), feats.astype(np.float64), axes=1)
    if relu:
        cam = np.maximum(cam, 0.0)
    return cam.astype(np.float32)


def gradcam_weights(grads: np.ndarray) -> np.ndarray:
    """Channel weights as the spatial mean of the class-score gradients.

    grads is (C, H, W); returns a length-C float64 vector, one mean per
    channel.
    """
    g = np.asarray(grads)
    if g.ndim != 3:
        raise ShapeMismatch(f"gradients must be (C, H, W), got shape {g.shape}")
    _check_finite(g, "gradients")
    return g.astype(np.float64).mean(axis=(1, 2))


def normalize(amap: np.ndarray) -> np.ndarray:
    """Min-max rescale to [0, 1]; a constant map becomes all zeros."""
    m = np.asarray(amap, dtype=np.float32)
    _check_finite(m, "map")
    lo = m.min()
    hi = m.max()
    if hi == lo:
        return np.zeros_like(m)
    return (m - lo) / (hi - lo)


def upsample_bilinear(amap: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Resample to (out_h, out_w) with pixel-center-aligned bilinear blending."""
    m = np.asarray(amap)
    if m.ndim != 2:
        raise ShapeMismatch(f"map must be 2-D, got shape {m.shape}")
    if out_h < 1 or out_w < 1:
        raise ValueError(f"output size {out_h}x{out_w} must be >= 1x1")
    return _kernels.resize_bilinear(m, out_h, out_w)
