"""Per-lesion regions: connected components, size filtering, box extraction
and confidence scoring.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .boxes import BBox, BoxRecord
from .errors import ShapeMismatch


@dataclass(frozen=True)
class Region:
    label: int
    pixel_count: int
    bbox: BBox


@dataclass(frozen=True)
class SizeFilter:
    min_area_px: int = 25
    max_area_frac: float = 1.0

    def __post_init__(self):
        if self.min_area_px < 0:
            raise ValueError(f"min_area_px {self.min_area_px} must be >= 0")
        if not 0.0 < self.max_area_frac <= 1.0:
            raise ValueError(f"max_area_frac {self.max_area_frac} outside (0, 1]")


def connected_components(mask: np.ndarray) -> list[Region]:
    """8-connected foreground components in scan order.

    Labels are dense from 1, ordered by each component's first pixel in
    row-major scan order; bboxes are the half-open extents
    (min_col, min_row, max_col + 1, max_row + 1).
    """
    labels, n = _kernels.label_components(mask)
    if n == 0:
        return []
    counts = np.bincount(labels.ravel(), minlength=n + 1)[1:]
    ys, xs = np.nonzero(labels)
    idx = labels[ys, xs] - 1
    min_r = np.full(n, labels.shape[0], dtype=np.int64)
    max_r = np.full(n, -1, dtype=np.int64)
    min_c = np.full(n, labels.shape[1], dtype=np.int64)
    max_c = np.full(n, -1, dtype=np.int64)
    np.minimum.at(min_r, idx, ys)
    np.maximum.at(max_r, idx, ys)
    np.minimum.at(min_c, idx, xs)
    np.maximum.at(max_c, idx, xs)
    return [
        Region(
            label=i + 1,
            pixel_count=int(counts[i]),
            bbox=BBox(int(min_c[i]), int(min_r[i]), int(max_c[i]) + 1, int(max_r[i]) + 1),
        )
        for i in range(n)
    ]


def filter_boxes(
    regions: list[Region], size_filter: SizeFilter, image_area: int
) -> list[Region]:
    """Keep regions with min_area_px <= bbox area <= max_area_frac * image_area."""
    if image_area <= 0:
        raise ValueError(f"image_area {image_area} must be positive")
    limit = size_filter.max_area_frac * image_area
    return [
        r
        for r in regions
        if size_filter.min_area_px <= r.bbox.area and r.bbox.area <= limit
    ]


def mask_to_gt_boxes(mask: np.ndarray, image_id: str) -> list[BoxRecord]:
    """One unscored ground-truth record per lesion component (nonzero = lesion)."""
    return [
        BoxRecord(image_id, *region.bbox) for region in connected_components(mask)
    ]


def score_boxes(
    regions: list[Region], amap: np.ndarray, image_id: str
) -> list[BoxRecord]:
    """Scored detection records: confidence = max map value inside the bbox.

    The map must be the normalized (and upsampled) activation map the mask
    came from, so scores land in [0, 1].
    """
    m = np.asarray(amap)
    records = []
    for region in regions:
        x0, y0, x1, y1 = region.bbox
        if x1 > m.shape[1] or y1 > m.shape[0]:
            raise ShapeMismatch(
                f"bbox {tuple(region.bbox)} exceeds map shape {m.shape}"
            )
        score = float(m[y0:y1, x0:x1].max())
        records.append(BoxRecord(image_id, x0, y0, x1, y1, score=score))
    return records
