"""Map-to-detections composition shared by the CLI and the sweep."""
from __future__ import annotations

import numpy as np

from .binarize import ThresholdConfig, lesion_mask
from .boxes import BoxRecord
from .regions import SizeFilter, connected_components, filter_boxes, score_boxes


def detect_boxes(
    amap: np.ndarray,
    image_id: str,
    cfg: ThresholdConfig = ThresholdConfig(),
    size_filter: SizeFilter = SizeFilter(),
) -> list[BoxRecord]:
    """Normalized map -> scored detection records.

    binarize -> open -> components -> size filter -> score.
    """
    m = np.asarray(amap)
    mask = lesion_mask(m, cfg)
    regions = connected_components(mask)
    kept = filter_boxes(regions, size_filter, image_area=m.shape[0] * m.shape[1])
    return score_boxes(kept, m, image_id)
