"""leafcam: lesion bounding boxes from classifier activation maps.

Pipeline: exported conv features (+ gradients or class weights) -> CAM ->
normalize -> bilinear upsample -> Otsu/floor threshold -> morphological
opening -> connected components -> size filter -> scored boxes -> mAP and
coverage success-rate evaluation.

Every public function is pure: arrays in, new arrays out, no hidden state,
so batch callers can fan out across threads or processes freely.
"""
from ._kernels import BACKEND
from .binarize import ThresholdConfig, binarize, lesion_mask, morph_open, otsu_threshold
from .boxes import BBox, BoxRecord, read_boxes, write_boxes
from .cam import compute_cam, gradcam_weights, normalize, upsample_bilinear
from .camt import read_camt, write_camt
from .errors import (
    FormatError,
    LeafcamError,
    NoGroundTruth,
    NonFiniteValues,
    ShapeMismatch,
)
from .evaluate import (
    EvalReport,
    MatchRecord,
    average_precision,
    evaluate,
    iou,
    success_rate,
)
from .netpbm import read_pgm, read_ppm, write_pgm, write_ppm
from .pipeline import detect_boxes
from .regions import (
    Region,
    SizeFilter,
    connected_components,
    filter_boxes,
    mask_to_gt_boxes,
    score_boxes,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BBox",
    "BoxRecord",
    "EvalReport",
    "FormatError",
    "LeafcamError",
    "MatchRecord",
    "NoGroundTruth",
    "NonFiniteValues",
    "Region",
    "ShapeMismatch",
    "SizeFilter",
    "ThresholdConfig",
    "average_precision",
    "binarize",
    "compute_cam",
    "connected_components",
    "detect_boxes",
    "evaluate",
    "filter_boxes",
    "gradcam_weights",
    "iou",
    "lesion_mask",
    "mask_to_gt_boxes",
    "morph_open",
    "normalize",
    "otsu_threshold",
    "read_boxes",
    "read_camt",
    "read_pgm",
    "read_ppm",
    "score_boxes",
    "success_rate",
    "upsample_bilinear",
    "write_boxes",
    "write_camt",
    "write_pgm",
    "write_ppm",
]
