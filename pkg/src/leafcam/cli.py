"""Command-line pipeline driver.

Exit codes: 0 success, 2 I/O failure, 3 shape/format violation,
4 evaluation-domain error (no ground truth).  All subcommands are
deterministic: identical inputs and flags give byte-identical outputs.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import camt, netpbm
from .binarize import ThresholdConfig
from .boxes import BoxRecord, read_boxes, write_boxes
from .cam import compute_cam, gradcam_weights, normalize, upsample_bilinear
from .errors import FormatError, NoGroundTruth, ShapeMismatch
from .evaluate import evaluate, render_report, report_lines
from .pipeline import detect_boxes
from .regions import SizeFilter, mask_to_gt_boxes

GREEN = (0, 255, 0)
RED = (255, 0, 0)


def image_id_for(path: str | Path) -> str:
    """Image id = file name up to the first dot (img1.map.camt -> img1)."""
    return Path(path).name.split(".")[0]


def _read_bytes(path: str) -> bytes:
    return Path(path).read_bytes()


def _load_camt(path: str) -> np.ndarray:
    try:
        return camt.read_camt(_read_bytes(path))
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def _load_pgm(path: str) -> np.ndarray:
    try:
        return netpbm.read_pgm(_read_bytes(path))
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def _load_boxes(path: str) -> list[BoxRecord]:
    try:
        return read_boxes(Path(path).read_text())
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def _threshold_config(args: argparse.Namespace) -> ThresholdConfig:
    return ThresholdConfig(
        t_floor=args.t_floor,
        open_kernel=args.open_kernel,
        open_iterations=args.open_iters,
    )


def _size_filter(args: argparse.Namespace) -> SizeFilter:
    return SizeFilter(min_area_px=args.min_area, max_area_frac=args.max_area_frac)


def _make_map(features: np.ndarray, weights: np.ndarray, args) -> np.ndarray:
    if features.ndim != 3:
        raise ShapeMismatch(
            f"{args.features}: features must be 3-D (C,H,W), got {features.shape}"
        )
    cam_map = compute_cam(features, weights, relu=args.relu)
    return upsample_bilinear(normalize(cam_map), args.height, args.width)


def cmd_cam(args) -> int:
    features = _load_camt(args.features)
    weights = _load_camt(args.weights)
    if weights.ndim != 1:
        raise ShapeMismatch(f"{args.weights}: weights must be 1-D, got {weights.shape}")
    out = _make_map(features, weights, args)
    Path(args.out).write_bytes(camt.write_camt(out))
    return 0


def cmd_gradcam(args) -> int:
    features = _load_camt(args.features)
    grads = _load_camt(args.grads)
    if grads.shape != features.shape:
        raise ShapeMismatch(
            f"{args.grads}: gradients shape {grads.shape} does not match "
            f"features shape {features.shape}"
        )
    out = _make_map(features, gradcam_weights(grads), args)
    Path(args.out).write_bytes(camt.write_camt(out))
    return 0


def _map_paths(map_arg: str) -> list[Path]:
    p = Path(map_arg)
    if p.is_dir():
        return sorted(p.glob("*.camt"))
    return [p]


def _detect_records(
    paths: list[Path], cfg: ThresholdConfig, size_filter: SizeFilter
) -> list[BoxRecord]:
    records = []
    for path in paths:
        amap = _load_camt(str(path))
        if amap.ndim != 2:
            raise ShapeMismatch(f"{path}: map must be 2-D, got {amap.shape}")
        records.extend(detect_boxes(amap, image_id_for(path), cfg, size_filter))
    return records


def cmd_detect(args) -> int:
    records = _detect_records(
        _map_paths(args.map), _threshold_config(args), _size_filter(args)
    )
    Path(args.out).write_text(write_boxes(records))
    return 0


def cmd_convert_masks(args) -> int:
    records = []
    for path in sorted(Path(args.masks_dir).glob("*.pgm")):
        mask = _load_pgm(str(path))
        records.extend(mask_to_gt_boxes(mask, path.stem))
    Path(args.out).write_text(write_boxes(records))
    return 0


def cmd_eval(args) -> int:
    gts = _load_boxes(args.gt)
    preds = _load_boxes(args.det)
    report = evaluate(
        preds, gts, iou_threshold=args.iou, coverage_frac=args.coverage
    )
    sys.stdout.write(render_report(report))
    if args.out:
        Path(args.out).write_text(report_lines(report))
    return 0


def _draw_box(img: np.ndarray, box, color) -> None:
    h, w = img.shape[:2]
    x0, y0 = max(box.x_min, 0), max(box.y_min, 0)
    x1, y1 = min(box.x_max, w), min(box.y_max, h)
    if x0 >= x1 or y0 >= y1:
        return
    img[y0, x0:x1] = color
    img[y1 - 1, x0:x1] = color
    img[y0:y1, x0] = color
    img[y0:y1, x1 - 1] = color


def cmd_overlay(args) -> int:
    gray = _load_pgm(args.image)
    rgb = np.stack([gray, gray, gray], axis=-1)
    image_id = image_id_for(args.image)
    if args.gt:
        for rec in _load_boxes(args.gt):
            if rec.image_id == image_id:
                _draw_box(rgb, rec.bbox, GREEN)
    if args.det:
        for rec in _load_boxes(args.det):
            if rec.image_id == image_id:
                _draw_box(rgb, rec.bbox, RED)
    Path(args.out).write_bytes(netpbm.write_ppm(rgb))
    return 0


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",")]


def cmd_sweep(args) -> int:
    gts = _load_boxes(args.gt)
    maps = []
    for path in _map_paths(args.map):
        amap = _load_camt(str(path))
        if amap.ndim != 2:
            raise ShapeMismatch(f"{path}: map must be 2-D, got {amap.shape}")
        maps.append((image_id_for(path), amap))
    lines = ["t_floor,min_area,ap,success_rate"]
    for t_floor in sorted(set(args.t_floor)):
        cfg = ThresholdConfig(
            t_floor=t_floor,
            open_kernel=args.open_kernel,
            open_iterations=args.open_iters,
        )
        for min_area in sorted(set(args.min_area)):
            size_filter = SizeFilter(
                min_area_px=min_area, max_area_frac=args.max_area_frac
            )
            preds = []
            for image_id, amap in maps:
                preds.extend(detect_boxes(amap, image_id, cfg, size_filter))
            report = evaluate(
                preds, gts, iou_threshold=args.iou, coverage_frac=args.coverage
            )
            lines.append(
                f"{t_floor:g},{min_area},{report.ap:.6f},{report.success_rate:.6f}"
            )
    table = "\n".join(lines) + "\n"
    sys.stdout.write(table)
    if args.out:
        Path(args.out).write_text(table)
    return 0


def _add_threshold_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-floor", type=float, default=0.2, help="fixed threshold floor")
    p.add_argument("--open-kernel", type=int, default=3, help="opening kernel size (odd)")
    p.add_argument("--open-iters", type=int, default=3, help="opening iterations")


def _add_filter_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--min-area", type=int, default=25, help="min bbox area in px^2")
    p.add_argument(
        "--max-area-frac", type=float, default=1.0, help="max bbox area / image area"
    )


def _add_eval_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--iou", type=float, default=0.001, help="IoU threshold for AP")
    p.add_argument(
        "--coverage", type=float, default=1.0, help="GT area fraction for success rate"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leafcam",
        description="Lesion bounding boxes from classifier activation maps.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("cam", help="weighted-sum activation map from features")
    p.add_argument("--features", required=True, help="CAMT (C,H,W) feature tensor")
    p.add_argument("--weights", required=True, help="CAMT length-C class weights")
    p.add_argument("--out", required=True, help="output CAMT map")
    p.add_argument("--relu", action="store_true", help="clamp negative sums to zero")
    p.add_argument("--width", type=int, default=224)
    p.add_argument("--height", type=int, default=224)
    p.set_defaults(func=cmd_cam)

    p = sub.add_parser("gradcam", help="activation map with gradient-mean weights")
    p.add_argument("--features", required=True, help="CAMT (C,H,W) feature tensor")
    p.add_argument("--grads", required=True, help="CAMT (C,H,W) gradient tensor")
    p.add_argument("--out", required=True, help="output CAMT map")
    p.add_argument("--relu", action="store_true", help="clamp negative sums to zero")
    p.add_argument("--width", type=int, default=224)
    p.add_argument("--height", type=int, default=224)
    p.set_defaults(func=cmd_gradcam)

    p = sub.add_parser("detect", help="scored lesion boxes from a map")
    p.add_argument("--map", required=True, help="CAMT map file or directory of them")
    p.add_argument("--out", required=True, help="output detections CSV")
    _add_threshold_flags(p)
    _add_filter_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("convert-masks", help="GT boxes from segmentation masks")
    p.add_argument("--masks-dir", required=True, help="directory of PGM masks")
    p.add_argument("--out", required=True, help="output ground-truth CSV")
    p.set_defaults(func=cmd_convert_masks)

    p = sub.add_parser("eval", help="AP and success rate of detections vs GT")
    p.add_argument("--gt", required=True, help="ground-truth CSV")
    p.add_argument("--det", required=True, help="detections CSV")
    p.add_argument("--out", help="also write machine-readable key=value report")
    _add_eval_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("overlay", help="draw GT (green) and predictions (red)")
    p.add_argument("--image", required=True, help="base PGM image")
    p.add_argument("--gt", help="ground-truth CSV")
    p.add_argument("--det", help="detections CSV")
    p.add_argument("--out", required=True, help="output PPM image")
    p.set_defaults(func=cmd_overlay)

    p = sub.add_parser("sweep", help="grid of (t_floor, min_area) -> metrics")
    p.add_argument("--map", required=True, help="CAMT map file or directory of them")
    p.add_argument("--gt", required=True, help="ground-truth CSV")
    p.add_argument("--out", help="also write the table to a file")
    p.add_argument(
        "--t-floor", type=_float_list, default=[0.2], help="comma-separated floors"
    )
    p.add_argument(
        "--min-area", type=_int_list, default=[25], help="comma-separated min areas"
    )
    p.add_argument("--open-kernel", type=int, default=3)
    p.add_argument("--open-iters", type=int, default=3)
    p.add_argument("--max-area-frac", type=float, default=1.0)
    _add_eval_flags(p)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        name = exc.filename if exc.filename else exc
        print(f"error: cannot read or write {name}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    except (FormatError, ShapeMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NoGroundTruth as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
