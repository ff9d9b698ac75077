"""Detection metrics: IoU, greedy matching, single-class average precision
and the coverage success rate.

Matching for AP is the usual ranked greedy assignment: predictions sorted
by descending score (ties keep input order), each one claims the
highest-IoU still-unmatched ground-truth box of its image when that IoU
clears the threshold, otherwise it is a false positive.  AP integrates the
precision envelope over recall (all-points interpolation).

The success rate deliberately relaxes one-to-one matching: a ground-truth
box counts as captured when any single prediction overlaps at least
``coverage_frac`` of its area, so one large box may capture several truths.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .boxes import BoxRecord, group_by_image
from .errors import NoGroundTruth


@dataclass(frozen=True)
class MatchRecord:
    image_id: str
    pred_index: int  # index into the image's predictions, input order
    gt_index: int | None  # matched GT index within the image, None for FP
    iou: float
    outcome: str  # "TP" | "FP"


@dataclass(frozen=True)
class EvalReport:
    ap: float
    success_rate: float
    n_gt: int
    n_pred: int
    iou_threshold: float
    coverage_frac: float
    matches: tuple[MatchRecord, ...] = field(default=(), repr=False)


def iou(a, b) -> float:
    """Intersection over union of two half-open boxes; 0 when disjoint."""
    ax0, ay0, ax1, ay1 = a
    bx0, by0, bx1, by1 = b
    iw = min(ax1, bx1) - max(ax0, bx0)
    ih = min(ay1, by1) - max(ay0, by0)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter
    return inter / union


def match_predictions(
    preds: list[BoxRecord], gts: list[BoxRecord], iou_threshold: float
) -> list[MatchRecord]:
    """Greedy score-ordered matching; one record per prediction, in global
    rank order (descending score, ties by input order).

    Each TP claims the highest-IoU unmatched GT of its image (lowest GT
    index on IoU ties).  An FP record carries the best IoU it saw among
    then-unmatched GT boxes, 0.0 when none were left.
    """
    for rec in preds:
        if rec.score is None:
            raise ValueError(f"prediction for {rec.image_id!r} has no score")
    gt_groups = group_by_image(gts)
    taken: dict[str, list[bool]] = {
        image_id: [False] * len(boxes) for image_id, boxes in gt_groups.items()
    }
    within_image: list[int] = []
    seen: dict[str, int] = {}
    for rec in preds:
        within_image.append(seen.get(rec.image_id, 0))
        seen[rec.image_id] = within_image[-1] + 1
    ranked = sorted(range(len(preds)), key=lambda i: -preds[i].score)  # stable
    records = []
    for i in ranked:
        rec = preds[i]
        gt_boxes = gt_groups.get(rec.image_id, [])
        used = taken.get(rec.image_id, [])
        best_iou = 0.0
        best_gt = None
        for gi, gt in enumerate(gt_boxes):
            if used[gi]:
                continue
            v = iou(rec.bbox, gt.bbox)
            if v > best_iou:
                best_iou = v
                best_gt = gi
        if best_gt is not None and best_iou >= iou_threshold:
            used[best_gt] = True
            outcome, gt_index = "TP", best_gt
        else:
            outcome, gt_index = "FP", None
        records.append(
            MatchRecord(rec.image_id, within_image[i], gt_index, best_iou, outcome)
        )
    return records


def _ap_from_outcomes(outcomes: list[bool], n_gt: int) -> float:
    tps = 0
    recalls = []
    precisions = []
    for i, is_tp in enumerate(outcomes, start=1):
        tps += is_tp
        recalls.append(tps / n_gt)
        precisions.append(tps / i)
    # precision envelope: running max from the right
    envelope = [0.0] * len(precisions)
    best = 0.0
    for i in range(len(precisions) - 1, -1, -1):
        best = max(best, precisions[i])
        envelope[i] = best
    ap = 0.0
    prev_recall = 0.0
    for i, recall in enumerate(recalls):
        if recall > prev_recall:
            ap += (recall - prev_recall) * envelope[i]
            prev_recall = recall
    return ap


def average_precision(
    preds: list[BoxRecord], gts: list[BoxRecord], iou_threshold: float
) -> float:
    """Area under the precision envelope over recall for ranked detections."""
    if not gts:
        raise NoGroundTruth("no ground-truth boxes to evaluate against")
    matches = match_predictions(preds, gts, iou_threshold)
    return _ap_from_outcomes([m.outcome == "TP" for m in matches], len(gts))


def success_rate(
    preds: list[BoxRecord], gts: list[BoxRecord], coverage_frac: float = 1.0
) -> float:
    """Fraction of GT boxes with >= coverage_frac of their area inside some
    same-image prediction.  One prediction may capture several GT boxes.
    """
    if not gts:
        raise NoGroundTruth("no ground-truth boxes to evaluate against")
    pred_groups = group_by_image(preds)
    captured = 0
    for gt in gts:
        gx0, gy0, gx1, gy1 = gt.bbox
        g_area = gt.bbox.area
        for pred in pred_groups.get(gt.image_id, []):
            px0, py0, px1, py1 = pred.bbox
            iw = min(gx1, px1) - max(gx0, px0)
            ih = min(gy1, py1) - max(gy0, py0)
            inter = max(iw, 0) * max(ih, 0)
            if inter / g_area >= coverage_frac:
                captured += 1
                break
    return captured / len(gts)


def evaluate(
    preds: list[BoxRecord],
    gts: list[BoxRecord],
    iou_threshold: float = 0.001,
    coverage_frac: float = 1.0,
) -> EvalReport:
    """Full report: AP, success rate, counts and per-prediction match records."""
    if not gts:
        raise NoGroundTruth("no ground-truth boxes to evaluate against")
    matches = match_predictions(preds, gts, iou_threshold)
    return EvalReport(
        ap=_ap_from_outcomes([m.outcome == "TP" for m in matches], len(gts)),
        success_rate=success_rate(preds, gts, coverage_frac),
        n_gt=len(gts),
        n_pred=len(preds),
        iou_threshold=iou_threshold,
        coverage_frac=coverage_frac,
        matches=tuple(matches),
    )


REPORT_FIELDS = ("ap", "success_rate", "n_gt", "n_pred", "iou_threshold", "coverage_frac")


def render_report(report: EvalReport) -> str:
    """Human-readable summary table."""
    rows = [
        ("ap", f"{report.ap:.6f}"),
        ("success_rate", f"{report.success_rate:.6f}"),
        ("n_gt", str(report.n_gt)),
        ("n_pred", str(report.n_pred)),
        ("iou_threshold", f"{report.iou_threshold:g}"),
        ("coverage_frac", f"{report.coverage_frac:g}"),
    ]
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name:<{width}}  {value}" for name, value in rows) + "\n"


def report_lines(report: EvalReport) -> str:
    """Machine-readable key=value document with stable field names."""
    return "".join(f"{name}={getattr(report, name)!r}\n" for name in REPORT_FIELDS)
