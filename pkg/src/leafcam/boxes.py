"""Axis-aligned boxes and the detection/ground-truth CSV schema.

Boxes are half-open pixel rectangles [x_min, x_max) x [y_min, y_max), so
area = width * height with no off-by-one adjustment.  The CSV schema is

    image_id,x_min,y_min,x_max,y_max,score

with a mandatory header line.  The score column is empty (or omitted) for
ground-truth rows and a float in [0, 1] for detections.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, NamedTuple

from .errors import FormatError

CSV_HEADER = "image_id,x_min,y_min,x_max,y_max,score"


class MalformedLine(FormatError):
    """A CSV line has the wrong field count or an unparseable field."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class InvertedBox(FormatError):
    """A CSV line violates 0 <= min < max on either axis."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class BBox(NamedTuple):
    x_min: int
    y_min: int
    x_max: int
    y_max: int

    @property
    def width(self) -> int:
        return self.x_max - self.x_min

    @property
    def height(self) -> int:
        return self.y_max - self.y_min

    @property
    def area(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class BoxRecord:
    image_id: str
    x_min: int
    y_min: int
    x_max: int
    y_max: int
    score: float | None = None

    def __post_init__(self):
        if not self.image_id or "," in self.image_id or "\n" in self.image_id:
            raise ValueError(f"image_id {self.image_id!r} must be non-empty, comma-free")
        if not (0 <= self.x_min < self.x_max):
            raise ValueError(f"x range [{self.x_min}, {self.x_max}) is empty or negative")
        if not (0 <= self.y_min < self.y_max):
            raise ValueError(f"y range [{self.y_min}, {self.y_max}) is empty or negative")
        if self.score is not None and not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")

    @property
    def bbox(self) -> BBox:
        return BBox(self.x_min, self.y_min, self.x_max, self.y_max)

    def with_score(self, score: float) -> "BoxRecord":
        return replace(self, score=score)


def _parse_line(line: str, line_no: int) -> BoxRecord:
    fields = [f.strip() for f in line.split(",")]
    if len(fields) == 6 and fields[5] == "":
        fields = fields[:5]
    if len(fields) not in (5, 6):
        raise MalformedLine(f"expected 5 or 6 fields, got {len(fields)}", line_no)
    image_id = fields[0]
    if not image_id:
        raise MalformedLine("empty image_id", line_no)
    try:
        coords = [int(f) for f in fields[1:5]]
    except ValueError:
        raise MalformedLine(f"non-integer coordinate in {fields[1:5]}", line_no) from None
    score = None
    if len(fields) == 6:
        try:
            score = float(fields[5])
        except ValueError:
            raise MalformedLine(f"non-numeric score {fields[5]!r}", line_no) from None
        if not 0.0 <= score <= 1.0:
            raise MalformedLine(f"score {score} outside [0, 1]", line_no)
    try:
        return BoxRecord(image_id, *coords, score=score)
    except ValueError as exc:
        raise InvertedBox(str(exc), line_no) from None


def read_boxes(text: str) -> list[BoxRecord]:
    """Parse a box CSV document; records keep file order."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        got = lines[0].strip() if lines else "<empty file>"
        raise MalformedLine(f"expected header {CSV_HEADER!r}, got {got!r}", 1)
    records = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        records.append(_parse_line(line, line_no))
    return records


def write_boxes(records: Iterable[BoxRecord]) -> str:
    """Serialize records in order; inverse of read_boxes."""
    lines = [CSV_HEADER]
    for rec in records:
        score = "" if rec.score is None else repr(float(rec.score))
        lines.append(
            f"{rec.image_id},{rec.x_min},{rec.y_min},{rec.x_max},{rec.y_max},{score}"
        )
    return "\n".join(lines) + "\n"


def group_by_image(records: Iterable[BoxRecord]) -> dict[str, list[BoxRecord]]:
    """Group records by image_id, preserving input order within each group."""
    groups: dict[str, list[BoxRecord]] = {}
    for rec in records:
        groups.setdefault(rec.image_id, []).append(rec)
    return groups


def read_boxes_file(path: str | Path) -> list[BoxRecord]:
    return read_boxes(Path(path).read_text())


def write_boxes_file(path: str | Path, records: Iterable[BoxRecord]) -> None:
    Path(path).write_text(write_boxes(records))
