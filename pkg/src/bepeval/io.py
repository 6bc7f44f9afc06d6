"""Line-delimited JSON annotation files.

Each non-blank line is one box::

    {"video_id": "v1", "frame": 0, "x": 0, "y": 0, "w": 10, "h": 10, "label": "ferry"}

``id`` is optional; unknown keys are ignored. Ground-truth and detection
files share the schema. See ``docs/annotation_schema.md`` for the field table.
"""

from __future__ import annotations

import json
import numbers
import os
from dataclasses import dataclass, field
from typing import IO, Iterable

from bepeval.evaluation import Frame
from bepeval.geometry import BBox, InvalidBoxError

REQUIRED_FIELDS = ("video_id", "frame", "x", "y", "w", "h", "label")


class AnnotationError(ValueError):
    def __init__(self, path: str, line: int, message: str) -> None:
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass(frozen=True)
class Annotation:
    box: BBox
    label: str
    object_id: str | None = None


@dataclass
class AnnotatedFrame:
    video_id: str
    frame_index: int
    boxes: list[Annotation] = field(default_factory=list)


def _parse_record(record: object, path: str, lineno: int) -> tuple[str, int, Annotation]:
    if not isinstance(record, dict):
        raise AnnotationError(path, lineno, "record must be a JSON object")
    missing = [k for k in REQUIRED_FIELDS if k not in record]
    if missing:
        raise AnnotationError(path, lineno, f"missing field(s): {', '.join(missing)}")

    video_id = record["video_id"]
    if not isinstance(video_id, str):
        raise AnnotationError(path, lineno, "video_id must be a string")
    frame = record["frame"]
    if isinstance(frame, bool) or not isinstance(frame, int) or frame < 0:
        raise AnnotationError(path, lineno, f"frame must be a non-negative integer, got {frame!r}")
    label = record["label"]
    if not isinstance(label, str):
        raise AnnotationError(path, lineno, "label must be a string")
    object_id = record.get("id")
    if object_id is not None:
        object_id = str(object_id)

    coords = [record[k] for k in ("x", "y", "w", "h")]
    for k, v in zip("xywh", coords):
        if isinstance(v, bool) or not isinstance(v, numbers.Real):
            raise AnnotationError(path, lineno, f"{k} must be a number, got {v!r}")
    try:
        box = BBox(*coords)
    except InvalidBoxError as exc:
        raise AnnotationError(path, lineno, f"invalid box: {exc}") from None
    return video_id, frame, Annotation(box, label, object_id)


def read_annotations(stream: IO[str], path: str = "<stream>") -> list[AnnotatedFrame]:
    frames: dict[tuple[str, int], AnnotatedFrame] = {}
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise AnnotationError(path, lineno, f"parse error: {exc.msg}") from None
        video_id, frame, ann = _parse_record(record, path, lineno)
        key = (video_id, frame)
        if key not in frames:
            frames[key] = AnnotatedFrame(video_id, frame)
        frames[key].boxes.append(ann)
    return [frames[k] for k in sorted(frames)]


def load_annotations(path: str | os.PathLike) -> list[AnnotatedFrame]:
    """Read a file and group its records into frames sorted by (video_id, frame)."""
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        return read_annotations(fh, path)


def _number(v: float) -> int | float:
    return int(v) if float(v).is_integer() else float(v)


def to_records(frames: Iterable[AnnotatedFrame]) -> list[dict]:
    records = []
    for fr in frames:
        for ann in fr.boxes:
            rec = {
                "video_id": fr.video_id,
                "frame": fr.frame_index,
                "x": _number(ann.box.x),
                "y": _number(ann.box.y),
                "w": _number(ann.box.w),
                "h": _number(ann.box.h),
                "label": ann.label,
            }
            if ann.object_id is not None:
                rec["id"] = ann.object_id
            records.append(rec)
    return records


def write_annotations(frames: Iterable[AnnotatedFrame], stream: IO[str]) -> None:
    for rec in to_records(frames):
        stream.write(json.dumps(rec, ensure_ascii=False) + "\n")


def dump_annotations(frames: Iterable[AnnotatedFrame], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_annotations(frames, fh)


def align_frames(
    gt_frames: Iterable[AnnotatedFrame], det_frames: Iterable[AnnotatedFrame]
) -> list[Frame]:
    """Join GT and detection frames on (video_id, frame).

    A frame present in only one file pairs with an empty box list there.
    """
    gt = {(f.video_id, f.frame_index): f for f in gt_frames}
    det = {(f.video_id, f.frame_index): f for f in det_frames}
    out = []
    for key in sorted(set(gt) | set(det)):
        gts = [a.box for a in gt[key].boxes] if key in gt else []
        dos = [a.box for a in det[key].boxes] if key in det else []
        out.append(Frame(gts, dos, key[0]))
    return out
