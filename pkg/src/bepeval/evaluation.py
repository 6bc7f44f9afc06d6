"""Dataset-level precision/recall and threshold sweeps.

Counts are micro-averaged: precision is total TP over total detections
kept after the size filter, recall is total TP over total ground truths.
A ratio with a zero denominator is ``None`` (rendered as ``NA``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from bepeval.geometry import BBox
from bepeval.matching import TpCriterion, label_pairs, match_frame, pair_frame
from bepeval.metrics import BEP1, BEP2, DICE, IOG, IOU, Y1, Y2, MetricKind, MetricSpec

DEFAULT_MIN_PX = 20.0


class Frame(NamedTuple):
    gts: Sequence[BBox]
    dos: Sequence[BBox]
    video_id: str = ""


def filter_min_size(dos: Iterable[BBox], min_px: float) -> list[BBox]:
    """Drop boxes narrower or shorter than ``min_px``; order is kept."""
    if min_px < 0:
        raise ValueError(f"min_px must be non-negative, got {min_px}")
    return [b for b in dos if b.w >= min_px and b.h >= min_px]


def _ratio(num: int, den: int) -> float | None:
    return num / den if den > 0 else None


@dataclass(frozen=True)
class DatasetReport:
    criterion: TpCriterion
    tp: int
    n_do: int
    n_gt: int
    per_video: dict[str, DatasetReport] | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.tp <= min(self.n_do, self.n_gt):
            raise ValueError(f"inconsistent counts tp={self.tp}, n_do={self.n_do}, n_gt={self.n_gt}")

    @property
    def precision(self) -> float | None:
        return _ratio(self.tp, self.n_do)

    @property
    def recall(self) -> float | None:
        return _ratio(self.tp, self.n_gt)


class _Counts:
    __slots__ = ("tp", "n_do", "n_gt")

    def __init__(self) -> None:
        self.tp = self.n_do = self.n_gt = 0

    def add(self, tp: int, n_do: int, n_gt: int) -> None:
        self.tp += tp
        self.n_do += n_do
        self.n_gt += n_gt


def _frame_parts(frame: Sequence) -> tuple[Sequence[BBox], Sequence[BBox], str]:
    gts, dos = frame[0], frame[1]
    video = frame[2] if len(frame) > 2 else ""
    return gts, dos, video


def evaluate_dataset(
    frames: Iterable[Frame | tuple],
    criterion: TpCriterion,
    min_px: float = DEFAULT_MIN_PX,
    per_video: bool = False,
) -> DatasetReport:
    """Filter, match and count every frame, then form dataset-level ratios.

    ``frames`` holds ``(gts, dos)`` or ``(gts, dos, video_id)`` items. The
    size filter applies to detections only.
    """
    total = _Counts()
    videos: dict[str, _Counts] = {}
    for frame in frames:
        gts, dos, video = _frame_parts(frame)
        kept = filter_min_size(dos, min_px)
        result = match_frame(gts, kept, criterion)
        total.add(result.tp_count, len(kept), len(gts))
        if per_video:
            videos.setdefault(video, _Counts()).add(result.tp_count, len(kept), len(gts))

    breakdown = None
    if per_video:
        breakdown = {
            v: DatasetReport(criterion, c.tp, c.n_do, c.n_gt) for v, c in sorted(videos.items())
        }
    return DatasetReport(criterion, total.tp, total.n_do, total.n_gt, breakdown)


@dataclass(frozen=True)
class ThresholdGrid:
    """Threshold axes; defaults are the grids used for the maritime benchmark."""

    c0: tuple[float, ...] = (0.5, 0.7, 0.9)
    x0: tuple[float, ...] = (math.sqrt(0.5), math.sqrt(0.7), math.sqrt(0.9))
    y0: tuple[float, ...] = (0.6, 0.75, 0.9)

    def __post_init__(self) -> None:
        for axis in ("c0", "x0", "y0"):
            values = getattr(self, axis)
            if not values:
                raise ValueError(f"threshold axis {axis} is empty")
            for v in values:
                if not 0.0 <= v <= 1.0:
                    raise ValueError(f"threshold {axis}={v} outside [0, 1]")

    def criteria_for(self, metric: MetricSpec) -> list[TpCriterion]:
        if metric.is_bep:
            return [TpCriterion(metric, x0=x, y0=y) for y in self.y0 for x in self.x0]
        if metric.kind in (MetricKind.X1, MetricKind.X2):
            return [TpCriterion(metric, c0=x) for x in self.x0]
        if metric.kind in (MetricKind.Y1, MetricKind.Y2):
            return [TpCriterion(metric, c0=y) for y in self.y0]
        return [TpCriterion(metric, c0=c) for c in self.c0]


DEFAULT_SWEEP_METRICS = (IOU, DICE, IOG, BEP1, BEP2, Y1, Y2)


@dataclass
class SweepGrid:
    rows: list[tuple[TpCriterion, DatasetReport]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


def sweep(
    frames: Iterable[Frame | tuple],
    metrics: Sequence[MetricSpec] = DEFAULT_SWEEP_METRICS,
    grid: ThresholdGrid | None = None,
    min_px: float = DEFAULT_MIN_PX,
) -> SweepGrid:
    """One dataset evaluation per (metric, threshold) grid point.

    Pairing depends only on the metric, so each frame is paired once per
    metric and relabelled for every threshold on that metric's axes.
    """
    grid = grid or ThresholdGrid()
    prepared = []
    for frame in frames:
        gts, dos, _ = _frame_parts(frame)
        prepared.append((gts, filter_min_size(dos, min_px)))

    out = SweepGrid()
    for metric in metrics:
        criteria = grid.criteria_for(metric)
        counts = [_Counts() for _ in criteria]
        for gts, kept in prepared:
            paired = pair_frame(gts, kept, metric)
            for crit, acc in zip(criteria, counts):
                acc.add(label_pairs(paired, crit).tp_count, len(kept), len(gts))
        for crit, acc in zip(criteria, counts):
            out.rows.append((crit, DatasetReport(crit, acc.tp, acc.n_do, acc.n_gt)))
    return out


@dataclass
class VerdictGrid:
    """TP/FP verdicts per (criterion, example).

    ``successes`` maps each criterion name to the number of examples whose
    verdict agrees with the reference row, or is ``None`` when no reference
    was given.
    """

    examples: list[str]
    rows: dict[str, list[str]]
    reference: str | None = None
    successes: dict[str, int] | None = None


def example_verdict(gts: Sequence[BBox], dos: Sequence[BBox], criterion: TpCriterion) -> str:
    """``TP`` when there is at least one detection and every detection is a TP."""
    result = match_frame(gts, dos, criterion)
    ok = len(dos) > 0 and result.tp_count == len(dos)
    return "TP" if ok else "FP"


def compare_verdicts(
    examples: Sequence[tuple[str, Sequence[BBox], Sequence[BBox]]],
    criteria: Sequence[TpCriterion],
    reference: str | None = None,
    reference_rows: dict[str, list[str]] | None = None,
) -> VerdictGrid:
    """Build a verdict grid and, optionally, count agreements with a reference row.

    ``reference`` names either one of ``reference_rows`` (externally supplied
    verdicts such as the expected maritime judgement) or one of the
    criteria in the grid.
    """
    names = [name for name, _, _ in examples]
    rows: dict[str, list[str]] = {}
    for crit in criteria:
        rows[crit.name] = [example_verdict(gts, dos, crit) for _, gts, dos in examples]

    if reference is None:
        return VerdictGrid(names, rows)

    extra = reference_rows or {}
    if reference in extra:
        ref = list(extra[reference])
    elif reference in rows:
        ref = rows[reference]
    else:
        raise KeyError(f"reference row {reference!r} not found")
    if len(ref) != len(names):
        raise ValueError(f"reference row has {len(ref)} verdicts for {len(names)} examples")
    successes = {k: sum(v == r for v, r in zip(row, ref)) for k, row in rows.items()}
    all_rows = {reference: ref, **rows} if reference in extra else rows
    return VerdictGrid(names, all_rows, reference, successes)
