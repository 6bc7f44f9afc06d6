"""Per-frame pairing of detections with ground truths and TP labelling.

Pairing is greedy and one-to-one on the criterion's metric score, highest
first; ties go to the lower GT index, then the lower DO index. Zero-score
pairs are never formed. Thresholds are applied only after pairing, so a
stricter threshold can never create a true positive.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Sequence

from bepeval.geometry import BBox
from bepeval.metrics import MetricSpec, bep_components, score


def _check_threshold(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise ValueError(f"threshold {name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class TpCriterion:
    """Rule labelling a matched pair as a true positive.

    Single mode (``c0`` set) tests ``score > c0``. Dual mode (``x0`` and
    ``y0`` set, BEP metrics only) tests ``X > x0 and Y > y0``.
    """

    metric: MetricSpec
    c0: float | None = None
    x0: float | None = None
    y0: float | None = None

    def __post_init__(self) -> None:
        single = self.c0 is not None
        dual = self.x0 is not None or self.y0 is not None
        if single == dual:
            raise ValueError("give either c0, or both x0 and y0")
        if single:
            _check_threshold("c0", self.c0)
            return
        if self.x0 is None or self.y0 is None:
            raise ValueError("dual mode needs both x0 and y0")
        if not self.metric.is_bep:
            raise ValueError(f"dual thresholds only apply to BEP1/BEP2, not {self.metric.name}")
        _check_threshold("x0", self.x0)
        _check_threshold("y0", self.y0)

    @classmethod
    def single(cls, metric: MetricSpec | str, c0: float) -> TpCriterion:
        if isinstance(metric, str):
            metric = MetricSpec.of(metric)
        return cls(metric, c0=c0)

    @classmethod
    def dual(cls, metric: MetricSpec | str, x0: float, y0: float) -> TpCriterion:
        if isinstance(metric, str):
            metric = MetricSpec.of(metric)
        return cls(metric, x0=x0, y0=y0)

    @classmethod
    def parse(cls, text: str) -> TpCriterion:
        """Parse ``iou:0.5``, ``bep2:0.7,0.75`` or ``tversky(1,0):0.5``."""
        metric_text, sep, thr_text = text.strip().rpartition(":")
        if not sep or not metric_text:
            raise ValueError(f"expected METRIC:THRESHOLD[,THRESHOLD], got {text!r}")
        metric = MetricSpec.of(metric_text)
        try:
            values = [float(v) for v in re.split(r"\s*,\s*", thr_text.strip())]
        except ValueError:
            raise ValueError(f"non-numeric threshold in {text!r}") from None
        if len(values) == 1:
            return cls(metric, c0=values[0])
        if len(values) == 2:
            return cls(metric, x0=values[0], y0=values[1])
        raise ValueError(f"expected one or two thresholds, got {len(values)} in {text!r}")

    @property
    def is_dual(self) -> bool:
        return self.c0 is None

    @property
    def name(self) -> str:
        if self.is_dual:
            return f"{self.metric.name}({self.x0:g},{self.y0:g})"
        return f"{self.metric.name}({self.c0:g})"

    def accepts(self, gt: BBox, do_: BBox) -> bool:
        """Direct criterion test on one pair, bypassing matching."""
        if self.is_dual:
            comp = bep_components(self.metric, gt, do_)
            return comp.x > self.x0 and comp.y > self.y0
        return score(self.metric, gt, do_) > self.c0

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class MatchedPair:
    gt_index: int
    do_index: int
    score: float
    is_tp: bool


@dataclass(frozen=True)
class MatchResult:
    """Outcome of one frame.

    ``unmatched_gt``/``unmatched_do`` list boxes left out of every pair.
    Paired boxes that fail the criterion also count as FN/FP, see
    ``fn_count`` and ``fp_count``.
    """

    pairs: list[MatchedPair] = field(default_factory=list)
    unmatched_gt: list[int] = field(default_factory=list)
    unmatched_do: list[int] = field(default_factory=list)

    @property
    def tp_count(self) -> int:
        return sum(p.is_tp for p in self.pairs)

    @property
    def fp_count(self) -> int:
        return len(self.pairs) - self.tp_count + len(self.unmatched_do)

    @property
    def fn_count(self) -> int:
        return len(self.pairs) - self.tp_count + len(self.unmatched_gt)


@dataclass(frozen=True)
class _Candidate:
    gt_index: int
    do_index: int
    score: float
    x: float | None
    y: float | None


def pair_frame(
    gts: Sequence[BBox], dos: Sequence[BBox], metric: MetricSpec
) -> tuple[list[_Candidate], list[int], list[int]]:
    """Greedy one-to-one pairing, independent of any threshold."""
    candidates = []
    for gi, gt in enumerate(gts):
        for di, do_ in enumerate(dos):
            if metric.is_bep:
                s, x, y = bep_components(metric, gt, do_)
            else:
                s, x, y = score(metric, gt, do_), None, None
            if s > 0:
                candidates.append(_Candidate(gi, di, s, x, y))
    candidates.sort(key=lambda c: (-c.score, c.gt_index, c.do_index))

    used_gt: set[int] = set()
    used_do: set[int] = set()
    accepted = []
    for cand in candidates:
        if cand.gt_index in used_gt or cand.do_index in used_do:
            continue
        used_gt.add(cand.gt_index)
        used_do.add(cand.do_index)
        accepted.append(cand)
    unmatched_gt = [i for i in range(len(gts)) if i not in used_gt]
    unmatched_do = [i for i in range(len(dos)) if i not in used_do]
    return accepted, unmatched_gt, unmatched_do


def _is_tp(cand: _Candidate, criterion: TpCriterion) -> bool:
    if criterion.is_dual:
        return cand.x > criterion.x0 and cand.y > criterion.y0
    return cand.score > criterion.c0


def label_pairs(
    paired: tuple[list[_Candidate], list[int], list[int]], criterion: TpCriterion
) -> MatchResult:
    accepted, unmatched_gt, unmatched_do = paired
    pairs = [
        MatchedPair(c.gt_index, c.do_index, c.score, _is_tp(c, criterion)) for c in accepted
    ]
    return MatchResult(pairs, list(unmatched_gt), list(unmatched_do))


def match_frame(gts: Sequence[BBox], dos: Sequence[BBox], criterion: TpCriterion) -> MatchResult:
    return label_pairs(pair_frame(gts, dos, criterion.metric), criterion)
