"""Ten archetypal maritime detections with their acceptability verdicts.

Every scenario has one ground-truth vessel and one detection. Geometry is
written in fractions of the GT width and height, then placed on a 200x100
vessel so all coordinates are integers. The shapes are representative, not
measured: only the verdict pattern is fixed, and each sub-metric is kept at
least ``MIN_MARGIN`` away from its threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from bepeval.geometry import BBox
from bepeval.io import AnnotatedFrame, Annotation
from bepeval.matching import TpCriterion
from bepeval.metrics import BEP1, BEP2, DICE, IOG, IOU, X1, X2, Y1, Y2, bep_components, score

REFERENCE_ROW = "Maritime CV"
MIN_MARGIN = 0.02
SCENARIO_VIDEO = "scenarios"


def qualitative_criteria() -> list[TpCriterion]:
    """The nine criteria of the qualitative comparison, in table order."""
    return [
        TpCriterion(IOU, c0=0.5),
        TpCriterion(DICE, c0=0.5),
        TpCriterion(IOG, c0=0.5),
        TpCriterion(BEP1, x0=0.7, y0=0.75),
        TpCriterion(BEP2, x0=0.7, y0=0.75),
        TpCriterion(X1, c0=0.7),
        TpCriterion(X2, c0=0.7),
        TpCriterion(Y1, c0=0.75),
        TpCriterion(Y2, c0=0.75),
    ]


def _row(text: str) -> list[str]:
    return text.split()


# Verdict grid as published, examples 1-10.
PUBLISHED_VERDICTS: dict[str, list[str]] = {
    REFERENCE_ROW: _row("TP TP TP FP TP TP FP FP FP FP"),
    "IOU(0.5)": _row("TP FP FP TP FP FP FP TP FP TP"),
    "Dice(0.5)": _row("TP FP FP TP TP FP TP TP TP TP"),
    "IOG(0.5)": _row("TP FP FP FP TP FP TP TP FP TP"),
    "BEP1(0.7,0.75)": _row("TP TP TP FP FP FP FP TP TP FP"),
    "BEP2(0.7,0.75)": _row("TP TP TP FP TP TP FP FP FP FP"),
    "X1(0.7)": _row("TP TP TP TP FP FP TP TP TP TP"),
    "X2(0.7)": _row("TP TP TP TP TP TP TP TP TP TP"),
    "Y1(0.75)": _row("TP TP TP FP TP TP FP TP TP FP"),
    "Y2(0.75)": _row("TP TP TP FP TP TP FP FP FP FP"),
}

PUBLISHED_SUCCESSES = {
    "IOU(0.5)": 3,
    "Dice(0.5)": 2,
    "IOG(0.5)": 4,
    "BEP1(0.7,0.75)": 6,
    "BEP2(0.7,0.75)": 10,
    "X1(0.7)": 3,
    "X2(0.7)": 5,
    "Y1(0.75)": 8,
    "Y2(0.75)": 10,
}

# Published cells that no box pair can produce, keyed (criterion, example).
# IOU <= IOG always, so IOU TP with IOG FP is impossible (example 4).
# Y1 <= Y2 and BEP1 <= BEP2 always, so Y1/BEP1 TP with Y2/BEP2 FP is
# impossible (examples 8 and 9).
INFEASIBLE_CELLS = frozenset(
    {
        ("IOU(0.5)", 4),
        ("Y1(0.75)", 8),
        ("Y1(0.75)", 9),
        ("BEP1(0.7,0.75)", 8),
        ("BEP1(0.7,0.75)", 9),
    }
)


@dataclass(frozen=True)
class ScenarioFixture:
    name: str
    example: int
    description: str
    gts: list[BBox]
    dos: list[BBox]
    expected: dict[str, str] = field(default_factory=dict)


_GT = BBox(500, 400, 200, 100)

# (name, description, DO as fractions (dx, dy, w, h) of the GT box)
_SHAPES = [
    ("exact", "detection coincides with the vessel", (0.0, 0.0, 1.0, 1.0)),
    ("hull-only", "superstructure missed, hull found", (0.0, 0.70, 1.0, 0.30)),
    ("hull-only-wide", "low hull strip, slightly wide and low", (-0.05, 0.75, 1.10, 0.27)),
    ("superstructure-only", "top 40% of the vessel, hull missed", (0.0, 0.0, 1.0, 0.40)),
    ("wake-horizontal", "wake widens the box 60% on each side", (-0.60, 0.0, 2.20, 1.0)),
    ("wake-hull", "hull plus a long horizontal wake", (-0.80, 0.60, 2.60, 0.40)),
    ("wake-vertical", "wake drags the box far below the hull", (-0.05, 0.0, 1.10, 2.40)),
    ("occlusion-merge", "merged with a nearer object, bottom pushed down", (0.0, 0.0, 1.20, 1.30)),
    ("occlusion-kayak", "merged with a kayak behind, bottom raised", (0.0, -0.15, 1.0, 0.60)),
    ("occlusion-offset", "merged with a vessel behind, bottom raised", (0.02, -0.28, 1.0, 1.0)),
]

# Verdicts each geometry is built to produce. They equal the published grid
# apart from INFEASIBLE_CELLS.
_EXPECTED = {
    REFERENCE_ROW: PUBLISHED_VERDICTS[REFERENCE_ROW],
    "IOU(0.5)": _row("TP FP FP FP FP FP FP TP FP TP"),
    "Dice(0.5)": PUBLISHED_VERDICTS["Dice(0.5)"],
    "IOG(0.5)": PUBLISHED_VERDICTS["IOG(0.5)"],
    "BEP1(0.7,0.75)": _row("TP TP TP FP FP FP FP FP FP FP"),
    "BEP2(0.7,0.75)": PUBLISHED_VERDICTS["BEP2(0.7,0.75)"],
    "X1(0.7)": PUBLISHED_VERDICTS["X1(0.7)"],
    "X2(0.7)": PUBLISHED_VERDICTS["X2(0.7)"],
    "Y1(0.75)": _row("TP TP TP FP TP TP FP FP FP FP"),
    "Y2(0.75)": PUBLISHED_VERDICTS["Y2(0.75)"],
}


# Two GT/DO pairs with identical GT-only, shared and DO-only areas: a
# 40%-high strip along the hull versus along the superstructure. Every
# Tversky index scores them alike; BEP1 separates them (1.0 vs 0.0).
EQUAL_AREA_PAIRS: tuple[tuple[BBox, BBox], tuple[BBox, BBox]] = (
    (_GT, BBox(500, 460, 200, 40)),
    (_GT, BBox(500, 400, 200, 40)),
)


def _place(gt: BBox, dx: float, dy: float, fw: float, fh: float) -> BBox:
    def px(v: float) -> float:
        r = round(v, 9)
        return int(r) if r.is_integer() else r

    return BBox(px(gt.x + dx * gt.w), px(gt.y + dy * gt.h), px(fw * gt.w), px(fh * gt.h))


def builtin_scenarios() -> list[ScenarioFixture]:
    out = []
    for i, (name, desc, rel) in enumerate(_SHAPES):
        expected = {k: v[i] for k, v in _EXPECTED.items()}
        out.append(ScenarioFixture(name, i + 1, desc, [_GT], [_place(_GT, *rel)], expected))
    return out


def reference_row(scenarios: list[ScenarioFixture], row: str = REFERENCE_ROW) -> list[str]:
    return [s.expected[row] for s in scenarios]


def scenario_annotations(
    scenarios: list[ScenarioFixture],
) -> tuple[list[AnnotatedFrame], list[AnnotatedFrame]]:
    """GT and detection frames, one frame per scenario numbered by example."""
    gt_frames, det_frames = [], []
    for s in scenarios:
        gt_frames.append(
            AnnotatedFrame(SCENARIO_VIDEO, s.example, [Annotation(b, "vessel", s.name) for b in s.gts])
        )
        det_frames.append(
            AnnotatedFrame(SCENARIO_VIDEO, s.example, [Annotation(b, "vessel", s.name) for b in s.dos])
        )
    return gt_frames, det_frames


def threshold_margins(scenario: ScenarioFixture) -> dict[str, float]:
    """Distance of every thresholded quantity from its threshold, per criterion.

    Dual criteria report the smaller of the X and Y distances.
    """
    gt, do_ = scenario.gts[0], scenario.dos[0]
    out = {}
    for crit in qualitative_criteria():
        if crit.is_dual:
            comp = bep_components(crit.metric, gt, do_)
            out[crit.name] = min(abs(comp.x - crit.x0), abs(comp.y - crit.y0))
        else:
            out[crit.name] = abs(score(crit.metric, gt, do_) - crit.c0)
    return out

