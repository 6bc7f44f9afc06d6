"""Bounding-box assessment metrics for maritime object detection.

Conventional Tversky-family overlap indices (IOU, Dice, IOG) sit next to the
bottom-edge-proximity scores BEP1 and BEP2, which reward a correct bottom
edge and horizontal span rather than raw area overlap.
"""

from bepeval.evaluation import (
    DatasetReport,
    Frame,
    SweepGrid,
    ThresholdGrid,
    VerdictGrid,
    compare_verdicts,
    evaluate_dataset,
    filter_min_size,
    sweep,
)
from bepeval.geometry import (
    BBox,
    HorizontalDecomposition,
    InvalidBoxError,
    OverlapDecomposition,
    bottom_edge_gap,
    decompose_areas,
    decompose_horizontal,
)
from bepeval.matching import MatchedPair, MatchResult, TpCriterion, match_frame
from bepeval.metrics import (
    BepScore,
    BinaryMask,
    MetricKind,
    MetricSpec,
    bep1,
    bep2,
    score,
    tversky,
    tversky_mask,
)

__version__ = "0.1.0"

__all__ = [
    "BBox",
    "BepScore",
    "BinaryMask",
    "DatasetReport",
    "Frame",
    "HorizontalDecomposition",
    "InvalidBoxError",
    "MatchResult",
    "MatchedPair",
    "MetricKind",
    "MetricSpec",
    "OverlapDecomposition",
    "SweepGrid",
    "ThresholdGrid",
    "TpCriterion",
    "VerdictGrid",
    "bep1",
    "bep2",
    "bottom_edge_gap",
    "compare_verdicts",
    "decompose_areas",
    "decompose_horizontal",
    "evaluate_dataset",
    "filter_min_size",
    "match_frame",
    "score",
    "sweep",
    "tversky",
    "tversky_mask",
]
