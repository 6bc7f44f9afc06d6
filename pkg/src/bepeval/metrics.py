"""Similarity scores between a ground-truth box (GT) and a detection (DO).

Two families live here:

* the Tversky index ``b / (b + alpha*a + beta*c)`` over the GT-only,
  shared and DO-only areas, with IOU, Dice and IOG as presets;
* bottom-edge proximity, ``BEP = X * Y``, where ``X`` measures agreement of
  the horizontal spans and ``Y`` the agreement of the bottom edges.
  BEP1 is symmetric in GT and DO; BEP2 is referenced to the GT only and so
  tolerates detections widened by wakes.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from bepeval.geometry import BBox, bottom_edge_gap, decompose_areas, decompose_horizontal


class MetricKind(enum.Enum):
    TVERSKY = "tversky"
    IOU = "iou"
    DICE = "dice"
    IOG = "iog"
    BEP1 = "bep1"
    BEP2 = "bep2"
    X1 = "x1"
    X2 = "x2"
    Y1 = "y1"
    Y2 = "y2"


_TVERSKY_PRESETS = {
    MetricKind.IOU: (1.0, 1.0),
    MetricKind.DICE: (0.5, 0.5),
    MetricKind.IOG: (1.0, 0.0),
}

_DISPLAY = {
    MetricKind.IOU: "IOU",
    MetricKind.DICE: "Dice",
    MetricKind.IOG: "IOG",
    MetricKind.BEP1: "BEP1",
    MetricKind.BEP2: "BEP2",
    MetricKind.X1: "X1",
    MetricKind.X2: "X2",
    MetricKind.Y1: "Y1",
    MetricKind.Y2: "Y2",
}

_TVERSKY_RE = re.compile(r"^tversky\(\s*([^,()]+)\s*,\s*([^,()]+)\s*\)$", re.IGNORECASE)


@dataclass(frozen=True)
class MetricSpec:
    """A metric to compute; ``alpha``/``beta`` are only used by ``TVERSKY``."""

    kind: MetricKind
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self) -> None:
        if self.kind is MetricKind.TVERSKY:
            if self.alpha is None or self.beta is None:
                raise ValueError("Tversky metric needs both alpha and beta")
            if self.alpha < 0 or self.beta < 0:
                raise ValueError(f"alpha and beta must be non-negative, got {self.alpha}, {self.beta}")
        elif self.alpha is not None or self.beta is not None:
            raise ValueError(f"{self.kind.value} takes no alpha/beta parameters")

    @classmethod
    def of(cls, name: str) -> MetricSpec:
        """Parse ``iou``, ``bep2``, ``y1`` ... or ``tversky(0.3,0.7)``."""
        text = name.strip()
        m = _TVERSKY_RE.match(text)
        if m:
            try:
                alpha, beta = float(m.group(1)), float(m.group(2))
            except ValueError:
                raise ValueError(f"bad Tversky parameters in {name!r}") from None
            return cls(MetricKind.TVERSKY, alpha, beta)
        try:
            kind = MetricKind(text.lower())
        except ValueError:
            raise ValueError(f"unknown metric {name!r}") from None
        if kind is MetricKind.TVERSKY:
            raise ValueError("write Tversky metrics as tversky(alpha,beta)")
        return cls(kind)

    @property
    def name(self) -> str:
        if self.kind is MetricKind.TVERSKY:
            return f"Tversky({self.alpha:g},{self.beta:g})"
        return _DISPLAY[self.kind]

    @property
    def is_tversky(self) -> bool:
        return self.kind is MetricKind.TVERSKY or self.kind in _TVERSKY_PRESETS

    @property
    def is_bep(self) -> bool:
        return self.kind in (MetricKind.BEP1, MetricKind.BEP2)

    def tversky_params(self) -> tuple[float, float]:
        """(alpha, beta) for any member of the Tversky family."""
        if self.kind is MetricKind.TVERSKY:
            return (self.alpha, self.beta)
        try:
            return _TVERSKY_PRESETS[self.kind]
        except KeyError:
            raise ValueError(f"{self.name} is not a Tversky-family metric") from None

    def expand(self) -> MetricSpec:
        """Rewrite IOU/Dice/IOG as the equivalent explicit Tversky spec."""
        if self.kind in _TVERSKY_PRESETS:
            return MetricSpec(MetricKind.TVERSKY, *_TVERSKY_PRESETS[self.kind])
        return self

    def __str__(self) -> str:
        return self.name


IOU = MetricSpec(MetricKind.IOU)
DICE = MetricSpec(MetricKind.DICE)
IOG = MetricSpec(MetricKind.IOG)
BEP1 = MetricSpec(MetricKind.BEP1)
BEP2 = MetricSpec(MetricKind.BEP2)
X1 = MetricSpec(MetricKind.X1)
X2 = MetricSpec(MetricKind.X2)
Y1 = MetricSpec(MetricKind.Y1)
Y2 = MetricSpec(MetricKind.Y2)


class BepScore(NamedTuple):
    score: float
    x: float
    y: float


def _check_weights(alpha: float, beta: float) -> None:
    if alpha < 0 or beta < 0:
        raise ValueError(f"alpha and beta must be non-negative, got {alpha}, {beta}")


def _tversky_ratio(a: float, b: float, c: float, alpha: float, beta: float) -> float:
    # b == 0 covers the 0/0 case too: no overlap never counts as a match.
    if b <= 0:
        return 0.0
    return b / (b + alpha * a + beta * c)


def tversky(gt: BBox, do_: BBox, alpha: float, beta: float) -> float:
    _check_weights(alpha, beta)
    d = decompose_areas(gt, do_)
    return _tversky_ratio(d.a, d.b, d.c, alpha, beta)


def iou(gt: BBox, do_: BBox) -> float:
    return tversky(gt, do_, 1.0, 1.0)


def dice(gt: BBox, do_: BBox) -> float:
    return tversky(gt, do_, 0.5, 0.5)


def iog(gt: BBox, do_: BBox) -> float:
    return tversky(gt, do_, 1.0, 0.0)


def _clamp01(v: float) -> float:
    return min(1.0, max(0.0, v))


def x1_component(gt: BBox, do_: BBox) -> float:
    h = decompose_horizontal(gt, do_)
    return h.x_b / (h.x_a + h.x_b + h.x_c)


def x2_component(gt: BBox, do_: BBox) -> float:
    h = decompose_horizontal(gt, do_)
    return h.x_b / (h.x_a + h.x_b)


def y1_component(gt: BBox, do_: BBox) -> float:
    # Negative when the gap exceeds the shorter box height; clamped.
    return _clamp01(1.0 - bottom_edge_gap(gt, do_) / min(gt.h, do_.h))


def y2_component(gt: BBox, do_: BBox) -> float:
    return _clamp01(1.0 - bottom_edge_gap(gt, do_) / gt.h)


def bep1(gt: BBox, do_: BBox) -> BepScore:
    x = x1_component(gt, do_)
    y = y1_component(gt, do_)
    return BepScore(x * y, x, y)


def bep2(gt: BBox, do_: BBox) -> BepScore:
    x = x2_component(gt, do_)
    y = y2_component(gt, do_)
    return BepScore(x * y, x, y)


_COMPONENTS = {
    MetricKind.X1: x1_component,
    MetricKind.X2: x2_component,
    MetricKind.Y1: y1_component,
    MetricKind.Y2: y2_component,
}


def score(spec: MetricSpec, gt: BBox, do_: BBox) -> float:
    """Scalar value of ``spec`` for one GT/DO pair."""
    if spec.is_tversky:
        return tversky(gt, do_, *spec.tversky_params())
    if spec.kind is MetricKind.BEP1:
        return bep1(gt, do_).score
    if spec.kind is MetricKind.BEP2:
        return bep2(gt, do_).score
    return _COMPONENTS[spec.kind](gt, do_)


def bep_components(spec: MetricSpec, gt: BBox, do_: BBox) -> BepScore:
    if spec.kind is MetricKind.BEP1:
        return bep1(gt, do_)
    if spec.kind is MetricKind.BEP2:
        return bep2(gt, do_)
    raise ValueError(f"{spec.name} has no X/Y components")


class BinaryMask:
    """Foreground mask of ``height`` rows by ``width`` columns.

    ``bits`` may be a flat row-major sequence of length ``width*height`` or
    an array already shaped ``(height, width)``.
    """

    __slots__ = ("width", "height", "bits")

    def __init__(self, width: int, height: int, bits: Sequence[bool] | np.ndarray) -> None:
        if width <= 0 or height <= 0:
            raise ValueError(f"mask dimensions must be positive, got {width}x{height}")
        arr = np.asarray(bits, dtype=bool)
        if arr.size != width * height:
            raise ValueError(f"mask needs {width * height} bits, got {arr.size}")
        self.width = int(width)
        self.height = int(height)
        self.bits = arr.reshape(height, width)
        self.bits.flags.writeable = False

    @classmethod
    def from_box(cls, box: BBox, width: int, height: int) -> BinaryMask:
        """Rasterize an integer-coordinate box; pixels outside the canvas are dropped."""
        if not all(float(v).is_integer() for v in box.as_tuple()):
            raise ValueError(f"only integer boxes can be rasterized, got {box}")
        grid = np.zeros((height, width), dtype=bool)
        x0, y0 = max(int(box.x), 0), max(int(box.y), 0)
        x1, y1 = min(int(box.right), width), min(int(box.bottom), height)
        if x1 > x0 and y1 > y0:
            grid[y0:y1, x0:x1] = True
        return cls(width, height, grid)

    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return (self.width, self.height) == (other.width, other.height) and bool(
            np.array_equal(self.bits, other.bits)
        )

    def __repr__(self) -> str:
        return f"BinaryMask({self.width}x{self.height}, {self.count()} set)"


def mask_regions(gt: BinaryMask, do_: BinaryMask) -> tuple[int, int, int]:
    """Pixel counts of GT-only, shared and DO-only regions."""
    if (gt.width, gt.height) != (do_.width, do_.height):
        raise ValueError(
            f"mask dimensions differ: {gt.width}x{gt.height} vs {do_.width}x{do_.height}"
        )
    b = int(np.count_nonzero(gt.bits & do_.bits))
    a = int(np.count_nonzero(gt.bits & ~do_.bits))
    c = int(np.count_nonzero(do_.bits & ~gt.bits))
    return a, b, c


def tversky_mask(gt: BinaryMask, do_: BinaryMask, alpha: float, beta: float) -> float:
    _check_weights(alpha, beta)
    a, b, c = mask_regions(gt, do_)
    if a + b == 0:
        raise ValueError("ground-truth mask is empty")
    return _tversky_ratio(a, b, c, alpha, beta)
