"""Axis-aligned box primitives.

Image coordinates: origin at the top-left corner, x grows rightward and y
grows downward, so the bottom edge of a box sits at ``y + h``.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import Iterable


class InvalidBoxError(ValueError):
    pass


@dataclass(frozen=True)
class BBox:
    """Pixel-space box given by its top-left corner and extents."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "w", "h"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Real):
                raise InvalidBoxError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise InvalidBoxError(f"{name} must be finite, got {value!r}")
        if self.w <= 0 or self.h <= 0:
            raise InvalidBoxError(f"box extents must be positive, got w={self.w}, h={self.h}")

    @classmethod
    def from_xyxy(cls, x1: float, y1: float, x2: float, y2: float) -> BBox:
        return cls(x1, y1, x2 - x1, y2 - y1)

    @classmethod
    def parse(cls, text: str) -> BBox:
        """Build a box from an ``"x,y,w,h"`` string."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise InvalidBoxError(f"expected 'x,y,w,h', got {text!r}")
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise InvalidBoxError(f"non-numeric box component in {text!r}") from None
        return cls(*values)

    @property
    def right(self) -> float:
        return self.x + self.w

    @property
    def bottom(self) -> float:
        return self.y + self.h

    @property
    def area(self) -> float:
        return self.w * self.h

    def translated(self, dx: float, dy: float) -> BBox:
        return BBox(self.x + dx, self.y + dy, self.w, self.h)

    def scaled(self, s: float) -> BBox:
        """Uniform scaling about the image origin."""
        return BBox(self.x * s, self.y * s, self.w * s, self.h * s)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.w, self.h)


@dataclass(frozen=True)
class OverlapDecomposition:
    """Areas of GT-only (``a``), shared (``b``) and DO-only (``c``) regions."""

    a: float
    b: float
    c: float


@dataclass(frozen=True)
class HorizontalDecomposition:
    """Widths of the GT-only, shared and DO-only pieces of the x-projections."""

    x_a: float
    x_b: float
    x_c: float


def _overlap_1d(lo1: float, len1: float, lo2: float, len2: float) -> float:
    if lo1 == lo2 and len1 == len2:
        # exact for coincident intervals; (lo + len) - lo may round
        return len1
    return max(0.0, min(lo1 + len1, lo2 + len2) - max(lo1, lo2))


def decompose_areas(gt: BBox, do_: BBox) -> OverlapDecomposition:
    b = _overlap_1d(gt.x, gt.w, do_.x, do_.w) * _overlap_1d(gt.y, gt.h, do_.y, do_.h)
    # Clamp: with containment, rounding can leave a tiny negative residual.
    return OverlapDecomposition(a=max(0.0, gt.area - b), b=b, c=max(0.0, do_.area - b))


def decompose_horizontal(gt: BBox, do_: BBox) -> HorizontalDecomposition:
    x_b = _overlap_1d(gt.x, gt.w, do_.x, do_.w)
    return HorizontalDecomposition(x_a=max(0.0, gt.w - x_b), x_b=x_b, x_c=max(0.0, do_.w - x_b))


def bottom_edge_gap(gt: BBox, do_: BBox) -> float:
    """Absolute vertical distance between the two bottom edges."""
    return abs(gt.bottom - do_.bottom)


def boxes_from(values: Iterable[Iterable[float]]) -> list[BBox]:
    return [BBox(*v) for v in values]
