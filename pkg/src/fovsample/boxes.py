"""Axis-aligned boxes, coordinate-space transforms between source and
foveated space, and IoU.

Transforms are outward-conservative: a source box maps to the smallest
target box whose samples bracket it, so the inverse transform always
returns a box containing the original. Boxes inside the unit-density
foveal window round-trip exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateBox, OutOfBounds, SpaceMismatch
from .grid import SampleGrid

SOURCE = "source"
TARGET = "target"


@dataclass(frozen=True)
class BBox:
    """Corner-and-extent box: (x, y) is the top-left corner in pixels."""

    x: float
    y: float
    w: float
    h: float
    space: str = SOURCE

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise DegenerateBox(f"box extent must be positive, got w={self.w} h={self.h}")
        if self.space not in (SOURCE, TARGET):
            raise SpaceMismatch(f"unknown space {self.space!r}")

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def as_list(self) -> list[float]:
        return [self.x, self.y, self.w, self.h]


@dataclass(frozen=True)
class GroundTruthObject:
    class_id: int
    bbox: BBox
    is_foveal: bool = False


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union of two boxes in the same space."""
    if a.space != b.space:
        raise SpaceMismatch(f"cannot intersect {a.space} box with {b.space} box")
    ix = max(0.0, min(a.x + a.w, b.x + b.w) - max(a.x, b.x))
    iy = max(0.0, min(a.y + a.h, b.y + b.h) - max(a.y, b.y))
    inter = ix * iy
    if inter == 0.0:
        return 0.0
    union = a.w * a.h + b.w * b.h - inter
    return inter / union


def _floor_index(axis: np.ndarray, coord: float) -> int:
    """Index of the greatest sample <= coord (clamped to the first sample)."""
    i = int(np.searchsorted(axis, coord, side="right")) - 1
    return max(i, 0)


def _ceil_index(axis: np.ndarray, coord: float) -> int:
    """Index of the least sample >= coord (clamped to the last sample)."""
    i = int(np.searchsorted(axis, coord, side="left"))
    return min(i, len(axis) - 1)


def _covered(axis: np.ndarray, lo: float, hi: float) -> bool:
    i = int(np.searchsorted(axis, lo, side="left"))
    j = int(np.searchsorted(axis, hi, side="right"))
    return j > i


def transform_bbox(grid: SampleGrid, b: BBox) -> BBox:
    """Map a source-space box into grid (target) space.

    The box is clamped to the source bounds, then its inclusive pixel
    corners map outward to the bracketing samples. Raises DegenerateBox
    when no sample row or column falls inside the box (the box vanished
    between peripheral samples).
    """
    if b.space != SOURCE:
        raise SpaceMismatch(f"expected a source-space box, got {b.space}")
    src = grid.spec.source
    if b.x + b.w <= 0 or b.x >= src.width or b.y + b.h <= 0 or b.y >= src.height:
        raise OutOfBounds(f"box {b.as_list()} does not intersect source {src}")
    left = max(b.x, 0.0)
    top = max(b.y, 0.0)
    right = min(b.x + b.w - 1, float(src.width - 1))
    bottom = min(b.y + b.h - 1, float(src.height - 1))
    if right < left or bottom < top:
        raise DegenerateBox(f"box {b.as_list()} spans less than one pixel")
    if not _covered(grid.xs, left, right) or not _covered(grid.ys, top, bottom):
        raise DegenerateBox(f"box {b.as_list()} contains no grid sample")
    x0 = _floor_index(grid.xs, left)
    y0 = _floor_index(grid.ys, top)
    x1 = _ceil_index(grid.xs, right)
    y1 = _ceil_index(grid.ys, bottom)
    return BBox(x=float(x0), y=float(y0), w=float(x1 - x0 + 1), h=float(y1 - y0 + 1),
                space=TARGET)


def inverse_transform_bbox(grid: SampleGrid, b: BBox) -> BBox:
    """Map a target-space box back to source space via the sample arrays.

    Fractional target corners widen outward, so the result contains
    everything the target box covered.
    """
    if b.space != TARGET:
        raise SpaceMismatch(f"expected a target-space box, got {b.space}")
    nx, ny = len(grid.xs), len(grid.ys)
    x0 = int(np.clip(np.floor(b.x), 0, nx - 1))
    y0 = int(np.clip(np.floor(b.y), 0, ny - 1))
    x1 = int(np.clip(np.ceil(b.x + b.w - 1), 0, nx - 1))
    y1 = int(np.clip(np.ceil(b.y + b.h - 1), 0, ny - 1))
    if x1 < x0 or y1 < y0:
        raise OutOfBounds(f"box {b.as_list()} outside target {grid.spec.target}")
    sx0, sy0 = int(grid.xs[x0]), int(grid.ys[y0])
    sx1, sy1 = int(grid.xs[x1]), int(grid.ys[y1])
    return BBox(x=float(sx0), y=float(sy0), w=float(sx1 - sx0 + 1), h=float(sy1 - sy0 + 1),
                space=SOURCE)


def scale_bbox(b: BBox, sx: float, sy: float, space: str) -> BBox:
    """Linearly scale a box (used by the uniform-downsample pipeline)."""
    return replace(b, x=b.x * sx, y=b.y * sy, w=b.w * sx, h=b.h * sy, space=space)
