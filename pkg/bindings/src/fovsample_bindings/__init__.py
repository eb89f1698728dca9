"""Array-first wrapper over the fovsample core.

Exposes grid construction, image foveation, and box transforms behind a
flat API so training pipelines can stay in numpy without touching the
core's domain types. Values are bit-exact with the core: a BoundGrid's
``xs``/``ys`` are zero-copy views of the core grid arrays.

Handles carry no shared state; create them from any thread and use each
from one thread at a time.
"""

from __future__ import annotations

import numpy as np

import fovsample
from fovsample import BBox, FoveaSpec, ImageDims, RasterImage
from fovsample import build_grid as _build_grid
from fovsample import foveate_image as _foveate_image
from fovsample import inverse_transform_bbox as _inverse_transform_bbox
from fovsample import transform_bbox as _transform_bbox

__version__ = "0.1.0"

if fovsample.__version__ != __version__:
    raise ImportError(
        f"fovsample-bindings {__version__} requires fovsample {__version__}, "
        f"found {fovsample.__version__}")

Box = tuple[float, float, float, float]


class BoundGrid:
    """Opaque handle around a core sample grid."""

    __slots__ = ("_grid",)

    def __init__(self, grid):
        self._grid = grid

    @property
    def xs(self) -> np.ndarray:
        return self._grid.xs

    @property
    def ys(self) -> np.ndarray:
        return self._grid.ys

    @property
    def fovea_index(self) -> tuple[int, int]:
        return self._grid.fovea_index


def py_build_grid(source_w: int, source_h: int, target_w: int, target_h: int,
                  center_x: float, center_y: float) -> BoundGrid:
    """Build a sample grid; raises the core's error on invalid specs."""
    spec = FoveaSpec(source=ImageDims(source_w, source_h),
                     target=ImageDims(target_w, target_h),
                     center=(center_x, center_y))
    return BoundGrid(_build_grid(spec))


def py_foveate(image: np.ndarray, grid: BoundGrid) -> np.ndarray:
    """Foveate an HxWxC (or HxW) uint8 array; returns an HxWxC array."""
    return _foveate_image(RasterImage.from_array(image), grid._grid).pixels


def py_transform_bbox(grid: BoundGrid, box: Box) -> Box:
    """Map a source-space (x, y, w, h) box into grid space."""
    out = _transform_bbox(grid._grid, BBox(*box, space="source"))
    return (out.x, out.y, out.w, out.h)


def py_inverse_bbox(grid: BoundGrid, box: Box) -> Box:
    """Map a grid-space (x, y, w, h) box back to source space."""
    out = _inverse_transform_bbox(grid._grid, BBox(*box, space="target"))
    return (out.x, out.y, out.w, out.h)
