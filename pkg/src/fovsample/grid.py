"""Log-spaced sample grids with a dense fovea and a compressed periphery.

A grid selects, independently per axis, an ordered subset of source pixel
indices. Around the fovea center the selection runs at unit density (every
pixel), and toward each border the gaps between selected indices grow along
an exponential curve anchored so that the outermost sample lands on the
border. The result keeps the full field of view at a fraction of the pixel
count.

Construction rules, fixed here so grids are bit-reproducible:

- Pixel centers sit at integer coordinates, origin top-left, x = column.
- Each half-axis gets its own log step ``delta = ln(max(extent, 1)) / m``
  from its own extent (distance from the center to that border) and its
  own sample budget ``m`` (nominally half the target size). The anchor
  identity ``exp(m * delta) == extent`` puts the last analytic sample on
  the border exactly.
- The center pixel itself is always selected and is counted against the
  upper (positive) half's budget; the two halves therefore produce exactly
  the target size with no shared sample.
- When the fovea sits near a border, the short half keeps one sample per
  available pixel and the surplus budget moves to the long half, so every
  spec with target <= source is feasible.
- Raw exponential positions are integerized in gap space: each gap is the
  floored remainder of the analytic curve against the running position,
  clamped to never shrink (acuity falls off monotonically) and capped so
  the remaining samples still fit inside the extent. The final gap absorbs
  the remainder, which pins the outermost sample to the border.

Everything here is immutable after construction and all functions are
pure, so grids are safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleGrid, InvalidSpec, OutOfBounds


@dataclass(frozen=True)
class ImageDims:
    """Width and height of a raster, in pixels."""

    width: int
    height: int

    def __post_init__(self):
        if self.width < 2 or self.height < 2:
            raise InvalidSpec(f"image dims must be at least 2x2, got {self.width}x{self.height}")

    @property
    def pixel_count(self) -> int:
        return self.width * self.height

    def __str__(self) -> str:
        return f"{self.width}x{self.height}"


@dataclass(frozen=True)
class FoveaSpec:
    """Full parameterization of a foveated resampling.

    ``center`` is a source-space coordinate (may be fractional, e.g. a box
    center); it is snapped to the nearest pixel when the grid is built.
    """

    source: ImageDims
    target: ImageDims
    center: tuple[float, float]

    def __post_init__(self):
        if self.target.width > self.source.width or self.target.height > self.source.height:
            raise InvalidSpec(f"target {self.target} exceeds source {self.source}")
        if self.target.width % 2 or self.target.height % 2:
            raise InvalidSpec(f"target dims must be even, got {self.target}")
        x0, y0 = self.center
        if not (0 <= x0 < self.source.width) or not (0 <= y0 < self.source.height):
            raise InvalidSpec(f"center {self.center} outside source {self.source}")


@dataclass(frozen=True)
class AxisSpacing:
    """Per-half log steps and extents for one axis.

    ``delta_neg``/``delta_pos`` are the log steps of the half-axes below
    and above the center; with the nominal half budget of n/2 samples they
    equal (2/n) * ln(max(extent, 1)).
    """

    delta_neg: float
    delta_pos: float
    extent_neg: int
    extent_pos: int


@dataclass(frozen=True)
class SampleGrid:
    """Ordered source sample indices realizing a FoveaSpec.

    ``xs``/``ys`` are strictly increasing int64 arrays of length
    target.width/target.height. ``fovea_index`` is the (x, y) target index
    of the sample at the snapped fovea center.
    """

    xs: np.ndarray
    ys: np.ndarray
    spec: FoveaSpec
    x_spacing: AxisSpacing
    y_spacing: AxisSpacing
    fovea_index: tuple[int, int]

    def unit_window(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Target index ranges (inclusive) of the unit-density window.

        Returns ((x_lo, x_hi), (y_lo, y_hi)): the maximal run of
        consecutive source indices around the fovea, i.e. the region where
        the output is an exact crop of the source.
        """
        return (
            _unit_run(self.xs, self.fovea_index[0]),
            _unit_run(self.ys, self.fovea_index[1]),
        )


def _unit_run(axis: np.ndarray, fovea_ix: int) -> tuple[int, int]:
    lo = hi = fovea_ix
    while lo > 0 and axis[lo] - axis[lo - 1] == 1:
        lo -= 1
    while hi < len(axis) - 1 and axis[hi + 1] - axis[hi] == 1:
        hi += 1
    return lo, hi


def _log_gap_offsets(extent: int, count: int, k_hi: int) -> list[int]:
    """``count`` strictly increasing offsets in [1, extent], last == extent.

    Offsets follow exp(k * delta) with delta = ln(extent) / k_hi, the last
    ``count`` curve indices ending at k_hi. Integerization happens in gap
    space: gap_j = floor(curve_j - position) clamped to [previous gap,
    budget // slots_left], final gap = remaining budget. This keeps gaps
    >= 1 and nondecreasing while the cumulative sum lands on the border.
    """
    if count == 0:
        return []
    if count > extent:
        raise InfeasibleGrid(f"cannot place {count} samples within extent {extent}")
    delta = math.log(max(extent, 1)) / k_hi
    offsets: list[int] = []
    pos = 0
    gap_prev = 1
    for j in range(1, count + 1):
        budget = extent - pos
        if j == count:
            gap = budget
        else:
            curve = math.exp((k_hi - count + j) * delta)
            gap = max(math.floor(curve - pos), gap_prev, 1)
            gap = min(gap, budget // (count - j + 1))
        offsets.append(pos + gap)
        pos += gap
        gap_prev = gap
    return offsets


def _axis_samples(source: int, target: int, center: float) -> tuple[np.ndarray, AxisSpacing, int]:
    c = min(max(int(math.floor(center + 0.5)), 0), source - 1)
    extent_neg = c
    extent_pos = source - 1 - c
    avail_neg = extent_neg
    avail_pos = extent_pos + 1  # the center pixel counts against the upper half

    m_neg = target // 2
    m_pos = target - m_neg
    if m_neg > avail_neg:
        m_neg = avail_neg
        m_pos = target - m_neg
    if m_pos > avail_pos:
        m_pos = avail_pos
        m_neg = target - m_pos
    if m_neg > avail_neg or m_pos > avail_pos or m_neg < 0 or m_pos < 1:
        raise InfeasibleGrid(
            f"target {target} cannot fit around center {c} in source of size {source}"
        )

    neg = _log_gap_offsets(extent_neg, m_neg, k_hi=max(m_neg, 1))
    delta_neg = math.log(max(extent_neg, 1)) / m_neg if m_neg else 0.0
    delta_pos = math.log(max(extent_pos, 1)) / m_pos
    if m_pos == 1:
        # No room for both the center and a border sample; keep the border
        # (which is the center itself when the fovea sits on it).
        pos_offsets = [extent_pos]
    else:
        pos_offsets = [0] + _log_gap_offsets(extent_pos, m_pos - 1, k_hi=m_pos)

    coords = [c - o for o in reversed(neg)] + [c + o for o in pos_offsets]
    samples = np.array(coords, dtype=np.int64)
    samples.setflags(write=False)
    return samples, AxisSpacing(delta_neg, delta_pos, extent_neg, extent_pos), m_neg


def build_grid(spec: FoveaSpec) -> SampleGrid:
    """Build the sample grid for a spec. Pure and deterministic."""
    xs, x_spacing, fx = _axis_samples(spec.source.width, spec.target.width, spec.center[0])
    ys, y_spacing, fy = _axis_samples(spec.source.height, spec.target.height, spec.center[1])
    return SampleGrid(xs=xs, ys=ys, spec=spec, x_spacing=x_spacing, y_spacing=y_spacing,
                      fovea_index=(fx, fy))


def _nearest_index(axis: np.ndarray, coord: float, fovea_ix: int) -> int:
    i = int(np.searchsorted(axis, coord))
    if i == 0:
        return 0
    if i == len(axis):
        return len(axis) - 1
    d_lo = coord - axis[i - 1]
    d_hi = axis[i] - coord
    if d_lo < d_hi:
        return i - 1
    if d_hi < d_lo:
        return i
    # Equidistant: resolve toward the fovea.
    return i - 1 if abs((i - 1) - fovea_ix) < abs(i - fovea_ix) else i


def forward_map(grid: SampleGrid, p: tuple[float, float]) -> tuple[int, int]:
    """Target index of the grid sample nearest to source point ``p``.

    Ties between two equidistant samples resolve toward the fovea. A point
    exactly on a sample maps to that sample's index.
    """
    px, py = p
    if not (0 <= px <= grid.spec.source.width - 1) or not (0 <= py <= grid.spec.source.height - 1):
        raise OutOfBounds(f"point {p} outside source {grid.spec.source}")
    return (
        _nearest_index(grid.xs, px, grid.fovea_index[0]),
        _nearest_index(grid.ys, py, grid.fovea_index[1]),
    )


def inverse_map(grid: SampleGrid, q: tuple[int, int]) -> tuple[int, int]:
    """Source coordinates of target index ``q``: (xs[q.x], ys[q.y])."""
    qx, qy = q
    if not (0 <= qx < len(grid.xs)) or not (0 <= qy < len(grid.ys)):
        raise OutOfBounds(f"index {q} outside target {grid.spec.target}")
    return int(grid.xs[qx]), int(grid.ys[qy])
