"""Box transforms, IoU, and the per-corner linear-scan oracle."""

import numpy as np
import pytest

from fovsample import (
    BBox,
    DegenerateBox,
    FoveaSpec,
    ImageDims,
    SpaceMismatch,
    build_grid,
    inverse_transform_bbox,
    iou,
    transform_bbox,
)


def oracle_floor_index(axis, coord):
    """Greatest sample <= coord by linear scan (clamped to the first)."""
    best = 0
    for i, v in enumerate(axis):
        if v <= coord:
            best = i
    return best


def oracle_ceil_index(axis, coord):
    """Least sample >= coord by linear scan (clamped to the last)."""
    for i, v in enumerate(axis):
        if v >= coord:
            return i
    return len(axis) - 1


def oracle_transform(grid, b: BBox) -> tuple[int, int, int, int]:
    xs, ys = grid.xs.tolist(), grid.ys.tolist()
    left, top = max(b.x, 0), max(b.y, 0)
    right = min(b.x + b.w - 1, grid.spec.source.width - 1)
    bottom = min(b.y + b.h - 1, grid.spec.source.height - 1)
    x0, x1 = oracle_floor_index(xs, left), oracle_ceil_index(xs, right)
    y0, y1 = oracle_floor_index(ys, top), oracle_ceil_index(ys, bottom)
    return x0, y0, x1 - x0 + 1, y1 - y0 + 1


class TestIou:
    def test_identical_boxes(self):
        b = BBox(3, 4, 10, 12, space="target")
        assert iou(b, b) == 1.0

    def test_disjoint_boxes(self):
        assert iou(BBox(0, 0, 5, 5), BBox(10, 10, 5, 5)) == 0.0

    def test_hand_computed_overlap(self):
        # overlap 5x5 = 25, union 100 + 100 - 25 = 175
        v = iou(BBox(0, 0, 10, 10), BBox(5, 5, 10, 10))
        assert v == pytest.approx(25 / 175)

    def test_symmetry_and_range(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            a = BBox(*rng.uniform(0, 50, size=2), *rng.uniform(1, 30, size=2))
            b = BBox(*rng.uniform(0, 50, size=2), *rng.uniform(1, 30, size=2))
            v = iou(a, b)
            assert 0.0 <= v <= 1.0
            assert v == iou(b, a)
            assert iou(a, a) == pytest.approx(1.0)

    def test_space_mismatch(self):
        with pytest.raises(SpaceMismatch):
            iou(BBox(0, 0, 5, 5, space="source"), BBox(0, 0, 5, 5, space="target"))


class TestTransformBbox:
    def grid(self):
        return build_grid(FoveaSpec(ImageDims(640, 480), ImageDims(128, 128), (100, 400)))

    def test_identity_grid_leaves_box_unchanged(self):
        grid = build_grid(FoveaSpec(ImageDims(8, 8), ImageDims(8, 8), (4, 4)))
        out = transform_bbox(grid, BBox(2, 1, 4, 5, space="source"))
        assert out.as_list() == [2, 1, 4, 5]
        assert out.space == "target"

    def test_foveal_box_extent_preserved(self):
        grid = build_grid(FoveaSpec(ImageDims(640, 480), ImageDims(128, 128), (320, 240)))
        out = transform_bbox(grid, BBox(310, 232, 20, 16, space="source"))
        assert out.w == 20 and out.h == 16

    def test_matches_per_corner_oracle(self):
        grid = self.grid()
        out = transform_bbox(grid, BBox(500, 100, 80, 60, space="source"))
        x, y, w, h = oracle_transform(grid, BBox(500, 100, 80, 60, space="source"))
        assert out.as_list() == [x, y, w, h]

    def test_oracle_parity_on_random_boxes(self):
        rng = np.random.default_rng(21)
        grid = self.grid()
        for _ in range(300):
            b = BBox(float(rng.uniform(0, 600)), float(rng.uniform(0, 440)),
                     float(rng.uniform(1, 60)), float(rng.uniform(1, 60)), space="source")
            try:
                out = transform_bbox(grid, b)
            except DegenerateBox:
                continue
            assert tuple(out.as_list()) == oracle_transform(grid, b)

    def test_nested_boxes_stay_nested(self):
        rng = np.random.default_rng(31)
        grid = self.grid()
        for _ in range(100):
            x, y = rng.uniform(0, 500), rng.uniform(0, 350)
            w, h = rng.uniform(20, 100), rng.uniform(20, 100)
            outer = BBox(float(x), float(y), float(w), float(h), space="source")
            inner = BBox(float(x + w / 4), float(y + h / 4), float(w / 2), float(h / 2),
                         space="source")
            try:
                to, ti = transform_bbox(grid, outer), transform_bbox(grid, inner)
            except DegenerateBox:
                continue
            assert to.x <= ti.x and to.y <= ti.y
            assert to.x + to.w >= ti.x + ti.w and to.y + to.h >= ti.y + ti.h

    def test_degenerate_box_between_samples(self):
        # 8x8 -> 4x4 centered: xs == [0, 2, 4, 7]; a box inside (4, 7) misses
        grid = build_grid(FoveaSpec(ImageDims(8, 8), ImageDims(4, 4), (4, 4)))
        assert grid.xs.tolist() == [0, 2, 4, 7]
        with pytest.raises(DegenerateBox):
            transform_bbox(grid, BBox(5, 5, 1.5, 1.5, space="source"))

    def test_box_clamped_at_borders(self):
        grid = build_grid(FoveaSpec(ImageDims(8, 8), ImageDims(8, 8), (4, 4)))
        out = transform_bbox(grid, BBox(-3, -2, 6, 5, space="source"))
        assert out.as_list() == [0, 0, 3, 3]

    def test_wrong_space_rejected(self):
        with pytest.raises(SpaceMismatch):
            transform_bbox(self.grid(), BBox(0, 0, 5, 5, space="target"))


class TestInverseTransformBbox:
    def test_identity_grid_round_trip(self):
        grid = build_grid(FoveaSpec(ImageDims(8, 8), ImageDims(8, 8), (4, 4)))
        b = BBox(2, 1, 4, 5, space="source")
        assert inverse_transform_bbox(grid, transform_bbox(grid, b)).as_list() == b.as_list()

    def test_foveal_box_round_trips_exactly(self):
        grid = build_grid(FoveaSpec(ImageDims(640, 480), ImageDims(128, 128), (320, 240)))
        b = BBox(312, 236, 16, 10, space="source")
        back = inverse_transform_bbox(grid, transform_bbox(grid, b))
        assert back.as_list() == b.as_list()

    def test_round_trip_contains_original_exhaustively(self):
        # every integer box on the 8x8 -> 4x4 grid
        grid = build_grid(FoveaSpec(ImageDims(8, 8), ImageDims(4, 4), (4, 4)))
        checked = 0
        for x in range(8):
            for y in range(8):
                for w in range(1, 8 - x + 1):
                    for h in range(1, 8 - y + 1):
                        b = BBox(x, y, w, h, space="source")
                        try:
                            t = transform_bbox(grid, b)
                        except DegenerateBox:
                            continue
                        back = inverse_transform_bbox(grid, t)
                        assert back.x <= b.x and back.y <= b.y
                        assert back.x + back.w >= b.x + b.w
                        assert back.y + back.h >= b.y + b.h
                        checked += 1
        assert checked > 100

    def test_wrong_space_rejected(self):
        grid = build_grid(FoveaSpec(ImageDims(8, 8), ImageDims(4, 4), (4, 4)))
        with pytest.raises(SpaceMismatch):
            inverse_transform_bbox(grid, BBox(0, 0, 2, 2, space="source"))
