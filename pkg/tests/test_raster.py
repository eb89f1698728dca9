"""Raster resampling against naive gather oracles, plus image IO."""

import numpy as np
import pytest

from fovsample import (
    DecodeError,
    DimensionMismatch,
    FoveaSpec,
    ImageDims,
    IoFailure,
    RasterImage,
    UnsupportedFormat,
    build_grid,
    foveate_image,
    load_image,
    save_image,
    uniform_downsample,
)
from conftest import synthetic_raster


def oracle_gather(pixels, xs, ys):
    """Two-loop reference gather: out[j, i] = src[ys[j], xs[i]]."""
    out = np.empty((len(ys), len(xs), pixels.shape[2]), dtype=pixels.dtype)
    for j, sy in enumerate(ys):
        for i, sx in enumerate(xs):
            out[j, i] = pixels[sy, sx]
    return out


def checkerboard(dims: ImageDims, cell: int = 16) -> RasterImage:
    y, x = np.mgrid[0:dims.height, 0:dims.width]
    board = (((x // cell) + (y // cell)) % 2 * 255).astype(np.uint8)
    return RasterImage.from_array(np.stack([board] * 3, axis=-1))


class TestFoveateImage:
    def test_identity_grid_is_bit_identical(self):
        img = synthetic_raster(ImageDims(4, 4), seed=1)
        grid = build_grid(FoveaSpec(ImageDims(4, 4), ImageDims(4, 4), (2, 2)))
        out = foveate_image(img, grid)
        assert np.array_equal(out.pixels, img.pixels)

    def test_constant_image_stays_constant(self):
        img = RasterImage.from_array(np.full((480, 640, 3), 77, dtype=np.uint8))
        grid = build_grid(FoveaSpec(ImageDims(640, 480), ImageDims(128, 128), (100, 400)))
        out = foveate_image(img, grid)
        assert out.dims == ImageDims(128, 128)
        assert np.all(out.pixels == 77)

    def test_checkerboard_matches_naive_gather(self):
        img = checkerboard(ImageDims(2080, 2080), cell=64)
        grid = build_grid(FoveaSpec(ImageDims(2080, 2080), ImageDims(494, 494), (1040, 1040)))
        out = foveate_image(img, grid)
        expected = oracle_gather(img.pixels, grid.xs.tolist(), grid.ys.tolist())
        assert np.array_equal(out.pixels, expected)

    def test_dimension_mismatch(self):
        img = synthetic_raster(ImageDims(64, 48), seed=2)
        grid = build_grid(FoveaSpec(ImageDims(640, 480), ImageDims(128, 128), (320, 240)))
        with pytest.raises(DimensionMismatch):
            foveate_image(img, grid)

    def test_no_new_pixel_values(self):
        img = synthetic_raster(ImageDims(64, 48), seed=3)
        grid = build_grid(FoveaSpec(ImageDims(64, 48), ImageDims(16, 16), (10, 40)))
        out = foveate_image(img, grid)
        assert set(np.unique(out.pixels)) <= set(np.unique(img.pixels))

    def test_foveal_window_is_exact_crop(self):
        img = synthetic_raster(ImageDims(640, 480), seed=4)
        grid = build_grid(FoveaSpec(ImageDims(640, 480), ImageDims(128, 128), (320, 240)))
        out = foveate_image(img, grid)
        (x_lo, x_hi), (y_lo, y_hi) = grid.unit_window()
        sx, sy = int(grid.xs[x_lo]), int(grid.ys[y_lo])
        crop_out = out.pixels[y_lo:y_hi + 1, x_lo:x_hi + 1]
        crop_src = img.pixels[sy:sy + (y_hi - y_lo + 1), sx:sx + (x_hi - x_lo + 1)]
        assert np.array_equal(crop_out, crop_src)


class TestUniformDownsample:
    def test_identity_when_target_equals_source(self):
        img = synthetic_raster(ImageDims(64, 48), seed=5)
        out = uniform_downsample(img, ImageDims(64, 48))
        assert np.array_equal(out.pixels, img.pixels)

    def test_8x8_gradient_matches_hand_strided_gather(self):
        grad = np.arange(64, dtype=np.uint8).reshape(8, 8)
        img = RasterImage.from_array(grad)
        out = uniform_downsample(img, ImageDims(4, 4))
        # stride 2 per axis: rows/cols 0, 2, 4, 6
        expected = grad[np.ix_([0, 2, 4, 6], [0, 2, 4, 6])][:, :, None]
        assert np.array_equal(out.pixels, expected)

    def test_640x480_to_96(self):
        img = synthetic_raster(ImageDims(640, 480), seed=6)
        out = uniform_downsample(img, ImageDims(96, 96))
        xs = (np.arange(96) * 640) // 96
        ys = (np.arange(96) * 480) // 96
        assert np.array_equal(out.pixels, img.pixels[np.ix_(ys, xs)])

    def test_target_larger_than_source_rejected(self):
        img = synthetic_raster(ImageDims(64, 48), seed=7)
        with pytest.raises(DimensionMismatch):
            uniform_downsample(img, ImageDims(128, 128))


class TestImageIo:
    def test_png_round_trip_is_lossless(self, tmp_path):
        img = synthetic_raster(ImageDims(64, 48), seed=8)
        path = tmp_path / "img.png"
        save_image(img, path)
        back = load_image(path)
        assert np.array_equal(back.pixels, img.pixels)

    def test_grayscale_round_trip(self, tmp_path):
        arr = np.arange(64, dtype=np.uint8).reshape(8, 8)
        path = tmp_path / "gray.png"
        save_image(RasterImage.from_array(arr), path)
        back = load_image(path)
        assert back.channels == 1
        assert np.array_equal(back.pixels[:, :, 0], arr)

    def test_jpeg_load_only(self, tmp_path):
        from PIL import Image

        jpg = tmp_path / "img.jpg"
        Image.fromarray(synthetic_raster(ImageDims(32, 32), seed=9).pixels).save(jpg, "JPEG")
        img = load_image(jpg)
        assert img.dims == ImageDims(32, 32)
        with pytest.raises(UnsupportedFormat):
            save_image(img, tmp_path / "out.jpg")

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoFailure):
            load_image(tmp_path / "nope.png")

    def test_corrupt_file(self, tmp_path):
        bad = tmp_path / "bad.png"
        bad.write_bytes(b"not an image at all")
        with pytest.raises(DecodeError):
            load_image(bad)

    def test_unsupported_format_rejected_on_load(self, tmp_path):
        from PIL import Image

        bmp = tmp_path / "img.bmp"
        Image.fromarray(synthetic_raster(ImageDims(16, 16), seed=10).pixels).save(bmp, "BMP")
        with pytest.raises(UnsupportedFormat):
            load_image(bmp)
