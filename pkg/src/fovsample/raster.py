"""Raster images and the two resamplers: foveated gather and uniform stride.

Images are 8-bit, 1 or 3 channels, stored row-major channel-interleaved.
Both resamplers are pure nearest-sample selection: no interpolation, so
they never invent pixel values and the foveal window is an exact crop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, DimensionMismatch, InvalidSpec, IoFailure, UnsupportedFormat
from .grid import ImageDims, SampleGrid


@dataclass(frozen=True)
class RasterImage:
    """8-bit image; ``pixels`` has shape (height, width, channels)."""

    pixels: np.ndarray

    def __post_init__(self):
        if self.pixels.ndim != 3 or self.pixels.shape[2] not in (1, 3):
            raise InvalidSpec(f"expected HxWxC with C in (1, 3), got shape {self.pixels.shape}")
        if self.pixels.dtype != np.uint8:
            raise InvalidSpec(f"expected uint8 pixels, got {self.pixels.dtype}")
        self.pixels.setflags(write=False)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "RasterImage":
        a = np.asarray(arr, dtype=np.uint8)
        if a.ndim == 2:
            a = a[:, :, None]
        a = np.ascontiguousarray(a)
        if a is arr:
            a = a.view()  # freeze our view, not the caller's array
        return cls(pixels=a)

    @property
    def dims(self) -> ImageDims:
        return ImageDims(width=self.pixels.shape[1], height=self.pixels.shape[0])

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]


def foveate_image(img: RasterImage, grid: SampleGrid) -> RasterImage:
    """Gather the grid's sample rows/columns: out[j, i] = src[ys[j], xs[i]]."""
    if grid.spec.source != img.dims:
        raise DimensionMismatch(f"grid source {grid.spec.source} != image dims {img.dims}")
    out = img.pixels[np.ix_(grid.ys, grid.xs)]
    return RasterImage(pixels=np.ascontiguousarray(out))


def uniform_indices(source: int, target: int) -> np.ndarray:
    """Evenly strided source indices: index i -> (i * source) // target."""
    return (np.arange(target, dtype=np.int64) * source) // target


def uniform_downsample(img: RasterImage, target: ImageDims) -> RasterImage:
    """Nearest-sample downscale with linear index spacing per axis."""
    dims = img.dims
    if target.width > dims.width or target.height > dims.height:
        raise DimensionMismatch(f"target {target} exceeds image dims {dims}")
    xs = uniform_indices(dims.width, target.width)
    ys = uniform_indices(dims.height, target.height)
    out = img.pixels[np.ix_(ys, xs)]
    return RasterImage(pixels=np.ascontiguousarray(out))


def load_image(path) -> RasterImage:
    """Load a PNG or JPEG. Grayscale stays 1-channel, everything else RGB."""
    try:
        with Image.open(path) as im:
            if im.format not in ("PNG", "JPEG"):
                raise UnsupportedFormat(f"unsupported format {im.format!r} in {path}")
            if im.mode != "L":
                im = im.convert("RGB")
            arr = np.asarray(im)
    except FileNotFoundError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    except UnidentifiedImageError as exc:
        raise DecodeError(f"cannot decode {path}: {exc}") from exc
    except OSError as exc:
        raise DecodeError(f"cannot decode {path}: {exc}") from exc
    return RasterImage.from_array(arr)


def save_image(img: RasterImage, path) -> None:
    """Write a lossless PNG. Only .png output is supported."""
    if not str(path).lower().endswith(".png"):
        raise UnsupportedFormat(f"only PNG output is supported, got {path}")
    arr = img.pixels[:, :, 0] if img.channels == 1 else img.pixels
    try:
        Image.fromarray(arr).save(path, format="PNG")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
