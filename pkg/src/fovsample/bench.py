"""Throughput measurement for the two resamplers across a size sweep.

Synthetic input images are generated from a fixed seed so the outputs are
reproducible; only the timings vary. Grid construction can be cached per
spec (the realistic pipeline shape) or rebuilt per image to expose its
cost. Wall time comes from the monotonic high-resolution clock; both mean
and median per-image times are reported.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import DEFAULT_SWEEP_SIZES
from .grid import FoveaSpec, ImageDims, build_grid
from .raster import RasterImage, foveate_image, uniform_downsample

OP_FOVEATE = "foveate"
OP_UNIFORM = "uniform"


@dataclass(frozen=True)
class BenchResult:
    operation: str
    target: ImageDims
    images: int
    wall_s: float
    mean_us: float
    median_us: float
    images_per_s: float


def synthetic_image(dims: ImageDims, seed: int, channels: int = 3) -> RasterImage:
    rng = np.random.default_rng(seed)
    return RasterImage.from_array(
        rng.integers(0, 256, size=(dims.height, dims.width, channels), dtype=np.uint8))


def run_bench(source: ImageDims = ImageDims(640, 480),
              sizes: Sequence[ImageDims] = DEFAULT_SWEEP_SIZES,
              repetitions: int = 20, warmup: int = 3, *, seed: int = 0,
              reuse_grid: bool = True, operation: str = OP_FOVEATE) -> list[BenchResult]:
    """Time one resample per repetition for every target size.

    Warmup repetitions run first and are excluded. Results come back
    sorted by target pixel count.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    img = synthetic_image(source, seed)
    center = (source.width / 2, source.height / 2)
    results = []
    for target in sorted(sizes, key=lambda d: d.pixel_count):
        if operation == OP_FOVEATE:
            spec = FoveaSpec(source=source, target=target, center=center)
            cached = build_grid(spec) if reuse_grid else None

            def op():
                grid = cached if cached is not None else build_grid(spec)
                return foveate_image(img, grid)
        else:

            def op():
                return uniform_downsample(img, target)

        for _ in range(warmup):
            op()
        samples_us = []
        t0 = time.perf_counter()
        for _ in range(repetitions):
            s = time.perf_counter()
            op()
            samples_us.append((time.perf_counter() - s) * 1e6)
        wall = time.perf_counter() - t0
        results.append(BenchResult(
            operation=operation, target=target, images=repetitions, wall_s=wall,
            mean_us=statistics.fmean(samples_us),
            median_us=statistics.median(samples_us),
            images_per_s=repetitions / wall if wall > 0 else float("inf"),
        ))
    return results


def results_to_csv(results: list[BenchResult]) -> str:
    lines = ["operation,width,height,images,mean_us,median_us,images_per_s"]
    for r in results:
        lines.append(f"{r.operation},{r.target.width},{r.target.height},{r.images},"
                     f"{r.mean_us:.3f},{r.median_us:.3f},{r.images_per_s:.3f}")
    return "\n".join(lines) + "\n"
