"""COCO-subset ingestion and dataset spawning.

Every annotation spawns one output image. In foveated mode the fovea is
centered on the annotation's box and all of that image's boxes are mapped
into grid space; in uniform mode the image is downsampled once per
annotation (object-count copies, which balances the two datasets) and the
boxes scale linearly. Each spawned entry marks exactly one object as
foveal: the annotation it was spawned for.

Manifest rows are JSON Lines, one entry per line:

    {"file": "<image_id>_<ann_id>_<W>x<H>.png", "image_id": ..,
     "fovea_ann_id": .., "mode": "foveated"|"uniform",
     "source": [W, H], "target": [W, H], "center": [x, y],
     "objects": [{"ann_id": .., "class_id": .., "bbox": [x,y,w,h]|null,
                  "is_foveal": bool, "degenerate": bool}, ..]}

Boxes that collapse between peripheral samples are kept in the manifest
with ``degenerate: true`` and a null bbox rather than dropped, so their
loss stays visible downstream.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .boxes import BBox, scale_bbox, transform_bbox
from .errors import DegenerateBox, EmptyAfterFilter, MalformedJson, MissingField, OutOfBounds
from .grid import FoveaSpec, ImageDims, build_grid
from .raster import RasterImage, foveate_image, uniform_downsample

FOVEATED = "foveated"
UNIFORM = "uniform"

# Side lengths evaluated across the size sweep, largest matching the usual
# detector input and descending in steps of 32.
DEFAULT_SWEEP_SIZES: tuple[ImageDims, ...] = tuple(
    ImageDims(s, s) for s in (96, 128, 160, 192, 224, 256, 288, 320, 352, 384, 416)
)


@dataclass(frozen=True)
class CocoImage:
    image_id: int
    file_name: str
    dims: ImageDims


@dataclass(frozen=True)
class CocoAnnotation:
    ann_id: int
    image_id: int
    category_id: int
    bbox: BBox


@dataclass(frozen=True)
class CocoSubset:
    images: tuple[CocoImage, ...]
    annotations: tuple[CocoAnnotation, ...]
    categories: frozenset[int]
    rejected: tuple[tuple[int, str], ...] = ()  # (ann_id, reason)


@dataclass(frozen=True)
class ManifestObject:
    ann_id: int
    class_id: int
    bbox: BBox | None
    is_foveal: bool
    degenerate: bool = False


@dataclass(frozen=True)
class ManifestEntry:
    file: str
    image_id: int
    fovea_ann_id: int
    mode: str
    source: ImageDims
    target: ImageDims
    center: tuple[float, float]
    objects: tuple[ManifestObject, ...]


@dataclass(frozen=True)
class DatasetManifest:
    mode: str
    target: ImageDims
    entries: tuple[ManifestEntry, ...]


@dataclass
class SpawnReport:
    manifest: DatasetManifest
    failures: list[tuple[int, str]] = field(default_factory=list)  # (image_id, reason)


ImageLoader = Callable[[CocoImage], RasterImage]
ImageSink = Callable[[str, RasterImage], None]


def parse_coco(data: bytes | str, allowed_categories: Iterable[int]) -> CocoSubset:
    """Parse COCO annotation JSON, keeping only the allowed categories.

    Zero-area boxes are rejected with a per-annotation report; an
    annotation referencing an unknown image is an error.
    """
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"invalid COCO JSON: {exc}") from exc
    for key in ("images", "annotations"):
        if key not in doc:
            raise MissingField(f"COCO JSON missing {key!r} array")

    allowed = frozenset(int(c) for c in allowed_categories)
    images = []
    try:
        for im in doc["images"]:
            images.append(CocoImage(
                image_id=int(im["id"]),
                file_name=str(im["file_name"]),
                dims=ImageDims(int(im["width"]), int(im["height"])),
            ))
    except KeyError as exc:
        raise MissingField(f"image record missing field {exc}") from exc
    image_ids = {im.image_id for im in images}

    annotations = []
    rejected = []
    try:
        for ann in doc["annotations"]:
            ann_id = int(ann["id"])
            image_id = int(ann["image_id"])
            category = int(ann["category_id"])
            if category not in allowed:
                continue
            if image_id not in image_ids:
                raise MissingField(f"annotation {ann_id} references unknown image {image_id}")
            x, y, w, h = (float(v) for v in ann["bbox"])
            if w <= 0 or h <= 0:
                rejected.append((ann_id, f"zero-area bbox {[x, y, w, h]}"))
                continue
            annotations.append(CocoAnnotation(
                ann_id=ann_id, image_id=image_id, category_id=category,
                bbox=BBox(x=x, y=y, w=w, h=h, space="source"),
            ))
    except KeyError as exc:
        raise MissingField(f"annotation record missing field {exc}") from exc

    if not annotations:
        raise EmptyAfterFilter("no usable annotations after category/area filtering")
    return CocoSubset(
        images=tuple(images),
        annotations=tuple(sorted(annotations, key=lambda a: (a.image_id, a.ann_id))),
        categories=allowed,
        rejected=tuple(rejected),
    )


def entry_file_name(image_id: int, ann_id: int, target: ImageDims) -> str:
    return f"{image_id}_{ann_id}_{target.width}x{target.height}.png"


def _spawn_one_image(image: CocoImage, anns: Sequence[CocoAnnotation], target: ImageDims,
                     loader: ImageLoader, mode: str,
                     sink: ImageSink | None) -> list[ManifestEntry]:
    raster = loader(image)
    if raster.dims != image.dims:
        raise MissingField(
            f"image {image.image_id}: loaded dims {raster.dims} != declared {image.dims}")
    entries = []
    for fovea_ann in anns:
        center = fovea_ann.bbox.center
        if mode == FOVEATED:
            grid = build_grid(FoveaSpec(source=image.dims, target=target, center=center))
            out = foveate_image(raster, grid)
            objects = []
            for ann in anns:
                try:
                    tbox = transform_bbox(grid, ann.bbox)
                    degenerate = False
                except (DegenerateBox, OutOfBounds):
                    tbox = None
                    degenerate = True
                objects.append(ManifestObject(
                    ann_id=ann.ann_id, class_id=ann.category_id, bbox=tbox,
                    is_foveal=ann.ann_id == fovea_ann.ann_id, degenerate=degenerate,
                ))
        else:
            out = uniform_downsample(raster, target)
            sx = target.width / image.dims.width
            sy = target.height / image.dims.height
            objects = [
                ManifestObject(
                    ann_id=ann.ann_id, class_id=ann.category_id,
                    bbox=scale_bbox(ann.bbox, sx, sy, space="target"),
                    is_foveal=ann.ann_id == fovea_ann.ann_id,
                )
                for ann in anns
            ]
        name = entry_file_name(image.image_id, fovea_ann.ann_id, target)
        if sink is not None:
            sink(name, out)
        entries.append(ManifestEntry(
            file=name, image_id=image.image_id, fovea_ann_id=fovea_ann.ann_id,
            mode=mode, source=image.dims, target=target, center=center,
            objects=tuple(objects),
        ))
    return entries


def _spawn(subset: CocoSubset, target: ImageDims, loader: ImageLoader, mode: str,
           sink: ImageSink | None, workers: int) -> SpawnReport:
    by_image: dict[int, list[CocoAnnotation]] = {}
    for ann in subset.annotations:
        by_image.setdefault(ann.image_id, []).append(ann)
    images = sorted(
        (im for im in subset.images if im.image_id in by_image),
        key=lambda im: im.image_id,
    )

    entries: list[ManifestEntry] = []
    failures: list[tuple[int, str]] = []

    def work(image: CocoImage) -> tuple[int, list[ManifestEntry] | None, str | None]:
        try:
            return image.image_id, _spawn_one_image(
                image, by_image[image.image_id], target, loader, mode, sink), None
        except Exception as exc:  # per-image failures are collected, not fatal
            return image.image_id, None, str(exc)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, images))
    else:
        results = [work(im) for im in images]

    for image_id, spawned, err in results:
        if err is not None:
            failures.append((image_id, err))
        else:
            entries.extend(spawned)

    entries.sort(key=lambda e: (e.image_id, e.fovea_ann_id))
    manifest = DatasetManifest(mode=mode, target=target, entries=tuple(entries))
    return SpawnReport(manifest=manifest, failures=failures)


def spawn_foveated(subset: CocoSubset, target: ImageDims, loader: ImageLoader, *,
                   sink: ImageSink | None = None, workers: int = 1) -> SpawnReport:
    """One foveated image per annotation, fovea at that annotation's box center."""
    return _spawn(subset, target, loader, FOVEATED, sink, workers)


def spawn_uniform(subset: CocoSubset, target: ImageDims, loader: ImageLoader, *,
                  sink: ImageSink | None = None, workers: int = 1) -> SpawnReport:
    """One uniformly downsampled copy per annotation (balances foveated counts)."""
    return _spawn(subset, target, loader, UNIFORM, sink, workers)


def size_sweep(subset: CocoSubset, sizes: Sequence[ImageDims], mode: str,
               loader: ImageLoader, *, sink_factory=None,
               workers: int = 1) -> list[SpawnReport]:
    """Spawn one manifest per target size (defaults cover the full sweep)."""
    if not sizes:
        raise ValueError("sizes must be nonempty")
    spawn = spawn_foveated if mode == FOVEATED else spawn_uniform
    reports = []
    for size in sizes:
        sink = sink_factory(size) if sink_factory is not None else None
        reports.append(spawn(subset, size, loader, sink=sink, workers=workers))
    return reports


def _entry_to_json(entry: ManifestEntry) -> str:
    doc = {
        "file": entry.file,
        "image_id": entry.image_id,
        "fovea_ann_id": entry.fovea_ann_id,
        "mode": entry.mode,
        "source": [entry.source.width, entry.source.height],
        "target": [entry.target.width, entry.target.height],
        "center": [entry.center[0], entry.center[1]],
        "objects": [
            {
                "ann_id": o.ann_id,
                "class_id": o.class_id,
                "bbox": None if o.bbox is None else o.bbox.as_list(),
                "is_foveal": o.is_foveal,
                "degenerate": o.degenerate,
            }
            for o in entry.objects
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def write_manifest(manifest: DatasetManifest, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in manifest.entries:
            fh.write(_entry_to_json(entry) + "\n")


def read_manifest(path) -> DatasetManifest:
    entries = []
    mode = None
    target = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedJson(f"{path}:{line_no}: {exc}") from exc
            try:
                entry = ManifestEntry(
                    file=doc["file"],
                    image_id=int(doc["image_id"]),
                    fovea_ann_id=int(doc["fovea_ann_id"]),
                    mode=doc["mode"],
                    source=ImageDims(*doc["source"]),
                    target=ImageDims(*doc["target"]),
                    center=(float(doc["center"][0]), float(doc["center"][1])),
                    objects=tuple(
                        ManifestObject(
                            ann_id=int(o["ann_id"]),
                            class_id=int(o["class_id"]),
                            bbox=None if o["bbox"] is None else BBox(*o["bbox"], space="target"),
                            is_foveal=bool(o["is_foveal"]),
                            degenerate=bool(o["degenerate"]),
                        )
                        for o in doc["objects"]
                    ),
                )
            except (KeyError, IndexError) as exc:
                raise MissingField(f"{path}:{line_no}: missing field {exc}") from exc
            entries.append(entry)
            mode = entry.mode
            target = entry.target
    if not entries:
        raise EmptyAfterFilter(f"manifest {path} is empty")
    return DatasetManifest(mode=mode, target=target, entries=tuple(entries))
