"""Detection-to-ground-truth matching and region-restricted metrics.

Matching follows the usual single-threshold convention: detections are
processed in descending confidence (ties broken by lexicographic bbox,
so input order never matters) and each one claims the highest-IoU,
same-class, still-unmatched ground-truth box with IoU >= threshold.
Unmatched detections are false positives; unmatched ground truth are
false negatives.

Reports can be restricted to a region. In the foveal report only the
object the image was spawned for can yield a true positive: detections
matched to peripheral objects count as false positives. The peripheral
report mirrors that on the complementary ground-truth set.

Detections arrive as JSON Lines, one per line:

    {"entry": "<file>", "class_id": .., "bbox": [x, y, w, h],
     "confidence": 0.0-1.0}

Report rows serialize to CSV with header size,region,tp,fp,fn,precision,recall.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .boxes import BBox, GroundTruthObject, inverse_transform_bbox, iou
from .dataset import DatasetManifest, ManifestEntry
from .errors import MalformedJson, MissingField, SpaceMismatch, UnknownEntry
from .grid import FoveaSpec, build_grid

REGION_FOVEAL = "foveal"
REGION_PERIPHERAL = "peripheral"
REGION_ALL = "all"

EVAL_SPACE_TARGET = "target"
EVAL_SPACE_SOURCE = "source"


@dataclass(frozen=True)
class Detection:
    entry: str
    class_id: int
    bbox: BBox
    confidence: float

    def __post_init__(self):
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")


@dataclass
class ClassCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0


@dataclass(frozen=True)
class MetricsReport:
    region: str
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    iou_threshold: float
    per_class: dict[int, ClassCounts] = field(default_factory=dict)
    undefined_precision: bool = False  # tp+fp == 0; precision reported as 0
    undefined_recall: bool = False  # tp+fn == 0; recall reported as 0


def _ratio(num: int, den: int) -> tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def match_detections(ground_truth: list[GroundTruthObject], detections: list[Detection],
                     iou_threshold: float) -> list[tuple[Detection, GroundTruthObject | None]]:
    """Greedy one-to-one assignment; returns (detection, matched gt or None)."""
    spaces = {g.bbox.space for g in ground_truth} | {d.bbox.space for d in detections}
    if len(spaces) > 1:
        raise SpaceMismatch("detections and ground truth must share a space")
    ordered = sorted(
        detections,
        key=lambda d: (-d.confidence, d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h, d.class_id),
    )
    taken: set[int] = set()
    pairs: list[tuple[Detection, GroundTruthObject | None]] = []
    for det in ordered:
        best_i = -1
        best_iou = 0.0
        for i, gt in enumerate(ground_truth):
            if i in taken or gt.class_id != det.class_id:
                continue
            v = iou(det.bbox, gt.bbox)
            if v >= iou_threshold and v > best_iou:
                best_iou = v
                best_i = i
        if best_i >= 0:
            taken.add(best_i)
            pairs.append((det, ground_truth[best_i]))
        else:
            pairs.append((det, None))
    return pairs


def _entry_ground_truth(entry: ManifestEntry, eval_space: str) -> list[GroundTruthObject]:
    boxes = []
    grid = None
    if eval_space == EVAL_SPACE_SOURCE:
        grid = build_grid(FoveaSpec(source=entry.source, target=entry.target,
                                    center=entry.center))
    for obj in entry.objects:
        if obj.bbox is None:
            continue  # collapsed in the periphery; not matchable
        bbox = obj.bbox
        if grid is not None:
            bbox = inverse_transform_bbox(grid, bbox)
        boxes.append(GroundTruthObject(class_id=obj.class_id, bbox=bbox, is_foveal=obj.is_foveal))
    return boxes


def _entry_detections(entry: ManifestEntry, dets: list[Detection],
                      eval_space: str) -> list[Detection]:
    if eval_space == EVAL_SPACE_TARGET:
        return dets
    grid = build_grid(FoveaSpec(source=entry.source, target=entry.target,
                                center=entry.center))
    out = []
    for d in dets:
        bbox = inverse_transform_bbox(grid, d.bbox)
        out.append(Detection(entry=d.entry, class_id=d.class_id, bbox=bbox,
                             confidence=d.confidence))
    return out


def region_report(manifest: DatasetManifest, detections: list[Detection],
                  iou_threshold: float = 0.5, region: str = REGION_ALL, *,
                  min_confidence: float = 0.0,
                  eval_space: str = EVAL_SPACE_TARGET) -> MetricsReport:
    """Aggregate TP/FP/FN over all manifest entries for one region."""
    by_entry: dict[str, list[Detection]] = {e.file: [] for e in manifest.entries}
    for det in detections:
        if det.entry not in by_entry:
            raise UnknownEntry(f"detection references unknown entry {det.entry!r}")
        if det.confidence >= min_confidence:
            by_entry[det.entry].append(det)

    tp = fp = fn = 0
    per_class: dict[int, ClassCounts] = {}

    def cls(c: int) -> ClassCounts:
        return per_class.setdefault(c, ClassCounts())

    for entry in manifest.entries:
        gt = _entry_ground_truth(entry, eval_space)
        dets = _entry_detections(entry, by_entry[entry.file], eval_space)
        pairs = match_detections(gt, dets, iou_threshold)

        if region == REGION_ALL:
            in_region = lambda g: True  # noqa: E731
        elif region == REGION_FOVEAL:
            in_region = lambda g: g.is_foveal  # noqa: E731
        elif region == REGION_PERIPHERAL:
            in_region = lambda g: not g.is_foveal  # noqa: E731
        else:
            raise ValueError(f"unknown region {region!r}")

        matched_region = [g for _, g in pairs if g is not None and in_region(g)]
        tp += len(matched_region)
        fp += len(pairs) - len(matched_region)
        region_gt = [g for g in gt if in_region(g)]
        fn += len(region_gt) - len(matched_region)

        for det, g in pairs:
            if g is not None and in_region(g):
                cls(det.class_id).tp += 1
            else:
                cls(det.class_id).fp += 1
        matched_ids = {id(g) for _, g in pairs if g is not None}
        for g in region_gt:
            if id(g) not in matched_ids:
                cls(g.class_id).fn += 1

    precision, undef_p = _ratio(tp, tp + fp)
    recall, undef_r = _ratio(tp, tp + fn)
    return MetricsReport(region=region, tp=tp, fp=fp, fn=fn, precision=precision,
                         recall=recall, iou_threshold=iou_threshold, per_class=per_class,
                         undefined_precision=undef_p, undefined_recall=undef_r)


def foveal_report(manifest: DatasetManifest, detections: list[Detection],
                  iou_threshold: float = 0.5, **kw) -> MetricsReport:
    """Metrics where only the spawning (foveal) object can be a true positive."""
    return region_report(manifest, detections, iou_threshold, REGION_FOVEAL, **kw)


def peripheral_report(manifest: DatasetManifest, detections: list[Detection],
                      iou_threshold: float = 0.5, **kw) -> MetricsReport:
    """Metrics restricted to the non-foveal (peripheral) objects."""
    return region_report(manifest, detections, iou_threshold, REGION_PERIPHERAL, **kw)


@dataclass(frozen=True)
class SweepRow:
    size: str
    region: str
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float


def sweep_report(items: list[tuple[str, DatasetManifest, list[Detection]]],
                 iou_threshold: float = 0.5) -> list[SweepRow]:
    """One row per size and region across a size sweep."""
    rows = []
    for size, manifest, dets in items:
        for region in (REGION_FOVEAL, REGION_PERIPHERAL, REGION_ALL):
            r = region_report(manifest, dets, iou_threshold, region)
            rows.append(SweepRow(size=size, region=region, tp=r.tp, fp=r.fp, fn=r.fn,
                                 precision=r.precision, recall=r.recall))
    return rows


def relative_recall(rows: list[SweepRow], baseline_size: str) -> dict[tuple[str, str], float]:
    """Recall of each (size, region) row as a fraction of the baseline size's."""
    base = {r.region: r.recall for r in rows if r.size == baseline_size}
    out = {}
    for r in rows:
        b = base.get(r.region, 0.0)
        out[(r.size, r.region)] = r.recall / b if b else 0.0
    return out


def rows_to_csv(rows: list[SweepRow]) -> str:
    lines = ["size,region,tp,fp,fn,precision,recall"]
    for r in rows:
        lines.append(f"{r.size},{r.region},{r.tp},{r.fp},{r.fn},"
                     f"{r.precision:.6f},{r.recall:.6f}")
    return "\n".join(lines) + "\n"


def read_detections_jsonl(path) -> list[Detection]:
    dets = []
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
                dets.append(Detection(
                    entry=doc["entry"],
                    class_id=int(doc["class_id"]),
                    bbox=BBox(*(float(v) for v in doc["bbox"]), space="target"),
                    confidence=float(doc["confidence"]),
                ))
            except KeyError as exc:
                raise MissingField(f"{path}:{line_no}: missing field {exc}") from exc
    return dets
