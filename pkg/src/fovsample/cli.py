"""Command-line front end for the foveated sampling pipeline.

Subcommands:
    foveate   resample one image around a fovea center
    dataset   spawn per-object foveated (or uniform) datasets from COCO JSON
    eval      score detections against a manifest (foveal/peripheral/all)
    bench     time the resamplers across the size sweep
    fit       fit the log sampling model to an eccentricity table

Exit codes: 0 ok, 2 bad arguments, 3 I/O failure, 4 infeasible grid.
With --json, diagnostics go to stderr as single-line JSON.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import bench as bench_mod
from . import dataset as dataset_mod
from . import evaluate as eval_mod
from .errors import (FovsampleError, InfeasibleGrid, InvalidSpec, IoFailure,
                     UnsupportedFormat)
from .fit import ECCENTRICITY_FIELD_TABLE, fit_eccentricity
from .grid import FoveaSpec, ImageDims, build_grid
from .raster import load_image, save_image

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INFEASIBLE = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _parse_dims(text: str) -> ImageDims:
    try:
        w, h = text.lower().split("x")
        return ImageDims(int(w), int(h))
    except (ValueError, InvalidSpec) as exc:
        raise CliError(f"bad size {text!r}: {exc}", EXIT_USAGE) from exc


def _parse_sizes(text: str) -> list[ImageDims]:
    sizes = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        sizes.append(_parse_dims(item) if "x" in item else _parse_dims(f"{item}x{item}"))
    if not sizes:
        raise CliError(f"no sizes in {text!r}", EXIT_USAGE)
    return sizes


def _parse_center(text: str) -> tuple[float, float]:
    try:
        x, y = text.split(",")
        return float(x), float(y)
    except ValueError as exc:
        raise CliError(f"bad center {text!r}: expected X,Y", EXIT_USAGE) from exc


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"input not found: {path}", EXIT_IO)
    return p


def cmd_foveate(args) -> int:
    src_path = _require_file(args.input)
    img = load_image(src_path)
    target = _parse_dims(args.size)
    center = _parse_center(args.center) if args.center else (
        img.dims.width / 2, img.dims.height / 2)
    spec = FoveaSpec(source=img.dims, target=target, center=center)
    grid = build_grid(spec)
    from .raster import foveate_image
    out = foveate_image(img, grid)
    save_image(out, args.output)
    if args.json:
        print(json.dumps({
            "command": "foveate",
            "source": [img.dims.width, img.dims.height],
            "target": [target.width, target.height],
            "center": list(center),
            "delta_x": [grid.x_spacing.delta_neg, grid.x_spacing.delta_pos],
            "delta_y": [grid.y_spacing.delta_neg, grid.y_spacing.delta_pos],
            "fovea_index": list(grid.fovea_index),
            "xs": [int(v) for v in grid.xs],
            "ys": [int(v) for v in grid.ys],
            "output": str(args.output),
        }, sort_keys=True))
    elif args.summary:
        print(f"source {img.dims} -> target {target}, center {center}")
        print(f"delta x: -{grid.x_spacing.delta_neg:.6f} / +{grid.x_spacing.delta_pos:.6f}")
        print(f"delta y: -{grid.y_spacing.delta_neg:.6f} / +{grid.y_spacing.delta_pos:.6f}")
    return EXIT_OK


def cmd_dataset(args) -> int:
    coco_path = _require_file(args.coco)
    images_dir = Path(args.images)
    if not images_dir.is_dir():
        raise CliError(f"images dir not found: {args.images}", EXIT_IO)
    out_dir = Path(args.output)
    sizes = _parse_sizes(args.sizes)
    categories = [int(c) for c in args.categories.split(",")] if args.categories else None

    raw = coco_path.read_bytes()
    subset = dataset_mod.parse_coco(
        raw,
        categories if categories is not None
        else sorted({int(a["category_id"]) for a in json.loads(raw)["annotations"]}),
    )

    def loader(image: dataset_mod.CocoImage):
        return load_image(images_dir / image.file_name)

    total = 0
    for size in sizes:
        size_dir = out_dir / f"{size.width}x{size.height}"
        size_dir.mkdir(parents=True, exist_ok=True)

        def sink(name, raster, _dir=size_dir):
            save_image(raster, _dir / name)

        spawn = (dataset_mod.spawn_foveated if args.mode == dataset_mod.FOVEATED
                 else dataset_mod.spawn_uniform)
        report = spawn(subset, size, loader, sink=sink, workers=args.workers)
        dataset_mod.write_manifest(report.manifest, size_dir / "manifest.jsonl")
        n = len(report.manifest.entries)
        total += n
        print(f"{size}: {n} entries"
              + (f", {len(report.failures)} image failures" if report.failures else ""))
        for image_id, reason in report.failures:
            print(f"  image {image_id} failed: {reason}", file=sys.stderr)
    print(f"total: {total} entries across {len(sizes)} sizes")
    return EXIT_OK


def cmd_eval(args) -> int:
    manifest = dataset_mod.read_manifest(_require_file(args.manifest))
    detections = eval_mod.read_detections_jsonl(_require_file(args.detections))
    size = str(manifest.target)
    rows = []
    for region in (eval_mod.REGION_FOVEAL, eval_mod.REGION_PERIPHERAL, eval_mod.REGION_ALL):
        r = eval_mod.region_report(manifest, detections, args.iou, region,
                                   min_confidence=args.min_confidence,
                                   eval_space=args.space)
        rows.append(eval_mod.SweepRow(size=size, region=region, tp=r.tp, fp=r.fp,
                                      fn=r.fn, precision=r.precision, recall=r.recall))
    text = eval_mod.rows_to_csv(rows)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    source = _parse_dims(args.source)
    sizes = _parse_sizes(args.sizes)
    results = bench_mod.run_bench(source, sizes, args.reps, args.warmup, seed=args.seed,
                                  reuse_grid=not args.no_reuse_grid, operation=args.op)
    text = bench_mod.results_to_csv(results)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_fit(args) -> int:
    if args.table:
        table = []
        with open(_require_file(args.table), newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                    continue
                try:
                    table.append((float(row[0]), float(row[1])))
                except ValueError:
                    continue  # header line
        if not table:
            raise CliError(f"no numeric rows in {args.table}", EXIT_USAGE)
    else:
        table = list(ECCENTRICITY_FIELD_TABLE)
    result = fit_eccentricity(table)
    if args.json:
        print(json.dumps({"scale": result.scale, "offset": result.offset,
                          "rmse": result.rmse}, sort_keys=True))
    else:
        print(f"scale  = {result.scale:.4f}")
        print(f"offset = {result.offset:.4f}")
        print(f"rmse   = {result.rmse:.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fovsample", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("foveate", help="foveate one image")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--size", required=True, help="target size WxH (even dims)")
    p.add_argument("--center", help="fovea center X,Y (default: image center)")
    p.add_argument("--summary", action="store_true", help="print per-half log steps")
    p.add_argument("--json", action="store_true", help="print the full grid as JSON")
    p.set_defaults(func=cmd_foveate)

    p = sub.add_parser("dataset", help="spawn a per-object dataset from COCO JSON")
    p.add_argument("--coco", required=True, help="COCO annotation JSON")
    p.add_argument("--images", required=True, help="directory with the source images")
    p.add_argument("--output", required=True, help="output directory (one subdir per size)")
    p.add_argument("--sizes", default="96,128,160,192,224,256,288,320,352,384,416")
    p.add_argument("--mode", choices=[dataset_mod.FOVEATED, dataset_mod.UNIFORM],
                   default=dataset_mod.FOVEATED)
    p.add_argument("--categories", help="comma-separated category ids (default: all present)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("eval", help="score detections against a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--detections", required=True, help="detections JSONL")
    p.add_argument("--iou", type=float, default=0.5)
    p.add_argument("--min-confidence", type=float, default=0.0)
    p.add_argument("--space", choices=[eval_mod.EVAL_SPACE_TARGET, eval_mod.EVAL_SPACE_SOURCE],
                   default=eval_mod.EVAL_SPACE_TARGET)
    p.add_argument("--output", help="CSV path (default: stdout)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="time the resamplers")
    p.add_argument("--source", default="640x480")
    p.add_argument("--sizes", default="96,128,160,192,224,256,288,320,352,384,416")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--warmup", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--op", choices=[bench_mod.OP_FOVEATE, bench_mod.OP_UNIFORM],
                   default=bench_mod.OP_FOVEATE)
    p.add_argument("--no-reuse-grid", action="store_true",
                   help="rebuild the grid for every image")
    p.add_argument("--output", help="CSV path (default: stdout)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("fit", help="fit the log model to an eccentricity table")
    p.add_argument("--table", help="CSV with eccentricity_deg,data_fields rows "
                                   "(default: built-in table)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fit)

    return parser


def _emit_error(exc: Exception, code: int, as_json: bool) -> None:
    if as_json:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)},
                         sort_keys=True), file=sys.stderr)
    else:
        print(f"fovsample: error: {exc}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    as_json = bool(getattr(args, "json", False))
    try:
        return args.func(args)
    except CliError as exc:
        _emit_error(exc, exc.code, as_json)
        return exc.code
    except InfeasibleGrid as exc:
        _emit_error(exc, EXIT_INFEASIBLE, as_json)
        return EXIT_INFEASIBLE
    except InvalidSpec as exc:
        _emit_error(exc, EXIT_USAGE, as_json)
        return EXIT_USAGE
    except (IoFailure, UnsupportedFormat, OSError) as exc:
        _emit_error(exc, EXIT_IO, as_json)
        return EXIT_IO
    except FovsampleError as exc:
        _emit_error(exc, EXIT_USAGE, as_json)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
