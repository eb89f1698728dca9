"""Space-variant (foveated) image sampling toolkit.

Builds log-spaced sample grids around an arbitrary fovea center, applies
them to raster images (with a uniform-downsample baseline), transforms
bounding boxes between source and foveated space, spawns per-object
datasets from COCO annotations, and scores detections with foveal and
peripheral precision/recall.
"""

from .bench import BenchResult, run_bench
from .boxes import BBox, GroundTruthObject, inverse_transform_bbox, iou, transform_bbox
from .dataset import (
    DEFAULT_SWEEP_SIZES,
    CocoAnnotation,
    CocoImage,
    CocoSubset,
    DatasetManifest,
    ManifestEntry,
    ManifestObject,
    SpawnReport,
    parse_coco,
    read_manifest,
    size_sweep,
    spawn_foveated,
    spawn_uniform,
    write_manifest,
)
from .errors import (
    DecodeError,
    DegenerateBox,
    DegenerateFit,
    DimensionMismatch,
    EmptyAfterFilter,
    FovsampleError,
    InfeasibleGrid,
    InvalidSpec,
    IoFailure,
    MalformedJson,
    MissingField,
    OutOfBounds,
    SpaceMismatch,
    UnknownEntry,
    UnsupportedFormat,
)
from .evaluate import (
    Detection,
    MetricsReport,
    SweepRow,
    foveal_report,
    match_detections,
    peripheral_report,
    read_detections_jsonl,
    region_report,
    relative_recall,
    sweep_report,
)
from .fit import ECCENTRICITY_FIELD_TABLE, FitResult, fit_eccentricity
from .grid import (
    AxisSpacing,
    FoveaSpec,
    ImageDims,
    SampleGrid,
    build_grid,
    forward_map,
    inverse_map,
)
from .raster import RasterImage, foveate_image, load_image, save_image, uniform_downsample

__version__ = "0.1.0"
