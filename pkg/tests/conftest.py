import json

import numpy as np
import pytest

from fovsample import CocoImage, ImageDims, RasterImage

# 3 images / 7 annotations across allowed categories {1, 2}; annotation 400
# is in a filtered category and 500 has zero area (rejected with a report).
COCO_FIXTURE = {
    "images": [
        {"id": 10, "file_name": "img10.png", "width": 64, "height": 48},
        {"id": 20, "file_name": "img20.png", "width": 80, "height": 80},
        {"id": 30, "file_name": "img30.png", "width": 100, "height": 60},
    ],
    "annotations": [
        {"id": 100, "image_id": 10, "category_id": 1, "bbox": [10, 10, 20, 16]},
        {"id": 101, "image_id": 10, "category_id": 2, "bbox": [40, 20, 12, 12]},
        {"id": 102, "image_id": 10, "category_id": 1, "bbox": [5, 30, 10, 8]},
        {"id": 200, "image_id": 20, "category_id": 2, "bbox": [8, 8, 30, 30]},
        {"id": 201, "image_id": 20, "category_id": 2, "bbox": [50, 40, 20, 24]},
        {"id": 300, "image_id": 30, "category_id": 1, "bbox": [12, 6, 40, 30]},
        {"id": 301, "image_id": 30, "category_id": 2, "bbox": [70, 30, 20, 20]},
        {"id": 400, "image_id": 30, "category_id": 99, "bbox": [0, 0, 5, 5]},
        {"id": 500, "image_id": 10, "category_id": 1, "bbox": [5, 5, 0, 10]},
    ],
    "categories": [{"id": 1}, {"id": 2}, {"id": 99}],
}

ALLOWED_CATEGORIES = (1, 2)


def synthetic_raster(dims: ImageDims, seed: int) -> RasterImage:
    rng = np.random.default_rng(seed)
    return RasterImage.from_array(
        rng.integers(0, 256, size=(dims.height, dims.width, 3), dtype=np.uint8))


@pytest.fixture(scope="session")
def coco_json() -> bytes:
    return json.dumps(COCO_FIXTURE).encode()


@pytest.fixture(scope="session")
def fixture_rasters() -> dict[int, RasterImage]:
    return {
        im["id"]: synthetic_raster(ImageDims(im["width"], im["height"]), seed=im["id"])
        for im in COCO_FIXTURE["images"]
    }


@pytest.fixture(scope="session")
def fixture_loader(fixture_rasters):
    def loader(image: CocoImage) -> RasterImage:
        return fixture_rasters[image.image_id]

    return loader
