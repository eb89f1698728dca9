"""Least-squares fit of the log sampling model to eccentricity data.

Retinal sampling density is commonly summarized as a cumulative count of
data fields (receptive aggregation units) versus eccentricity in degrees.
The model fitted here is ``f(e) = scale * ln(1 + e / offset)``; the offset
keeps the curve finite at e = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import curve_fit

from .errors import DegenerateFit

# Built-in cumulative data-field counts at increasing eccentricities
# (degrees), from classic retino-cortical measurements.
ECCENTRICITY_FIELD_TABLE: tuple[tuple[float, float], ...] = (
    (0.5, 256), (1, 552), (2, 848), (5, 1239), (10, 1534),
    (30, 2003), (45, 2176), (60, 2299), (70, 2365), (90, 2472),
)


@dataclass(frozen=True)
class FitResult:
    scale: float
    offset: float
    rmse: float


def log_field_model(e, scale, offset):
    return scale * np.log1p(e / offset)


def fit_eccentricity(table: Sequence[tuple[float, float]]) -> FitResult:
    """Fit ``scale * ln(1 + e/offset)`` to (eccentricity, field count) rows.

    Requires at least 3 rows with strictly increasing eccentricities and
    strictly increasing counts; raises DegenerateFit otherwise.
    """
    if len(table) < 3:
        raise DegenerateFit(f"need at least 3 rows, got {len(table)}")
    e = np.asarray([row[0] for row in table], dtype=float)
    y = np.asarray([row[1] for row in table], dtype=float)
    if np.any(np.diff(e) <= 0) or np.any(np.diff(y) <= 0):
        raise DegenerateFit("table must be strictly increasing in both columns")

    params, _ = curve_fit(
        log_field_model, e, y,
        p0=(y[-1] / np.log1p(e[-1]), 1.0),
        bounds=([1e-9, 1e-9], [np.inf, np.inf]),
        maxfev=20000,
    )
    scale, offset = float(params[0]), float(params[1])
    residuals = log_field_model(e, scale, offset) - y
    rmse = float(np.sqrt(np.mean(residuals**2)))
    return FitResult(scale=scale, offset=offset, rmse=rmse)
