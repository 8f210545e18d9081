"""Empirical bounds from real-motion corpora and clamped min-max normalization.

Generated videos routinely land outside the bounds measured on real data;
clamping to [0, 1] keeps every downstream product well defined.  Bounds are
exact extrema by default; the percentile option exists for robustness
experiments only.
"""

from __future__ import annotations

import json
import math
import os

import numpy as np

from .errors import (
    DegenerateCalibrationError,
    IncompleteCalibrationError,
    ParseError,
    RangeError,
    SchemaError,
)
from .types import METRIC_NAMES, CalibrationBounds


def fit_bounds(
    raw_scores,
    metric_name: str,
    corpus_id: str,
    percentile: float | None = None,
) -> CalibrationBounds:
    """Bounds of ``raw_scores``; with ``percentile`` p, the p / (100 - p) quantiles."""
    values = [float(v) for v in raw_scores]
    if not values:
        raise DegenerateCalibrationError(f"{metric_name}: no raw scores to calibrate on")
    if any(not math.isfinite(v) for v in values):
        raise RangeError(f"{metric_name}: non-finite raw score")
    if percentile is None:
        lo, hi = min(values), max(values)
    else:
        if not 0.0 <= percentile < 50.0:
            raise ValueError(f"percentile must be in [0, 50), got {percentile}")
        lo = float(np.percentile(values, percentile))
        hi = float(np.percentile(values, 100.0 - percentile))
    if lo == hi:
        raise DegenerateCalibrationError(
            f"{metric_name}: all {len(values)} raw scores identical ({lo}); "
            "min == max leaves the normalization undefined"
        )
    return CalibrationBounds(
        metric_name=metric_name,
        min_real=lo,
        max_real=hi,
        corpus_id=corpus_id,
        sample_count=len(values),
    )


def normalize(raw: float, bounds: CalibrationBounds) -> float:
    """Affine map of ``raw`` onto [0, 1], clamped at the real-data bounds."""
    scaled = (raw - bounds.min_real) / (bounds.max_real - bounds.min_real)
    return min(max(scaled, 0.0), 1.0)


def save_bounds(bounds_map: dict[str, CalibrationBounds], path) -> None:
    """Write ``calibration.json``; floats keep full precision for exact reload."""
    missing = [m for m in METRIC_NAMES if m not in bounds_map]
    if missing:
        raise IncompleteCalibrationError(f"missing bounds for: {', '.join(missing)}")
    payload = {
        name: {
            "min": b.min_real,
            "max": b.max_real,
            "corpus_id": b.corpus_id,
            "n": b.sample_count,
        }
        for name, b in sorted(bounds_map.items())
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


def load_bounds(path) -> dict[str, CalibrationBounds]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh, parse_constant=lambda t: math.nan)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from None
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: calibration file must be a JSON object")
    bounds = {}
    for name in METRIC_NAMES:
        if name not in payload:
            raise IncompleteCalibrationError(f"{path}: missing metric record {name!r}")
        rec = payload[name]
        if not isinstance(rec, dict) or not {"min", "max", "corpus_id", "n"} <= set(rec):
            raise SchemaError(f"{path}: metric {name!r} must have min/max/corpus_id/n")
        bounds[name] = CalibrationBounds(
            metric_name=name,
            min_real=rec["min"],
            max_real=rec["max"],
            corpus_id=str(rec["corpus_id"]),
            sample_count=int(rec["n"]),
        )
    return bounds
