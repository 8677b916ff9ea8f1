"""
Data I/O Module

This module turns input data into two-sample summaries and writes results.

It includes:
- RawTwoGroupData and the `group,value` CSV reader (`ingest_raw`)
- Summary-only ingestion from "x1,x2,s,n" flags
- CSV/JSON writers for reports, risk curves and samples, with 6 significant
  digits by default and an optional full-precision mode
"""

import json
import logging
import os
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError, field_validator

from src.exceptions import DataValidationError, InvalidSummaryError
from src.posterior import TwoSampleSummary
from src.risk import RiskCurve
from src.utils.common_utils import format_number

logger = logging.getLogger(__name__)


class RawTwoGroupData(BaseModel):
    """Raw observations of the two groups."""

    group1: List[float]
    group2: List[float]

    @field_validator("group1", "group2")
    @classmethod
    def _at_least_two(cls, values: List[float]) -> List[float]:
        if len(values) < 2:
            raise ValueError(f"each group needs at least 2 observations, got {len(values)}")
        if not all(np.isfinite(values)):
            raise ValueError("observations must be finite")
        return values


def load_raw(path: str) -> RawTwoGroupData:
    """
    Read a `group,value` CSV (UTF-8, LF or CRLF line endings).

    Raises:
        DataValidationError: missing columns, unknown group labels,
            non-numeric values or groups with fewer than 2 rows
    """
    try:
        frame = pd.read_csv(path, encoding="utf-8", skipinitialspace=True)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataValidationError(f"Could not read {path}: {e}") from e

    frame.columns = [str(column).strip() for column in frame.columns]
    if list(frame.columns) != ["group", "value"]:
        raise DataValidationError(f"Expected header 'group,value', got {','.join(frame.columns)}")

    groups = frame["group"].astype(str).str.strip()
    unknown = sorted(set(groups) - {"1", "2"})
    if unknown:
        raise DataValidationError(f"Unknown group label(s): {', '.join(unknown)}")

    values = pd.to_numeric(frame["value"], errors="coerce")
    if values.isna().any():
        bad = frame.loc[values.isna(), "value"].tolist()
        raise DataValidationError(f"Non-numeric value(s): {bad}")

    try:
        data = RawTwoGroupData(
            group1=values[groups == "1"].tolist(),
            group2=values[groups == "2"].tolist(),
        )
    except ValidationError as e:
        raise DataValidationError(f"Invalid data in {path}: {e}") from e
    logger.info(f"Loaded {len(data.group1)} + {len(data.group2)} observations from {path}")
    return data


def summary_from_raw(data: RawTwoGroupData) -> TwoSampleSummary:
    """
    x1 = mean(group1), x2 = mean(group2), s^2 = sample variance of group1
    (divisor n1 - 1), k = n1 - 1.
    """
    group1 = np.asarray(data.group1, dtype=float)
    group2 = np.asarray(data.group2, dtype=float)
    s2 = float(np.var(group1, ddof=1))
    if not s2 > 0:
        raise InvalidSummaryError("group 1 has zero sample variance")
    return TwoSampleSummary.from_values(float(group1.mean()), float(group2.mean()), s2, len(group1) - 1)


def ingest_raw(path: str) -> TwoSampleSummary:
    """Summary of a `group,value` CSV file."""
    return summary_from_raw(load_raw(path))


def summary_from_flags(spec: str) -> TwoSampleSummary:
    """
    Parse "x1,x2,s,n": group means, group-1 standard deviation and group-1
    size. s^2 = s*s and k = n - 1. Vector means separate coordinates with
    ';', e.g. "1;0.5,0;0,1.2,10" for p = 2.
    """
    try:
        first, second, s_text, n_text = spec.split(",")
        x1 = [float(part) for part in first.split(";")]
        x2 = [float(part) for part in second.split(";")]
        s, n = float(s_text), float(n_text)
    except ValueError as e:
        raise InvalidSummaryError(f"Expected --summary x1,x2,s,n, got '{spec}'") from e
    if not s > 0:
        raise InvalidSummaryError(f"s must be positive, got {s}")
    if len(x1) == 1 and len(x2) == 1:
        return TwoSampleSummary.from_values(x1[0], x2[0], s * s, n - 1)
    return TwoSampleSummary.from_values(x1, x2, s * s, n - 1)


def write_raw(data: RawTwoGroupData, path: str) -> None:
    """Write observations in the `group,value` format."""
    rows = [("1", value) for value in data.group1] + [("2", value) for value in data.group2]
    frame = pd.DataFrame(rows, columns=["group", "value"])
    _ensure_parent(path)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")


def _ensure_parent(path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def _formatted(frame: pd.DataFrame, full_precision: bool) -> pd.DataFrame:
    out = frame.copy()
    for column in out.columns:
        if pd.api.types.is_float_dtype(out[column]):
            out[column] = [format_number(value, full_precision) for value in out[column]]
    return out


def frame_to_csv(frame: pd.DataFrame, path: Optional[str] = None, full_precision: bool = False) -> str:
    """
    Render a DataFrame as CSV text (and write it to `path` when given).

    Floats use 6 significant digits unless full precision is requested, so
    repeated runs produce byte-identical files.
    """
    text = _formatted(frame, full_precision).to_csv(index=False, lineterminator="\n")
    if path:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        logger.info(f"Wrote {len(frame)} rows to {path}")
    return text


def curve_to_csv(curve: RiskCurve, path: Optional[str] = None, full_precision: bool = False, columns: Optional[Sequence[str]] = None) -> str:
    """RiskCurve as CSV with header delta,risk_baseline,risk_restricted,ratio,se (or a column subset)."""
    frame = curve.to_frame()
    if columns:
        frame = frame[list(columns)]
    return frame_to_csv(frame, path, full_precision)


def samples_to_csv(samples, path: Optional[str] = None, full_precision: bool = False) -> str:
    """Single-column CSV (`value`); p > 1 samples get one column per coordinate."""
    array = np.asarray(samples, dtype=float)
    if array.ndim == 1:
        frame = pd.DataFrame({"value": array})
    else:
        frame = pd.DataFrame(array, columns=[f"value_{i + 1}" for i in range(array.shape[1])])
    return frame_to_csv(frame, path, full_precision)


def _round_floats(obj: Any, full_precision: bool) -> Any:
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    if isinstance(obj, float):
        return obj if full_precision else float(format_number(obj))
    if isinstance(obj, dict):
        return {key: _round_floats(value, full_precision) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(value, full_precision) for value in obj]
    return obj


def to_json(obj: Any, path: Optional[str] = None, full_precision: bool = False) -> str:
    """
    Render plain data as indented JSON, rounding floats to 6 significant digits
    by default. Non-finite floats are written as null.
    """
    text = json.dumps(_round_floats(obj, full_precision), indent=2, allow_nan=False) + "\n"
    if path:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        logger.info(f"Wrote JSON to {path}")
    return text


def records_to_frame(records: List[Dict[str, Any]]) -> pd.DataFrame:
    """Flatten report records ({family, params, mean, p10, p50, p90}) for CSV output."""
    rows = []
    for record in records:
        params = record["params"]
        row = {"family": record["family"]}
        for name in ("nu", "alpha0", "alpha1", "alpha2", "xi", "tau"):
            value = params.get(name)
            if isinstance(value, list):
                value = value[0]
            row[name] = float(value) if value is not None else np.nan
        row.update({key: float(record[key]) for key in ("mean", "p10", "p50", "p90")})
        rows.append(row)
    return pd.DataFrame(rows)
