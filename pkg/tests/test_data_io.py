"""
Tests for data ingestion and the CSV/JSON writers.
"""

import json

import numpy as np
import pandas as pd
import pytest

from src.data_io import (
    RawTwoGroupData,
    curve_to_csv,
    frame_to_csv,
    ingest_raw,
    load_raw,
    records_to_frame,
    samples_to_csv,
    summary_from_flags,
    summary_from_raw,
    to_json,
    write_raw,
)
from src.exceptions import DataValidationError, InvalidSummaryError
from src.risk import RiskCurve, RiskCurveRow


def _write(path, text):
    path.write_bytes(text.encode("utf-8"))
    return str(path)


def test_walking_data_summary(walking_summary):
    """Test the summary computed from the walking-age data."""
    assert walking_summary.x1[0] == pytest.approx(11.375)
    assert walking_summary.x2[0] == pytest.approx(10.125)
    assert walking_summary.s2 == pytest.approx(3.59375)
    assert np.sqrt(walking_summary.s2) == pytest.approx(1.896, abs=5e-4)
    assert walking_summary.k == 5


def test_crlf_and_spaces_are_accepted(tmp_path):
    """Test that CRLF line endings and padded fields parse."""
    path = _write(tmp_path / "data.csv", "group, value\r\n1, 1.0\r\n1,2.0\r\n1,3.0\r\n2,2\r\n2, 4\r\n")
    summary = ingest_raw(path)
    assert summary.x1 == (2.0,)
    assert summary.x2 == (3.0,)
    assert summary.s2 == pytest.approx(1.0)
    assert summary.k == 2


@pytest.mark.parametrize(
    "text",
    [
        "grp,value\n1,1\n1,2\n2,1\n2,2\n",
        "group,value\n1,1\n1,2\n3,1\n2,2\n2,3\n",
        "group,value\n1,1\n1,abc\n2,1\n2,2\n",
        "group,value\n1,1\n2,1\n2,2\n",
        "",
    ],
    ids=["header", "label", "non-numeric", "too-few", "empty"],
)
def test_invalid_files_are_rejected(tmp_path, text):
    """Test that malformed data files raise DataValidationError."""
    with pytest.raises(DataValidationError):
        load_raw(_write(tmp_path / "bad.csv", text))


def test_missing_file_is_rejected(tmp_path):
    """Test that a missing file raises DataValidationError."""
    with pytest.raises(DataValidationError):
        load_raw(str(tmp_path / "missing.csv"))


def test_constant_group_has_no_variance():
    """Test that zero pooled variance is rejected."""
    with pytest.raises(InvalidSummaryError):
        summary_from_raw(RawTwoGroupData(group1=[2.0, 2.0, 2.0], group2=[1.0, 3.0]))


def test_raw_data_round_trip(tmp_path):
    """Test that written raw data reads back unchanged."""
    data = RawTwoGroupData(group1=[1.5, 2.25, 4.0], group2=[0.1, 0.2])
    path = str(tmp_path / "out" / "raw.csv")
    write_raw(data, path)
    assert load_raw(path) == data


def test_summary_from_flags():
    """Test parsing a scalar x1,x2,s,n summary."""
    summary = summary_from_flags("31,30.4,5.7,429")
    assert summary.x1 == (31.0,)
    assert summary.x2 == (30.4,)
    assert summary.s2 == pytest.approx(32.49)
    assert summary.k == 428


@pytest.mark.parametrize("spec", ["31,30.4,5.7", "a,b,c,d", "1,0,-1,10", "1,0,1,2", "1;2,0,1,5", "1;x,0;0,1,5"])
def test_summary_from_flags_rejects_invalid(spec):
    """Test that malformed summary flags raise InvalidSummaryError."""
    with pytest.raises(InvalidSummaryError):
        summary_from_flags(spec)


def test_summary_from_flags_accepts_vectors():
    """Test that semicolon-separated means give a multivariate summary."""
    summary = summary_from_flags("1;0.5,0;-1,2,11")
    assert summary.p == 2
    assert summary.x1 == (1.0, 0.5)
    assert summary.x2 == (0.0, -1.0)
    assert summary.s2 == pytest.approx(4.0)
    assert summary.k == 10


def test_frame_to_csv_rounds_to_six_digits(tmp_path):
    """Test six-significant-digit and full-precision CSV output."""
    frame = pd.DataFrame({"name": ["a"], "value": [1.0 / 3.0]})
    assert frame_to_csv(frame) == "name,value\na,0.333333\n"
    assert frame_to_csv(frame, full_precision=True) == f"name,value\na,{1.0 / 3.0!r}\n"
    path = tmp_path / "nested" / "frame.csv"
    frame_to_csv(frame, str(path))
    assert path.read_text(encoding="utf-8") == "name,value\na,0.333333\n"


def test_curve_csv_header_and_subset():
    """Test the risk-curve CSV header and column subset."""
    row = RiskCurveRow(
        delta=0.5, risk_baseline=0.4, risk_restricted=0.36, ratio=0.9, mc_standard_error=0.001, se_baseline=0.01, se_restricted=0.01
    )
    curve = RiskCurve(rows=[row])
    assert curve_to_csv(curve).splitlines() == ["delta,risk_baseline,risk_restricted,ratio,se", "0.5,0.4,0.36,0.9,0.001"]
    assert curve_to_csv(curve, columns=["delta", "ratio"]).splitlines() == ["delta,ratio", "0.5,0.9"]


def test_samples_csv():
    """Test single-column and per-coordinate sample CSV."""
    assert samples_to_csv(np.array([1.0, 2.5])) == "value\n1\n2.5\n"
    assert samples_to_csv(np.array([[1.0, 2.0]])).splitlines()[0] == "value_1,value_2"


def test_to_json_rounds_nested_floats(tmp_path):
    """Test that floats nested in lists and dicts are rounded."""
    payload = {"a": 1.0 / 3.0, "b": [2.0 / 3.0, {"c": 1}], "d": "text"}
    parsed = json.loads(to_json(payload))
    assert parsed == {"a": 0.333333, "b": [0.666667, {"c": 1}], "d": "text"}
    assert json.loads(to_json(payload, full_precision=True))["a"] == 1.0 / 3.0
    path = tmp_path / "out.json"
    to_json(payload, str(path))
    assert json.loads(path.read_text(encoding="utf-8"))["d"] == "text"


def test_to_json_writes_non_finite_floats_as_null():
    """Test that infinite and NaN values become null so the output stays valid JSON."""
    text = to_json({"se": float("inf"), "values": [float("nan"), 1.0]})
    assert "Infinity" not in text and "NaN" not in text
    assert json.loads(text) == {"se": None, "values": [None, 1.0]}


def test_records_to_frame():
    """Test flattening predictive report records into a frame."""
    records = [
        {"family": "student_t", "params": {"nu": 5.0, "xi": [1.0], "tau": 1.2}, "mean": 1.0, "p10": 0.0, "p50": 1.0, "p90": 2.0},
        {
            "family": "skew_t",
            "params": {"nu": 5.0, "alpha0": 0.8, "alpha1": [0.5], "xi": [1.0], "tau": 1.2},
            "mean": 1.2,
            "p10": 0.1,
            "p50": 1.1,
            "p90": 2.3,
        },
    ]
    frame = records_to_frame(records)
    assert list(frame["family"]) == ["student_t", "skew_t"]
    assert np.isnan(frame.loc[0, "alpha0"])
    assert frame.loc[1, "alpha1"] == 0.5
    assert list(frame.columns) == ["family", "nu", "alpha0", "alpha1", "alpha2", "xi", "tau", "mean", "p10", "p50", "p90"]
