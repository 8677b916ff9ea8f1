"""
Tests for regenerating the worked examples and the risk-ratio figures.
"""

import json
import os

import pytest

from src.exceptions import ReproductionError
from src.reproduce import CellCheck, reproduce_tables, run_reproduction, walking_density_frame


def test_table_cells_pass():
    """Test that every asserted table cell is within tolerance."""
    cells = reproduce_tables()
    failed = [cell.to_record() for cell in cells if not cell.passed]
    assert failed == []
    tables = {cell.table for cell in cells}
    assert tables == {"summary_example", "walking_example"}


def test_informational_cells_are_reported_not_asserted():
    """Test that skew-t summary cells are reported without a tolerance."""
    cells = {(c.table, c.row, c.quantity): c for c in reproduce_tables()}
    assert cells[("walking_example", "ST", "mean")].asserted is False
    assert cells[("summary_example", "ST", "p50")].asserted is False
    assert cells[("summary_example", "ST", "mean")].asserted is True
    assert cells[("summary_example", "T", "tau")].computed == pytest.approx(0.39, abs=0.005)


def test_cell_check_delta():
    """Test the delta and pass flag of a single cell check."""
    cell = CellCheck(table="t", row="T", quantity="mean", printed=1.0, computed=1.25, tolerance=0.1)
    assert cell.delta == pytest.approx(0.25)
    assert not cell.passed
    assert CellCheck(table="t", row="T", quantity="mean", printed=1.0, computed=9.0).passed


def test_tables_only_reproduction_writes_report(tmp_path):
    """Test that a tables-only run writes a passing tables.json."""
    out_dir = str(tmp_path / "repro")
    report = run_reproduction(out_dir, n_mc=10, seed=1, include_figures=False)
    assert report.failures == []
    path = os.path.join(out_dir, "tables.json")
    assert path in report.files
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    assert payload["failures"] == []
    assert len(payload["cells"]) == len(report.cells)


def test_walking_densities_are_plot_ready(walking_summary, tmp_path):
    """Test the density frame of the walking example and its CSV in the reproduction output."""
    frame = walking_density_frame(walking_summary)
    assert list(frame.columns) == ["y", "baseline_pdf", "restricted_pdf"]
    assert len(frame) == 121
    tau = walking_summary.tau
    assert frame["y"].iloc[0] == pytest.approx(walking_summary.x1[0] - 6 * tau)
    assert frame["y"].iloc[-1] == pytest.approx(walking_summary.x1[0] + 6 * tau)
    step = frame["y"].iloc[1] - frame["y"].iloc[0]
    assert (frame["baseline_pdf"].sum() * step) == pytest.approx(1.0, abs=0.02)
    assert (frame["restricted_pdf"].sum() * step) == pytest.approx(1.0, abs=0.02)
    assert (frame["y"] * frame["restricted_pdf"]).sum() > (frame["y"] * frame["baseline_pdf"]).sum()

    out_dir = str(tmp_path / "repro")
    report = run_reproduction(out_dir, n_mc=10, seed=1, include_figures=False)
    path = os.path.join(out_dir, "walking_densities.csv")
    assert path in report.files
    with open(path, encoding="utf-8") as handle:
        assert handle.readline().strip() == "y,baseline_pdf,restricted_pdf"


def test_figure_failures_raise_after_writing(tmp_path, monkeypatch):
    """Test that a failing figure check raises after the report is written."""
    monkeypatch.setattr("src.reproduce.RATIO_BAND", (2.0, 3.0))
    out_dir = str(tmp_path / "repro")
    with pytest.raises(ReproductionError) as info:
        run_reproduction(out_dir, n_mc=20, seed=1, chunk_size=20)
    assert info.value.exit_code == 3
    assert info.value.failures
    assert os.path.exists(os.path.join(out_dir, "tables.json"))
    assert os.path.exists(os.path.join(out_dir, "risk_positive.csv"))


@pytest.mark.slow
def test_full_reproduction_passes(tmp_path):
    """Test the full reproduction of tables and risk curves."""
    report = run_reproduction(str(tmp_path), n_mc=100_000, seed=20240601)
    assert report.failures == []
    assert len(report.files) == 4
