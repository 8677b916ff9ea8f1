"""
Reproduce Module

Regenerates the two worked examples and the two risk-ratio figures, and
compares computed values with the published ones.

It includes:
- the body-mass summary (n1=429, mean 31, sd 5.7; group-2 mean 30.4)
- the child walking ages (raw data in data/child_walking.csv)
- Risk-ratio curves for A=[0, inf) and A=[-6, 6] with k=3
- Baseline and restricted predictive densities of the walking example

Each published cell is either asserted against a tolerance or reported
informationally with its delta. Printed alpha0 cells are checked against the
PRINTED skewing constants; distributional summaries use the EXACT estimator.
"""

import logging
import os
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel

from src.data_io import curve_to_csv, frame_to_csv, ingest_raw, summary_from_flags, to_json
from src.distributions import make_density
from src.exceptions import ReproductionError
from src.posterior import AlphaConvention, RestrictionSet
from src.predictive import baseline_predictive, positive_restricted_predictive, summarize
from src.risk import RiskCurve, risk_ratio_curve
from src.utils.common_utils import parse_deltas

logger = logging.getLogger(__name__)

DEFAULT_DATA_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "child_walking.csv")
SUMMARY_EXAMPLE = "31,30.4,5.7,429"

POSITIVE_DELTAS = "0:5:0.5"
INTERVAL_DELTAS = "-6:6:0.5"
RATIO_BAND = (0.83, 0.93)
RATIO_CEILING = 1.02


class CellCheck(BaseModel):
    """One published value next to its recomputation."""

    table: str
    row: str
    quantity: str
    printed: float
    computed: float
    tolerance: Optional[float] = None

    @property
    def delta(self) -> float:
        return self.computed - self.printed

    @property
    def asserted(self) -> bool:
        return self.tolerance is not None

    @property
    def passed(self) -> bool:
        return not self.asserted or abs(self.delta) <= self.tolerance + 1e-12

    def to_record(self) -> Dict:
        return {
            "table": self.table,
            "row": self.row,
            "quantity": self.quantity,
            "printed": self.printed,
            "computed": self.computed,
            "delta": self.delta,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


class ReproductionReport(BaseModel):
    cells: List[CellCheck]
    figure_checks: List[Dict] = []
    files: List[str] = []

    @property
    def failures(self) -> List[str]:
        failed = [
            f"{c.table} {c.row} {c.quantity}: printed {c.printed}, computed {c.computed:.6g} (tolerance {c.tolerance})"
            for c in self.cells
            if not c.passed
        ]
        failed.extend(check["description"] for check in self.figure_checks if not check["passed"])
        return failed


def _table_cells(table: str, summary, printed: Dict[str, tuple], tolerances: Dict[str, Optional[float]]) -> List[CellCheck]:
    """
    Cells of one example table.

    printed maps "T"/"ST" to (mean, p10, p50, p90); tolerances hold
    "tau", "alpha0", "T", "ST_mean" and "ST_percentiles" (None = informational).
    """
    baseline = baseline_predictive(summary)
    printed_form = positive_restricted_predictive(summary, AlphaConvention.PRINTED)
    exact_form = positive_restricted_predictive(summary, AlphaConvention.EXACT)
    base_report = summarize(baseline)
    skew_report = summarize(exact_form)
    logger.info(f"{table}: exact alpha0 {exact_form.alpha0:.4f}, printed alpha0 {printed_form.alpha0:.4f}")

    cells = [
        CellCheck(table=table, row="T", quantity="tau", printed=printed["tau"], computed=baseline.tau, tolerance=tolerances["tau"]),
        CellCheck(
            table=table, row="ST", quantity="alpha0", printed=printed["alpha0"], computed=printed_form.alpha0, tolerance=tolerances["alpha0"]
        ),
    ]
    for row, report, mean_tol, pct_tol in (
        ("T", base_report, tolerances["T"], tolerances["T"]),
        ("ST", skew_report, tolerances["ST_mean"], tolerances["ST_percentiles"]),
    ):
        mean, p10, p50, p90 = printed[row]
        cells.append(CellCheck(table=table, row=row, quantity="mean", printed=mean, computed=report.mean, tolerance=mean_tol))
        for quantity, value, level in (("p10", p10, "0.1"), ("p50", p50, "0.5"), ("p90", p90, "0.9")):
            cells.append(
                CellCheck(table=table, row=row, quantity=quantity, printed=value, computed=report.percentiles[level], tolerance=pct_tol)
            )
    return cells


def reproduce_tables(data_path: str = DEFAULT_DATA_PATH) -> List[CellCheck]:
    """Both example tables; the walking-data sd is computed from the raw values."""
    summary_example = summary_from_flags(SUMMARY_EXAMPLE)
    cells = _table_cells(
        "summary_example",
        summary_example,
        {"tau": 0.39, "alpha0": 1.26, "T": (31, 30.5, 31, 31.5), "ST": (31.02, 30.52, 31.02, 31.52)},
        {"tau": 0.005, "alpha0": 0.005, "T": 0.01, "ST_mean": 0.01, "ST_percentiles": None},
    )
    walking = ingest_raw(data_path)
    logger.info(f"Walking data: x1={walking.x1[0]:.4f}, x2={walking.x2[0]:.4f}, s1={np.sqrt(walking.s2):.4f}, k={walking.k:g}")
    cells.extend(
        _table_cells(
            "walking_example",
            walking,
            {"tau": 1.2, "alpha0": 0.85, "T": (11.37, 9.6, 11.37, 13.14), "ST": (11.45, 11.2, 11.44, 12.37)},
            {"tau": 0.01, "alpha0": 0.01, "T": 0.02, "ST_mean": None, "ST_percentiles": None},
        )
    )
    for cell in cells:
        if not cell.passed:
            logger.warning(f"Mismatch {cell.table} {cell.row} {cell.quantity}: printed {cell.printed}, computed {cell.computed:.6g}")
    return cells


def walking_density_frame(summary, points: int = 121) -> pd.DataFrame:
    """
    Plot-ready baseline and restricted predictive densities over x1 +/- 6 tau.

    Columns: y, baseline_pdf, restricted_pdf (EXACT skewing constants).
    """
    baseline = make_density(baseline_predictive(summary))
    restricted = make_density(positive_restricted_predictive(summary, AlphaConvention.EXACT))
    y = summary.x1[0] + summary.tau * np.linspace(-6.0, 6.0, points)
    return pd.DataFrame({"y": y, "baseline_pdf": baseline.pdf(y), "restricted_pdf": restricted.pdf(y)})


def _band_checks(name: str, curve: RiskCurve) -> List[Dict]:
    low, high = RATIO_BAND
    min_ratio = curve.min_ratio
    max_ratio = max(row.ratio for row in curve.rows)
    return [
        {
            "description": f"{name}: minimum ratio {min_ratio:.4f} within [{low}, {high}]",
            "value": float(min_ratio),
            "passed": bool(low <= min_ratio <= high),
        },
        {
            "description": f"{name}: maximum ratio {max_ratio:.4f} <= {RATIO_CEILING}",
            "value": float(max_ratio),
            "passed": bool(max_ratio <= RATIO_CEILING),
        },
    ]


def _symmetry_check(name: str, curve: RiskCurve) -> Dict:
    by_delta = {round(row.delta, 9): row for row in curve.rows}
    worst = 0.0
    for delta, row in by_delta.items():
        mirror = by_delta.get(round(-delta, 9))
        if delta <= 0 or mirror is None:
            continue
        bound = 3.0 * np.hypot(row.mc_standard_error, mirror.mc_standard_error)
        worst = max(worst, abs(row.ratio - mirror.ratio) / bound if bound > 0 else 0.0)
    return {
        "description": f"{name}: ratio symmetric in Delta (worst gap {worst:.2f} x 3 SE)",
        "value": float(worst),
        "passed": bool(worst <= 1.0),
    }


def reproduce_figures(
    out_dir: str,
    n_mc: int,
    seed: int,
    workers: int = 1,
    chunk_size: int = 8192,
    progress: bool = False,
    full_precision: bool = False,
):
    """Write the two risk-ratio curves and return (checks, paths)."""
    specs = [
        ("risk_positive", RestrictionSet.positive(), POSITIVE_DELTAS),
        ("risk_interval", RestrictionSet.interval(6.0), INTERVAL_DELTAS),
    ]
    checks, paths = [], []
    for name, restriction, grid in specs:
        curve = risk_ratio_curve(
            parse_deltas(grid),
            k=3,
            p=1,
            restriction=restriction,
            n_mc=n_mc,
            seed=seed,
            workers=workers,
            chunk_size=chunk_size,
            progress=progress,
        )
        path = os.path.join(out_dir, f"{name}.csv")
        curve_to_csv(curve, path, full_precision)
        paths.append(path)
        checks.extend(_band_checks(name, curve))
        if restriction.kind == "interval":
            checks.append(_symmetry_check(name, curve))
    return checks, paths


def run_reproduction(
    out_dir: str,
    n_mc: int,
    seed: int,
    data_path: str = DEFAULT_DATA_PATH,
    workers: int = 1,
    chunk_size: int = 8192,
    progress: bool = False,
    full_precision: bool = False,
    include_figures: bool = True,
) -> ReproductionReport:
    """
    Regenerate tables (tables.json), the walking-example densities and the
    risk-curve CSVs into out_dir.

    Raises:
        ReproductionError: if any asserted cell or figure check fails; the
            report is written before raising
    """
    os.makedirs(out_dir, exist_ok=True)
    cells = reproduce_tables(data_path)
    figure_checks, files = [], []
    densities_path = os.path.join(out_dir, "walking_densities.csv")
    frame_to_csv(walking_density_frame(ingest_raw(data_path)), densities_path, full_precision)
    if include_figures:
        figure_checks, files = reproduce_figures(out_dir, n_mc, seed, workers, chunk_size, progress, full_precision)
    report = ReproductionReport(cells=cells, figure_checks=figure_checks, files=files + [densities_path])

    tables_path = os.path.join(out_dir, "tables.json")
    to_json(
        {
            "cells": [cell.to_record() for cell in cells],
            "figure_checks": figure_checks,
            "failures": report.failures,
        },
        tables_path,
        full_precision,
    )
    report.files.append(tables_path)

    if report.failures:
        for failure in report.failures:
            logger.error(f"Reproduction check failed: {failure}")
        raise ReproductionError(f"{len(report.failures)} reproduction check(s) failed", report.failures)
    logger.info(f"Reproduction passed; files: {', '.join(report.files)}")
    return report
