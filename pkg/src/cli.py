"""
Command Line Interface Module

This module provides the `main.py` command surface.

It includes:
- fit: baseline and restricted predictive reports for a summary or raw data
- risk-curve: KL risk ratio over a Delta grid
- reproduce: example tables and figure data with acceptance checks
- eval / quantile / sample: evaluate a distribution given as JSON
- oracle: rejection draws from the restricted posterior predictive (any p)
- serve: run the HTTP service

Exit codes: 0 success, 1 validation error, 2 numeric-integrity error,
3 reproduction-threshold failure.
"""

import argparse
import json
import logging
import sys
from typing import List, Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.config import get_settings
from src.data_io import (
    curve_to_csv,
    frame_to_csv,
    ingest_raw,
    records_to_frame,
    samples_to_csv,
    summary_from_flags,
    to_json,
)
from src.distributions import make_density, params_from_json
from src.exceptions import InvalidParameterError, SkewTPredictiveError
from src.oracle import rejection_sample_predictive
from src.posterior import AlphaConvention, RestrictionSet, TwoSampleSummary
from src.predictive import baseline_predictive, predictive_for, summarize
from src.reproduce import DEFAULT_DATA_PATH, run_reproduction
from src.risk import CURVE_COLUMNS, risk_ratio_curve
from src.utils.common_utils import configure_logging, parse_deltas

logger = logging.getLogger(__name__)

COMMANDS = ("fit", "risk-curve", "reproduce", "eval", "quantile", "sample", "oracle", "serve")


class RunConfig(BaseModel):
    """Validated parameters of one command invocation."""

    model_config = ConfigDict(frozen=True)

    command: Literal["fit", "risk-curve", "reproduce", "eval", "quantile", "sample", "oracle", "serve"]
    summary: Optional[str] = None
    data: Optional[str] = None
    restriction: Literal["positive", "interval"] = "positive"
    m: Optional[float] = None
    k: float = Field(default=3.0, ge=2)
    deltas: str = "0:5:0.5"
    n_mc: int = Field(ge=1)
    seed: int = Field(ge=0)
    out: Optional[str] = None
    format: Literal["json", "csv"] = "json"
    full_precision: bool = False
    quiet: bool = False
    workers: int = Field(default=1, ge=1)
    chunk_size: int = Field(default=8192, ge=1)
    convention: AlphaConvention = AlphaConvention.EXACT
    params: Optional[str] = None
    points: Optional[str] = None
    probs: Optional[str] = None
    n: int = Field(default=10, ge=1)
    columns: Optional[str] = None
    skip_figures: bool = False

    @model_validator(mode="after")
    def _check_consistency(self):
        if (self.restriction == "interval") != (self.m is not None):
            raise ValueError("--m is required with --restriction interval and only then")
        if self.m is not None and not self.m > 0:
            raise ValueError("--m must be positive")
        if self.command in ("fit", "oracle") and (self.summary is None) == (self.data is None):
            raise ValueError(f"{self.command} needs exactly one of --summary or --data")
        if self.command in ("eval", "quantile", "sample") and not self.params:
            raise ValueError(f"{self.command} needs --params")
        if self.command == "eval" and not self.points:
            raise ValueError("eval needs --points")
        if self.command == "quantile" and not self.probs:
            raise ValueError("quantile needs --probs")
        return self

    @property
    def restriction_set(self) -> RestrictionSet:
        if self.restriction == "interval":
            return RestrictionSet.interval(self.m)
        return RestrictionSet.positive()


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as InvalidParameterError (exit code 1)."""

    def error(self, message):
        raise InvalidParameterError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = _Parser(
        prog="skewt_predictive",
        description="Bayes predictive densities under order restrictions",
        allow_abbrev=False,
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--summary", help="x1,x2,s,n (group means, group-1 sd and size)")
    parser.add_argument("--data", help="CSV with header group,value")
    parser.add_argument("--restriction", choices=("positive", "interval"), default="positive")
    parser.add_argument("--m", type=float, help="half-width of the interval restriction")
    parser.add_argument("--k", type=float, default=3.0, help="degrees of freedom for risk curves")
    parser.add_argument("--deltas", default="0:5:0.5", help="START:STOP:STEP or comma-separated list")
    parser.add_argument("--nmc", dest="n_mc", type=int, default=settings.n_mc)
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument("--out", help="output file (directory for reproduce)")
    parser.add_argument("--format", choices=("json", "csv"), default=None)
    parser.add_argument("--full-precision", action="store_true")
    parser.add_argument("--quiet", action="store_true", help="no progress bars, warnings only")
    parser.add_argument("--workers", type=int, default=settings.workers)
    parser.add_argument("--chunk-size", type=int, default=settings.chunk_size)
    parser.add_argument("--convention", choices=[c.value for c in AlphaConvention], default="exact")
    parser.add_argument("--params", help="distribution parameters as JSON")
    parser.add_argument("--points", help="comma-separated evaluation points")
    parser.add_argument("--probs", help="comma-separated probabilities")
    parser.add_argument("--n", type=int, default=10, help="sample size")
    parser.add_argument("--columns", help="column subset for risk-curve CSV")
    parser.add_argument("--skip-figures", action="store_true", help="reproduce tables only")
    return parser


def _floats(text: str, name: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise InvalidParameterError(f"--{name} must be comma-separated numbers: {e}") from e


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        logger.info(f"Wrote output to {out}")
    else:
        sys.stdout.write(text)


def _summary(config: RunConfig) -> TwoSampleSummary:
    if config.data:
        return ingest_raw(config.data)
    return summary_from_flags(config.summary)


def cmd_fit(config: RunConfig) -> str:
    """Baseline and restricted reports side by side."""
    summary = _summary(config)
    estimators = [baseline_predictive(summary), predictive_for(summary, config.restriction_set, config.convention)]
    records = [summarize(params).to_record() for params in estimators]
    if config.format == "csv":
        return frame_to_csv(records_to_frame(records), full_precision=config.full_precision)
    payload = {"summary": summary.model_dump(mode="json"), "reports": records}
    return to_json(payload, full_precision=config.full_precision)


def cmd_risk_curve(config: RunConfig) -> str:
    """Risk-ratio curve as CSV (default) or JSON rows."""
    curve = risk_ratio_curve(
        parse_deltas(config.deltas),
        k=config.k,
        p=1,
        restriction=config.restriction_set,
        n_mc=config.n_mc,
        seed=config.seed,
        workers=config.workers,
        chunk_size=config.chunk_size,
        progress=not config.quiet and get_settings().progress,
        convention=config.convention,
    )
    if config.format == "json":
        rows = curve.to_frame().to_dict(orient="records")
        return to_json({"rows": rows}, full_precision=config.full_precision)
    columns = None
    if config.columns:
        columns = [c.strip() for c in config.columns.split(",")]
        unknown = set(columns) - set(CURVE_COLUMNS)
        if unknown:
            raise InvalidParameterError(f"Unknown column(s): {', '.join(sorted(unknown))}")
    return curve_to_csv(curve, full_precision=config.full_precision, columns=columns)


def cmd_reproduce(config: RunConfig) -> str:
    report = run_reproduction(
        out_dir=config.out or "reproduction",
        n_mc=config.n_mc,
        seed=config.seed,
        data_path=config.data or DEFAULT_DATA_PATH,
        workers=config.workers,
        chunk_size=config.chunk_size,
        progress=not config.quiet and get_settings().progress,
        full_precision=config.full_precision,
        include_figures=not config.skip_figures,
    )
    lines = [
        f"{c.table} {c.row:<2} {c.quantity:<6} printed {c.printed:<8g} computed {c.computed:<10.6g} "
        f"delta {c.delta:+.4f} {'checked' if c.asserted else 'reported'}"
        for c in report.cells
    ]
    lines.extend(check["description"] for check in report.figure_checks)
    lines.append(f"files: {', '.join(report.files)}")
    return "\n".join(lines) + "\n"


def cmd_eval(config: RunConfig) -> str:
    density = make_density(params_from_json(config.params))
    points = _floats(config.points, "points")
    values = [float(density.pdf(point)) for point in points]
    if config.format == "csv":
        return frame_to_csv(pd.DataFrame({"point": points, "pdf": values}), full_precision=config.full_precision)
    return to_json({"points": points, "pdf": values}, full_precision=config.full_precision)


def cmd_quantile(config: RunConfig) -> str:
    density = make_density(params_from_json(config.params))
    probs = _floats(config.probs, "probs")
    values = np.atleast_1d(density.quantile(np.array(probs))).tolist()
    if config.format == "csv":
        return frame_to_csv(pd.DataFrame({"prob": probs, "quantile": values}), full_precision=config.full_precision)
    return to_json({"probs": probs, "quantiles": values}, full_precision=config.full_precision)


def cmd_sample(config: RunConfig) -> str:
    density = make_density(params_from_json(config.params))
    samples = density.sample(config.n, config.seed)
    if config.format == "csv":
        return samples_to_csv(samples, full_precision=config.full_precision)
    return to_json({"seed": config.seed, "samples": samples.tolist()}, full_precision=config.full_precision)


def cmd_oracle(config: RunConfig) -> str:
    """
    Rejection draws from the restricted posterior predictive.

    CSV: samples go to --out (report JSON on stdout) or to stdout (report on
    stderr). JSON: one document with the report and the samples.
    """
    summary = _summary(config)
    samples, report = rejection_sample_predictive(
        summary,
        config.restriction_set,
        n=config.n,
        seed=config.seed,
        workers=config.workers,
        progress=not config.quiet and get_settings().progress,
    )
    report_record = report.model_dump(exclude_none=True)
    if config.format == "json":
        payload = {"report": report_record, "samples": samples.tolist()}
        return to_json(payload, config.out, full_precision=config.full_precision)
    text = samples_to_csv(samples, config.out, full_precision=config.full_precision)
    report_text = to_json(report_record, full_precision=config.full_precision)
    if config.out:
        return report_text
    sys.stderr.write(report_text)
    return text


def cmd_serve(config: RunConfig) -> str:
    import uvicorn

    settings = get_settings()
    logger.info(f"Starting service on {settings.host}:{settings.port}")
    uvicorn.run("src.api:app", host=settings.host, port=settings.port)
    return ""


_HANDLERS = {
    "fit": cmd_fit,
    "risk-curve": cmd_risk_curve,
    "reproduce": cmd_reproduce,
    "eval": cmd_eval,
    "quantile": cmd_quantile,
    "sample": cmd_sample,
    "oracle": cmd_oracle,
    "serve": cmd_serve,
}


def _default_format(command: str) -> str:
    return "csv" if command in ("risk-curve", "sample", "oracle") else "json"


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    try:
        settings = get_settings()
        args = build_parser().parse_args(argv)
        options = vars(args)
        options["format"] = options["format"] or _default_format(args.command)
        config = RunConfig(**options)
    except ValidationError as e:
        print(f"error: invalid arguments: {e}", file=sys.stderr)
        return 1
    except SkewTPredictiveError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

    configure_logging(settings.log_file, "WARNING" if config.quiet else settings.log_level)
    logger.info(f"Running {config.command} (seed={config.seed})")
    try:
        text = _HANDLERS[config.command](config)
        if config.command not in ("reproduce", "oracle"):
            _emit(text, config.out)
        else:
            sys.stdout.write(text)
    except SkewTPredictiveError as e:
        logger.error(f"{config.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        for failure in getattr(e, "failures", []):
            print(f"  - {failure}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        logger.error(f"{config.command} failed validation: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as e:
        print(f"error: invalid JSON: {e}", file=sys.stderr)
        return 1
    logger.info(f"Finished {config.command}")
    return 0
