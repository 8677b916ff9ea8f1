"""
API Module

FastAPI service exposing the predictive estimators and distribution
evaluation over HTTP:

- GET  /health
- POST /fit       baseline and restricted reports for a summary
- POST /eval      pdf values of a distribution
- POST /quantile  quantiles of a distribution
- POST /sample    seeded samples of a distribution

Validation problems are returned as 422, numeric failures as 500.
"""

import logging
import time
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from src.distributions import make_density, params_from_json
from src.exceptions import NumericIntegrityError, SkewTPredictiveError
from src.posterior import AlphaConvention, RestrictionSet, TwoSampleSummary
from src.predictive import baseline_predictive, predictive_for, summarize

logger = logging.getLogger(__name__)

app = FastAPI(
    title="Skew-t Predictive API",
    description="Bayes predictive density estimators under order restrictions.",
    version="1.0.0",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

_started = time.time()


class FitRequest(BaseModel):
    x1: float
    x2: float
    s: float = Field(gt=0, description="group-1 standard deviation")
    n: int = Field(ge=3, description="group-1 size")
    restriction: Literal["positive", "interval"] = "positive"
    m: Optional[float] = None
    convention: AlphaConvention = AlphaConvention.EXACT


class EvalRequest(BaseModel):
    params: Dict[str, Any]
    points: List[float] = Field(min_length=1)


class QuantileRequest(BaseModel):
    params: Dict[str, Any]
    probs: List[float] = Field(min_length=1)


class SampleRequest(BaseModel):
    params: Dict[str, Any]
    n: int = Field(default=10, ge=1, le=1_000_000)
    seed: int = Field(default=0, ge=0)


def _http_error(e: SkewTPredictiveError) -> HTTPException:
    if isinstance(e, NumericIntegrityError):
        logger.error(f"Numeric failure: {e}")
        return HTTPException(status_code=500, detail=str(e))
    logger.info(f"Rejected request: {e}")
    return HTTPException(status_code=422, detail=str(e))


@app.get("/health")
async def health_check():
    """Health check endpoint for monitoring."""
    return {"status": "healthy", "timestamp": time.time(), "uptime": time.time() - _started}


@app.post("/fit")
async def fit(request: FitRequest):
    """Baseline and restricted predictive reports."""
    try:
        summary = TwoSampleSummary.from_values(request.x1, request.x2, request.s ** 2, request.n - 1)
        if request.restriction == "interval":
            if request.m is None:
                raise HTTPException(status_code=422, detail="m is required for an interval restriction")
            restriction = RestrictionSet.interval(request.m)
        else:
            restriction = RestrictionSet.positive()
        estimators = [baseline_predictive(summary), predictive_for(summary, restriction, request.convention)]
        return {"reports": [summarize(params).to_record() for params in estimators]}
    except SkewTPredictiveError as e:
        raise _http_error(e)


@app.post("/eval")
async def evaluate(request: EvalRequest):
    """Density values at the requested points."""
    try:
        density = make_density(params_from_json(request.params))
        values = np.atleast_1d(density.pdf(np.array(request.points))).tolist()
        return {"points": request.points, "pdf": values}
    except SkewTPredictiveError as e:
        raise _http_error(e)


@app.post("/quantile")
async def quantile(request: QuantileRequest):
    """Quantiles at the requested probabilities."""
    try:
        density = make_density(params_from_json(request.params))
        values = np.atleast_1d(density.quantile(np.array(request.probs))).tolist()
        return {"probs": request.probs, "quantiles": values}
    except SkewTPredictiveError as e:
        raise _http_error(e)


@app.post("/sample")
async def sample(request: SampleRequest):
    """Seeded draws; the same (n, seed) always returns the same list."""
    try:
        density = make_density(params_from_json(request.params))
        return {"seed": request.seed, "samples": density.sample(request.n, request.seed).tolist()}
    except SkewTPredictiveError as e:
        raise _http_error(e)
