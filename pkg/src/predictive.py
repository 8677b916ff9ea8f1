"""
Predictive Module

The three Bayes predictive density estimators of a future Y ~ N(theta1, sigma^2):

- baseline: prior 1/sigma^2 without restriction, T_1(k, x1, sqrt(2 s^2/k))
- positive-restricted: theta1 - theta2 >= 0, a one-sided skew-t
- interval-restricted: |theta1 - theta2| <= m, a two-sided skew-t

It includes:
- parameter-form constructors returning distribution parameter sets
- explicit closed-form densities (a Student t factor times a ratio of t cdfs),
  kept as an independent formula path
- `summarize`, which reports mean and 10/50/90 percentiles
"""

import logging
from typing import Annotated, Any, Dict, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy import special

from src.distributions import (
    SkewTOneSidedParams,
    SkewTTwoSidedParams,
    StudentTParams,
    make_density,
    params_to_json,
    student_t_logpdf,
    t_band,
)
from src.exceptions import InvalidRestrictionError
from src.posterior import AlphaConvention, RestrictionSet, TwoSampleSummary

logger = logging.getLogger(__name__)

ALPHA1 = 1.0 / np.sqrt(3.0)
PERCENTILE_LEVELS = (0.1, 0.5, 0.9)

ALPHA_COEFFICIENT = {
    AlphaConvention.EXACT: 2.0 / np.sqrt(3.0),
    AlphaConvention.PRINTED: np.sqrt(2.0 / 3.0),
}

PredictiveParams = Annotated[
    Union[StudentTParams, SkewTOneSidedParams, SkewTTwoSidedParams], Field(discriminator="family")
]


class PredictiveReport(BaseModel):
    """Mean and 10/50/90 percentiles of a predictive density."""

    params: PredictiveParams
    mean: float
    percentiles: Dict[str, float]

    @model_validator(mode="after")
    def _check_order(self):
        values = [self.percentiles[f"{level}"] for level in PERCENTILE_LEVELS]
        if not all(lo < hi for lo, hi in zip(values[:-1], values[1:])):
            raise ValueError(f"percentiles must be strictly increasing, got {values}")
        return self

    def to_record(self) -> Dict[str, Any]:
        """JSON shape {family, params, mean, p10, p50, p90}."""
        return {
            "family": self.params.family,
            "params": params_to_json(self.params),
            "mean": self.mean,
            "p10": self.percentiles["0.1"],
            "p50": self.percentiles["0.5"],
            "p90": self.percentiles["0.9"],
        }


def baseline_predictive(summary: TwoSampleSummary) -> StudentTParams:
    """
    Predictive under the non-informative prior: T_p(k, x1, sqrt(2 s^2/k)).

    Depends only on (x1, s^2, k).
    """
    params = StudentTParams(p=summary.p, nu=summary.k, xi=summary.x1, tau=summary.tau)
    logger.debug(f"Baseline predictive: {params_to_json(params)}")
    return params


def positive_restricted_predictive(
    summary: TwoSampleSummary, convention: AlphaConvention = AlphaConvention.EXACT
) -> SkewTOneSidedParams:
    """
    Predictive under the restriction theta1 - theta2 >= 0.

    Args:
        summary: Two-sample summary (p = 1)
        convention: EXACT gives alpha0 = (2/sqrt(3)) (x1 - x2)/tau; PRINTED
            gives sqrt(2/3) (x1 - x2)/tau

    Returns:
        ST_1(nu=k, alpha0, alpha1=1/sqrt(3), xi=x1, tau=sqrt(2 s^2/k))
    """
    summary.require_univariate("positive_restricted_predictive")
    tau = summary.tau
    alpha0 = ALPHA_COEFFICIENT[AlphaConvention(convention)] * summary.difference / tau
    params = SkewTOneSidedParams(nu=summary.k, alpha0=alpha0, alpha1=ALPHA1, xi=summary.x1, tau=tau)
    logger.debug(f"Positive-restricted predictive ({convention}): {params_to_json(params)}")
    return params


def interval_restricted_predictive(
    summary: TwoSampleSummary, m: float, convention: AlphaConvention = AlphaConvention.EXACT
) -> SkewTTwoSidedParams:
    """
    Predictive under the restriction |theta1 - theta2| <= m.

    Raises:
        InvalidRestrictionError: if m <= 0
    """
    if not m > 0:
        raise InvalidRestrictionError(f"m must be positive, got {m}")
    summary.require_univariate("interval_restricted_predictive")
    tau = summary.tau
    coefficient = ALPHA_COEFFICIENT[AlphaConvention(convention)]
    d = summary.difference
    params = SkewTTwoSidedParams(
        nu=summary.k,
        alpha0=coefficient * (d + m) / tau,
        alpha1=ALPHA1,
        alpha2=coefficient * (d - m) / tau,
        xi=summary.x1,
        tau=tau,
    )
    logger.debug(f"Interval-restricted predictive (m={m}, {convention}): {params_to_json(params)}")
    return params


def predictive_for(
    summary: TwoSampleSummary,
    restriction: RestrictionSet,
    convention: AlphaConvention = AlphaConvention.EXACT,
) -> PredictiveParams:
    """Estimator matching a restriction set (baseline when unrestricted)."""
    if restriction.kind == "positive":
        return positive_restricted_predictive(summary, convention)
    if restriction.kind == "interval":
        return interval_restricted_predictive(summary, restriction.m, convention)
    return baseline_predictive(summary)


def _explicit_parts(y1, summary: TwoSampleSummary):
    summary.require_univariate("explicit predictive density")
    y = np.asarray(y1, dtype=float)
    x1, s2, k = summary.x1[0], summary.s2, summary.k
    base = np.exp(student_t_logpdf(y, k, x1, summary.tau))
    factor = np.sqrt((k + 1.0) / (2.0 * s2 + (y - x1) ** 2))
    return y, base, factor


def positive_restricted_pdf_explicit(y1, summary: TwoSampleSummary):
    """
    T_1(k, x1, tau) density times
    F(k+1, ((2/sqrt(3))(x1 - x2) + (y1 - x1)/sqrt(3)) sqrt((k+1)/(2 s^2 + (y1 - x1)^2)))
    / F(k, (x1 - x2)/tau).
    """
    y, base, factor = _explicit_parts(y1, summary)
    d = summary.difference
    shift = (y - summary.x1[0]) / np.sqrt(3.0)
    numerator = special.stdtr(summary.k + 1.0, (2.0 / np.sqrt(3.0) * d + shift) * factor)
    value = base * numerator / special.stdtr(summary.k, d / summary.tau)
    return float(value) if np.ndim(y1) == 0 else value


def interval_restricted_pdf_explicit(y1, summary: TwoSampleSummary, m: float):
    """
    Interval analogue: T_1(k, x1, tau) density times
    [F(k+1, L1) - F(k+1, L2)] / [F(k, (x1 - x2 + m)/tau) - F(k, (x1 - x2 - m)/tau)],
    L1,2 = ((2/sqrt(3))(x1 - x2 +/- m) + (y1 - x1)/sqrt(3)) sqrt((k+1)/(2 s^2 + (y1 - x1)^2)).
    """
    if not m > 0:
        raise InvalidRestrictionError(f"m must be positive, got {m}")
    y, base, factor = _explicit_parts(y1, summary)
    d, k, tau = summary.difference, summary.k, summary.tau
    shift = (y - summary.x1[0]) / np.sqrt(3.0)
    upper = (2.0 / np.sqrt(3.0) * (d + m) + shift) * factor
    lower = (2.0 / np.sqrt(3.0) * (d - m) + shift) * factor
    value = base * t_band(k + 1.0, lower, upper) / t_band(k, (d - m) / tau, (d + m) / tau)
    return float(value) if np.ndim(y1) == 0 else value


def summarize(params: PredictiveParams) -> PredictiveReport:
    """
    Mean and 10/50/90 percentiles of a predictive density.

    Raises:
        NumericIntegrityError: if the mean does not exist (nu <= 1) or the
            density fails its normalization check
    """
    density = make_density(params)
    quantiles = np.atleast_1d(density.quantile(np.array(PERCENTILE_LEVELS)))
    report = PredictiveReport(
        params=params,
        mean=density.mean(),
        percentiles={f"{level}": float(q) for level, q in zip(PERCENTILE_LEVELS, quantiles)},
    )
    logger.info(
        f"Summary of {params.family}: mean {report.mean:.6g}, "
        f"P10 {report.percentiles['0.1']:.6g}, P50 {report.percentiles['0.5']:.6g}, P90 {report.percentiles['0.9']:.6g}"
    )
    return report
