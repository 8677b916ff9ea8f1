"""
Oracle Module

Brute-force validation paths that do not use the closed-form estimators:

- `rejection_sample_predictive`: exact draws from the constrained posterior
  predictive (sigma^2 = s^2/chi^2_k, theta_i ~ N(x_i, sigma^2 I), accept iff
  theta1 - theta2 lies in A, then y ~ N(theta1, sigma^2 I)); any p
- `eta_mixture_pdf`: the predictive density as an eta-integral of the
  Gaussian-skew-normal convolution against the eta posterior
- `ks_distance` / `dkw_threshold`: empirical-cdf comparison
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy import special
from tqdm import tqdm

from src.distributions import make_density, normal_band
from src.exceptions import InfeasibleSamplingError, InvalidParameterError, UnsupportedDimensionError
from src.posterior import (
    AlphaConvention,
    RestrictionSet,
    TwoSampleSummary,
    integrate_over_eta,
    log_eta_posterior_pdf,
)
from src.predictive import predictive_for
from src.utils.random_streams import substream

logger = logging.getLogger(__name__)

MIN_ACCEPTANCE_RATE = 1e-6
LOW_ACCEPTANCE_WARNING = 1e-2


class OracleReport(BaseModel):
    """Outcome of a rejection-sampling run and, when requested, its KS check."""

    n_samples: int = Field(ge=1)
    acceptance_rate: float = Field(gt=0, le=1)
    ks_statistic: Optional[float] = Field(default=None, ge=0, le=1)
    threshold: Optional[float] = None
    passed: Optional[bool] = None


def _sample_chunk(
    index: int, size: int, summary: TwoSampleSummary, restriction: RestrictionSet, seed: int
) -> Tuple[np.ndarray, int]:
    rng = substream(seed, "oracle", index)
    p = summary.p
    sigma = np.sqrt(summary.s2 / rng.chisquare(summary.k, size))[:, None]
    theta1 = np.asarray(summary.x1) + sigma * rng.standard_normal((size, p))
    theta2 = np.asarray(summary.x2) + sigma * rng.standard_normal((size, p))
    y = theta1 + sigma * rng.standard_normal((size, p))
    accepted = restriction.contains(theta1 - theta2)
    return y[accepted], size


def rejection_sample_predictive(
    summary: TwoSampleSummary,
    restriction: RestrictionSet,
    n: int,
    seed: int,
    chunk_size: int = 65536,
    workers: int = 1,
    progress: bool = False,
) -> Tuple[np.ndarray, OracleReport]:
    """
    Exact draws from the posterior predictive under the restriction.

    Chunk j uses the substream (seed, "oracle", j); accepted draws are
    concatenated in chunk order and cut at n, so the output does not depend
    on `workers`.

    Args:
        summary: Two-sample summary (any p)
        restriction: Set A for theta1 - theta2
        n: Number of predictive draws
        seed: Master seed
        chunk_size: Proposals per chunk
        workers: Threads used for chunks
        progress: Show a tqdm progress bar

    Returns:
        (samples, report); samples has shape (n,) for p = 1 and (n, p) otherwise

    Raises:
        InfeasibleSamplingError: if the first chunk accepts less than 1e-6 of
            its proposals
    """
    if n < 1:
        raise InvalidParameterError("n must be at least 1")
    accepted: List[np.ndarray] = []
    proposed = 0
    collected = 0
    index = 0
    bar = tqdm(total=n, desc="Rejection sampling", unit="draw", disable=not progress)
    try:
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            while collected < n:
                batch = range(index, index + max(1, workers))
                results = list(pool.map(lambda j: _sample_chunk(j, chunk_size, summary, restriction, seed), batch))
                for draws, size in results:
                    if collected >= n:
                        break
                    if proposed == 0 and len(draws) / size < MIN_ACCEPTANCE_RATE:
                        raise InfeasibleSamplingError(
                            f"Acceptance rate {len(draws) / size:.2e} below {MIN_ACCEPTANCE_RATE} on the first batch"
                        )
                    proposed += size
                    accepted.append(draws)
                    bar.update(min(len(draws), n - collected))
                    collected += len(draws)
                index += len(batch)
    finally:
        bar.close()

    samples = np.concatenate(accepted, axis=0)
    rate = len(samples) / proposed
    samples = samples[:n]
    if rate < LOW_ACCEPTANCE_WARNING:
        logger.warning(f"Low acceptance rate {rate:.4f} for restriction {restriction.kind}")
    logger.info(f"Rejection sampler: {n} draws, acceptance rate {rate:.4f}")
    if summary.p == 1:
        samples = samples[:, 0]
    return samples, OracleReport(n_samples=n, acceptance_rate=rate)


def ks_distance(samples, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """
    Kolmogorov-Smirnov distance sup |ecdf - cdf| evaluated at the samples,
    taking both one-sided gaps.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = len(x)
    if n < 1:
        raise ValueError("ks_distance needs at least one sample")
    values = np.asarray(cdf(x), dtype=float)
    ranks = np.arange(1, n + 1)
    upper = np.max(ranks / n - values)
    lower = np.max(values - (ranks - 1) / n)
    return float(np.clip(max(upper, lower), 0.0, 1.0))


def dkw_threshold(n: int, alpha: float = 0.01) -> float:
    """Dvoretzky-Kiefer-Wolfowitz band: sup-gap exceeded with probability <= alpha."""
    return float(np.sqrt(np.log(2.0 / alpha) / (2.0 * n)))


def validate_closed_form(
    summary: TwoSampleSummary,
    restriction: RestrictionSet,
    n: int,
    seed: int,
    convention: AlphaConvention = AlphaConvention.EXACT,
    workers: int = 1,
) -> OracleReport:
    """
    KS distance between rejection draws and the closed-form predictive cdf,
    judged against the 99% DKW band.
    """
    summary.require_univariate("validate_closed_form")
    samples, report = rejection_sample_predictive(summary, restriction, n, seed, workers=workers)
    density = make_density(predictive_for(summary, restriction, convention))
    statistic = ks_distance(samples, density.cdf)
    threshold = dkw_threshold(n)
    passed = statistic < threshold
    log = logger.info if passed else logger.warning
    log(f"Oracle KS {statistic:.5f} vs threshold {threshold:.5f} ({restriction.kind}, {convention})")
    return report.model_copy(update={"ks_statistic": statistic, "threshold": threshold, "passed": passed})


def _log_convolution(y: float, eta, summary: TwoSampleSummary, restriction: RestrictionSet):
    """
    log density at y of theta1 + e, theta1 | eta skew-normal
    (alpha0 = (x1 - x2) sqrt(eta), alpha1 = 1, scale 1/sqrt(eta)) and
    e ~ N(0, 1/eta): sqrt(eta) N(w; 0, 2) Phi((alpha0 + w/2)/sqrt(3/2)) / Phi(alpha0/sqrt(2)),
    w = (y - x1) sqrt(eta); two-sided weights for intervals.
    """
    root = np.sqrt(eta)
    w = (y - summary.x1[0]) * root
    log_gauss = 0.5 * np.log(eta) - 0.5 * np.log(4.0 * np.pi) - w * w / 4.0
    d = summary.difference
    scale = np.sqrt(1.5)
    if restriction.kind == "positive":
        alpha0 = d * root
        return log_gauss + special.log_ndtr((alpha0 + w / 2.0) / scale) - special.log_ndtr(alpha0 / np.sqrt(2.0))
    if restriction.kind == "interval":
        alpha0, alpha2 = (d + restriction.m) * root, (d - restriction.m) * root
        with np.errstate(divide="ignore"):
            numerator = np.log(normal_band((alpha2 + w / 2.0) / scale, (alpha0 + w / 2.0) / scale))
            denominator = np.log(normal_band(alpha2 / np.sqrt(2.0), alpha0 / np.sqrt(2.0)))
        return log_gauss + numerator - denominator
    return log_gauss


def eta_mixture_pdf(y1: float, summary: TwoSampleSummary, restriction: RestrictionSet) -> float:
    """
    Predictive density at y1 as the integral over eta of the convolved
    conditional against the eta posterior.

    Raises:
        NumericIntegrityError: if the eta quadrature does not converge
    """
    if summary.p != 1:
        raise UnsupportedDimensionError("eta_mixture_pdf is available for p=1 only")

    def integrand(eta: float) -> float:
        value = log_eta_posterior_pdf(eta, summary, restriction) + _log_convolution(y1, eta, summary, restriction)
        if np.isnan(value):
            return 0.0
        return float(np.exp(value))

    return integrate_over_eta(integrand, summary)
