"""
Risk Module

Kullback-Leibler loss and frequentist KL risk of the predictive estimators.

It includes:
- `kl_divergence`: adaptive quadrature of KL(N(mu, sigma^2) || q) for one
  estimate
- `kl_divergence_batch`: Gauss-Hermite evaluation for many estimates at once
- `kl_risk` / `risk_ratio_curve`: Monte Carlo risk under the two-group model,
  drawing (X1, X2, S^2) with S^2 ~ sigma^2 chi^2_k per replicate

Replicates are processed in fixed-size chunks whose base draws come from the
substream (seed, "risk", chunk index), so results do not depend on the
number of workers. The same base draws serve every Delta on the grid and
both estimators (common random numbers).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Literal, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from src.distributions import Density, skew_t_log_weight, student_t_logpdf
from src.exceptions import InvalidScenarioError, UnsupportedDimensionError
from src.posterior import AlphaConvention, RestrictionSet
from src.predictive import ALPHA1, ALPHA_COEFFICIENT
from src.utils.quadrature import adaptive_integral, normal_expectation_nodes
from src.utils.random_streams import chunk_sizes, substream

logger = logging.getLogger(__name__)

Estimator = Literal["baseline", "restricted"]
# Gauss-Hermite nodes per replicate in Monte Carlo risk
RISK_QUADRATURE_ORDER = 64
CURVE_COLUMNS = ["delta", "risk_baseline", "risk_restricted", "ratio", "se"]


class RiskScenario(BaseModel):
    """A parameter point (Delta = (theta1 - theta2)/sigma) and Monte Carlo settings."""

    model_config = ConfigDict(frozen=True)

    p: int = Field(default=1, ge=1)
    k: float = Field(ge=2)
    delta: float
    sigma: float = Field(default=1.0, gt=0)
    theta1: float = 0.0
    restriction: RestrictionSet = RestrictionSet(kind="positive")
    n_mc: int = Field(ge=1)
    seed: int = Field(ge=0)
    convention: AlphaConvention = AlphaConvention.EXACT

    @property
    def theta2(self) -> float:
        return self.theta1 - self.delta * self.sigma


class RiskEstimate(BaseModel):
    risk: float
    se: float


class RiskCurveRow(BaseModel):
    delta: float
    risk_baseline: float = Field(ge=0)
    risk_restricted: float = Field(ge=0)
    ratio: float
    mc_standard_error: float = Field(ge=0)
    se_baseline: float = Field(ge=0)
    se_restricted: float = Field(ge=0)


class RiskCurve(BaseModel):
    rows: List[RiskCurveRow]

    def to_frame(self) -> pd.DataFrame:
        """Rows as a DataFrame with the exported column names."""
        frame = pd.DataFrame([row.model_dump() for row in self.rows])
        frame = frame.rename(columns={"mc_standard_error": "se"})
        return frame[CURVE_COLUMNS]

    @property
    def min_ratio(self) -> float:
        return min(row.ratio for row in self.rows)


def _check_feasible(delta: float, sigma: float, restriction: RestrictionSet) -> None:
    if restriction.kind == "positive" and delta < 0:
        raise InvalidScenarioError(f"Delta={delta} violates theta1 - theta2 >= 0")
    if restriction.kind == "interval" and abs(delta) * sigma > restriction.m:
        raise InvalidScenarioError(f"|Delta| * sigma = {abs(delta) * sigma} exceeds m={restriction.m}")


def kl_divergence(true_mean: float, true_var: float, estimate: Density) -> float:
    """
    KL(N(true_mean, true_var) || estimate) by adaptive quadrature over
    true_mean +/- 10 sigma (absolute tolerance 1e-9).

    Returns:
        Divergence, or +inf if the estimate vanishes where the truth does not
    """
    sigma = float(np.sqrt(true_var))
    log_norm = -0.5 * np.log(2.0 * np.pi * true_var)

    def integrand(y: float) -> float:
        z = (y - true_mean) / sigma
        log_truth = log_norm - 0.5 * z * z
        log_estimate = float(estimate.logpdf(y))
        if not np.isfinite(log_estimate):
            raise _EstimateVanishes(y)
        return float(np.exp(log_truth) * (log_truth - log_estimate))

    try:
        value = adaptive_integral(
            integrand, true_mean - 10 * sigma, true_mean + 10 * sigma, abs_tol=1e-9, rel_tol=1e-9, points=[true_mean]
        )
    except _EstimateVanishes as e:
        logger.warning(f"Estimate density is zero at y={e.args[0]} where the truth is positive; KL is infinite")
        return float("inf")
    return max(value, 0.0)


class _EstimateVanishes(Exception):
    pass


def kl_divergence_batch(
    true_mean: float,
    true_var: float,
    log_density: Callable[[np.ndarray], np.ndarray],
    order: int = 96,
) -> np.ndarray:
    """
    KL(N(true_mean, true_var) || q) for many estimates q at once.

    Args:
        true_mean: Mean of the Gaussian truth
        true_var: Variance of the Gaussian truth
        log_density: Maps the node array y (shape (order,)) to log q(y) with
            shape (..., order), one row per estimate
        order: Number of Gauss-Hermite nodes

    Returns:
        Array of divergences with the leading shape of log_density's output
    """
    nodes, weights = normal_expectation_nodes(order)
    y = true_mean + np.sqrt(true_var) * nodes
    negative_entropy = -0.5 * np.log(2.0 * np.pi * true_var) - 0.5
    return negative_entropy - np.asarray(log_density(y)) @ weights


def baseline_known_variance_kl() -> float:
    """KL risk of N(x1, 2 sigma^2), the known-variance baseline: (1/2) ln 2."""
    return 0.5 * np.log(2.0)


def _chunk_losses(
    chunk_index: int,
    size: int,
    deltas: Sequence[float],
    k: float,
    sigma: float,
    theta1: float,
    seed: int,
    restriction: RestrictionSet,
    convention: AlphaConvention,
) -> np.ndarray:
    """
    Losses for one chunk: array of shape (len(deltas), 2, size) holding the
    baseline and restricted KL of every replicate.
    """
    rng = substream(seed, "risk", chunk_index)
    z1 = rng.standard_normal(size)
    z2 = rng.standard_normal(size)
    chi2 = rng.chisquare(k, size)

    x1 = theta1 + sigma * z1
    s2 = sigma * sigma * chi2
    tau = np.sqrt(2.0 * s2 / k)[:, None]

    def standardized(y):
        return (y[None, :] - x1[:, None]) / tau

    baseline = kl_divergence_batch(
        theta1, sigma * sigma, lambda y: student_t_logpdf(standardized(y), k, 0.0, 1.0) - np.log(tau),
        RISK_QUADRATURE_ORDER,
    )
    coefficient = ALPHA_COEFFICIENT[convention]
    out = np.empty((len(deltas), 2, size))
    for i, delta in enumerate(deltas):
        x2 = theta1 - delta * sigma + sigma * z2
        d = (x1 - x2)[:, None]
        if restriction.kind == "positive":
            alpha0, alpha2 = coefficient * d / tau, None
        elif restriction.kind == "interval":
            alpha0 = coefficient * (d + restriction.m) / tau
            alpha2 = coefficient * (d - restriction.m) / tau
        else:
            out[i, 0] = baseline
            out[i, 1] = baseline
            continue

        def log_restricted(y, alpha0=alpha0, alpha2=alpha2):
            z = standardized(y)
            return student_t_logpdf(z, k, 0.0, 1.0) - np.log(tau) + skew_t_log_weight(z, k, alpha0, ALPHA1, alpha2)

        out[i, 0] = baseline
        out[i, 1] = kl_divergence_batch(theta1, sigma * sigma, log_restricted, RISK_QUADRATURE_ORDER)
    logger.debug(f"Risk chunk {chunk_index}: {size} replicates over {len(deltas)} deltas")
    return out


def _simulate_losses(
    deltas: Sequence[float],
    k: float,
    sigma: float,
    theta1: float,
    restriction: RestrictionSet,
    n_mc: int,
    seed: int,
    convention: AlphaConvention = AlphaConvention.EXACT,
    workers: int = 1,
    chunk_size: int = 8192,
    progress: bool = False,
) -> np.ndarray:
    """All replicate losses, shape (len(deltas), 2, n_mc), in chunk order."""
    sizes = chunk_sizes(n_mc, chunk_size)

    def run(indexed):
        index, size = indexed
        return _chunk_losses(index, size, deltas, k, sigma, theta1, seed, restriction, AlphaConvention(convention))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        chunks = list(
            tqdm(
                pool.map(run, enumerate(sizes)),
                total=len(sizes),
                desc="KL risk",
                unit="chunk",
                disable=not progress,
            )
        )
    return np.concatenate(chunks, axis=-1)


def _mean_se(values: np.ndarray):
    n = values.shape[-1]
    mean = values.mean(axis=-1)
    se = values.std(axis=-1, ddof=1) / np.sqrt(n) if n > 1 else np.full(mean.shape, np.inf)
    return mean, se


def kl_risk(scenario: RiskScenario, estimator: Estimator, workers: int = 1, chunk_size: int = 8192) -> RiskEstimate:
    """
    Monte Carlo KL risk of one estimator at a scenario.

    Raises:
        InvalidScenarioError: if Delta violates the restriction
    """
    if scenario.p != 1:
        raise UnsupportedDimensionError("risk is evaluated for p=1 only")
    _check_feasible(scenario.delta, scenario.sigma, scenario.restriction)
    losses = _simulate_losses(
        [scenario.delta],
        scenario.k,
        scenario.sigma,
        scenario.theta1,
        scenario.restriction,
        scenario.n_mc,
        scenario.seed,
        scenario.convention,
        workers,
        chunk_size,
    )
    column = 0 if estimator == "baseline" else 1
    mean, se = _mean_se(losses[0, column])
    return RiskEstimate(risk=float(mean), se=float(se))


def risk_ratio_curve(
    deltas: Sequence[float],
    k: float,
    p: int,
    restriction: RestrictionSet,
    n_mc: int,
    seed: int,
    sigma: float = 1.0,
    theta1: float = 0.0,
    workers: int = 1,
    chunk_size: int = 8192,
    progress: bool = False,
    convention: AlphaConvention = AlphaConvention.EXACT,
) -> RiskCurve:
    """
    Risk ratio (restricted over baseline) on a Delta grid.

    Args:
        deltas: Grid of Delta = (theta1 - theta2)/sigma values
        k: Degrees of freedom
        p: Dimension (1 only)
        restriction: Restriction set of the restricted estimator
        n_mc: Replicates per Delta
        seed: Master seed
        sigma: Common standard deviation
        theta1: Location of the truth
        workers: Threads used for chunks
        chunk_size: Replicates per chunk
        progress: Show a tqdm progress bar
        convention: Skewing constants of the restricted estimator

    Returns:
        RiskCurve with one row per Delta; `mc_standard_error` is the
        delta-method standard error of the ratio
    """
    deltas = [float(d) for d in deltas]
    if not deltas:
        raise InvalidScenarioError("Delta grid is empty")
    if p != 1:
        raise UnsupportedDimensionError("risk curves are computed for p=1 only")
    if n_mc < 1:
        raise InvalidScenarioError("n_mc must be at least 1")
    for delta in deltas:
        _check_feasible(delta, sigma, restriction)

    logger.info(f"Risk curve: k={k}, restriction={restriction.kind}, {len(deltas)} deltas, n_mc={n_mc}, seed={seed}")
    losses = _simulate_losses(
        deltas, k, sigma, theta1, restriction, n_mc, seed, convention, workers, chunk_size, progress
    )
    rows = []
    for i, delta in enumerate(deltas):
        base, restricted = losses[i, 0], losses[i, 1]
        (risk_base, risk_restricted), (se_base, se_restricted) = _mean_se(np.stack([base, restricted]))
        ratio = risk_restricted / risk_base
        _, se_linear = _mean_se(restricted - ratio * base)
        rows.append(
            RiskCurveRow(
                delta=delta,
                risk_baseline=float(risk_base),
                risk_restricted=float(risk_restricted),
                ratio=float(ratio),
                mc_standard_error=float(se_linear / risk_base),
                se_baseline=float(se_base),
                se_restricted=float(se_restricted),
            )
        )
        logger.info(f"Delta={delta:g}: baseline {risk_base:.6f}, restricted {risk_restricted:.6f}, ratio {ratio:.4f}")
    return RiskCurve(rows=rows)
