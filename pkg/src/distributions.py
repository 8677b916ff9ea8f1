"""
Distributions Module

The distribution family used by the predictive estimators, as evaluatable
objects sharing one contract (pdf, logpdf, cdf, quantile, mean, sample):

- location-scale Student t
- extended skew-normal (one- and two-sided weight)
- one-sided skew-Student t
- two-sided skew-Student t
- scale inverse chi-squared
- normal (the truth in KL computations)

It includes:
- pydantic parameter models that serialize to
  {family, p, nu, alpha0, alpha1, alpha2, xi, tau}
- array kernels (`student_t_logpdf`, `skew_t_log_weight`, ...) that broadcast
  over points *and* parameters, used by the risk engine
- Density classes; the weighted families compute cdf, quantile and mean from a
  cumulative table whose knots are quantiles of the base (t or normal)
  distribution, which compactifies the infinite domain

Squared Euclidean norms are used wherever the model writes a norm. Exact
evaluation is univariate; p > 1 parameter sets are accepted for sampling
through the oracle only.
"""

import json
import logging
from abc import ABC, abstractmethod
from enum import Enum
from functools import cached_property
from typing import Annotated, Any, Dict, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, field_validator, model_validator
from scipy import optimize, special

from src.exceptions import DomainError, InvalidParameterError, NumericIntegrityError, UnsupportedDimensionError
from src.utils.quadrature import adaptive_integral, gauss_legendre_panels
from src.utils.random_streams import substream

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-6
TAIL_MASS = 1e-12

# Knots of the cumulative table sit at base-distribution quantiles
# expit(s) for s on this grid, i.e. base tail mass down to ~1e-12.
_LOGIT_GRID = np.linspace(-27.6, 27.6, 553)


class Family(str, Enum):
    STUDENT_T = "student_t"
    SKEW_NORMAL = "skew_normal"
    SKEW_T = "skew_t"
    SKEW_T_TWO_SIDED = "skew_t_two_sided"
    SCALE_INV_CHISQ = "scale_inv_chisq"
    NORMAL = "normal"


# --- Parameter models ---

def _as_tuple(value: Any) -> Any:
    if isinstance(value, (int, float, np.floating, np.integer)):
        return (float(value),)
    if isinstance(value, np.ndarray):
        return tuple(float(v) for v in value.ravel())
    return value


class _LocationScale(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    p: int = Field(default=1, ge=1)
    xi: Tuple[float, ...] = (0.0,)
    tau: float = Field(default=1.0, gt=0)

    @field_validator("xi", mode="before")
    @classmethod
    def _coerce_xi(cls, value):
        return _as_tuple(value)

    @model_validator(mode="after")
    def _check_dimension(self):
        if len(self.xi) != self.p:
            raise ValueError(f"xi has length {len(self.xi)} but p={self.p}")
        alpha1 = getattr(self, "alpha1", None)
        if alpha1 is not None and len(alpha1) != self.p:
            raise ValueError(f"alpha1 has length {len(alpha1)} but p={self.p}")
        return self

    @property
    def location(self) -> float:
        """Scalar location; only meaningful when p == 1."""
        return self.xi[0]


class NormalParams(_LocationScale):
    """N(xi, tau^2 I)."""

    family: Literal["normal"] = "normal"


class StudentTParams(_LocationScale):
    """Location-scale Student t T_p(nu, xi, tau)."""

    family: Literal["student_t"] = "student_t"
    nu: float = Field(gt=0)


class SkewNormalParams(_LocationScale):
    """
    Extended skew-normal SN_p(alpha0, alpha1, xi, tau).

    With alpha2 set, the weight is Phi(alpha0 + alpha1 z) - Phi(alpha2 + alpha1 z)
    (the interval-restricted conditional posterior).
    """

    family: Literal["skew_normal"] = "skew_normal"
    alpha0: float = 0.0
    alpha1: Tuple[float, ...] = (0.0,)
    alpha2: Optional[float] = None

    @field_validator("alpha1", mode="before")
    @classmethod
    def _coerce_alpha1(cls, value):
        return _as_tuple(value)

    @model_validator(mode="after")
    def _check_band(self):
        if self.alpha2 is not None and not self.alpha0 > self.alpha2:
            raise ValueError("alpha0 must exceed alpha2")
        return self


class SkewTOneSidedParams(_LocationScale):
    """One-sided skew-Student t ST_p(nu, alpha0, alpha1, xi, tau)."""

    family: Literal["skew_t"] = "skew_t"
    nu: float = Field(gt=0)
    alpha0: float = 0.0
    alpha1: Tuple[float, ...] = (0.0,)

    @field_validator("alpha1", mode="before")
    @classmethod
    def _coerce_alpha1(cls, value):
        return _as_tuple(value)


class SkewTTwoSidedParams(SkewTOneSidedParams):
    """Two-sided skew-Student t ST_p(nu, alpha0, alpha1, alpha2, xi, tau)."""

    family: Literal["skew_t_two_sided"] = "skew_t_two_sided"
    alpha2: float

    @model_validator(mode="after")
    def _check_band(self):
        if not self.alpha0 > self.alpha2:
            raise ValueError("alpha0 must exceed alpha2 (the normalizing difference must be positive)")
        return self


class ScaleInvChiSqParams(BaseModel):
    """Scale inverse chi-squared SInv-chi2(nu, tau)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: Literal["scale_inv_chisq"] = "scale_inv_chisq"
    nu: float = Field(gt=0)
    tau: float = Field(gt=0)


DistributionParams = Annotated[
    Union[
        NormalParams,
        StudentTParams,
        SkewNormalParams,
        SkewTOneSidedParams,
        SkewTTwoSidedParams,
        ScaleInvChiSqParams,
    ],
    Field(discriminator="family"),
]

_params_adapter = TypeAdapter(DistributionParams)


def params_from_json(data: Union[str, Dict[str, Any]]):
    """
    Parse a parameter set from a JSON string or dict.

    Raises:
        InvalidParameterError: malformed JSON or invalid parameters
    """
    try:
        if isinstance(data, str):
            data = json.loads(data)
        clean = {key: value for key, value in data.items() if value is not None}
        return _params_adapter.validate_python(clean)
    except (ValidationError, json.JSONDecodeError, AttributeError) as e:
        raise InvalidParameterError(f"Invalid distribution parameters: {e}") from e


def params_to_json(params) -> Dict[str, Any]:
    """Serialize a parameter set; fields that do not apply are omitted."""
    return params.model_dump(mode="json", exclude_none=True)


# --- Array kernels ---

def student_t_logpdf(t, nu, xi, tau):
    """Log density of the univariate location-scale Student t (broadcasting)."""
    nu = np.asarray(nu, dtype=float)
    z = (np.asarray(t, dtype=float) - xi) / tau
    log_norm = special.gammaln((nu + 1.0) / 2.0) - special.gammaln(nu / 2.0) - 0.5 * np.log(np.pi * nu)
    return log_norm - np.log(tau) - (nu + 1.0) / 2.0 * np.log1p(z * z / nu)


def t_band(nu, lower, upper):
    """P(lower < T < upper) for T ~ t_nu, evaluated in the tail that keeps precision."""
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    right = lower > 0
    return np.where(
        right,
        special.stdtr(nu, -lower) - special.stdtr(nu, -upper),
        special.stdtr(nu, upper) - special.stdtr(nu, lower),
    )


def normal_band(lower, upper):
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    right = lower > 0
    return np.where(right, special.ndtr(-lower) - special.ndtr(-upper), special.ndtr(upper) - special.ndtr(lower))


def _safe_log(x):
    with np.errstate(divide="ignore"):
        return np.log(np.maximum(x, 0.0))


def skew_t_log_normalizer(nu, alpha0, alpha1, alpha2=None):
    """log F_nu(alpha0/s) or log[F_nu(alpha0/s) - F_nu(alpha2/s)], s = sqrt(1 + alpha1^2)."""
    s = np.sqrt(1.0 + np.square(alpha1))
    if alpha2 is None:
        return _safe_log(special.stdtr(nu, np.asarray(alpha0) / s))
    return _safe_log(t_band(nu, np.asarray(alpha2) / s, np.asarray(alpha0) / s))


def skew_t_log_weight(z, nu, alpha0, alpha1, alpha2=None):
    """
    Log of the skewing factor of the skew-t densities at standardized z.

    One-sided:  F_{nu+1}((a0 + a1 z) g(z)) / F_nu(a0 / s)
    Two-sided: [F_{nu+1}((a0 + a1 z) g) - F_{nu+1}((a2 + a1 z) g)] / [F_nu(a0/s) - F_nu(a2/s)]
    with g(z) = sqrt((nu + 1)/(nu + z^2)) and s = sqrt(1 + a1^2).
    All arguments broadcast.
    """
    z = np.asarray(z, dtype=float)
    nu = np.asarray(nu, dtype=float)
    g = np.sqrt((nu + 1.0) / (nu + z * z))
    upper = (alpha0 + alpha1 * z) * g
    if alpha2 is None:
        numerator = _safe_log(special.stdtr(nu + 1.0, upper))
    else:
        lower = (alpha2 + alpha1 * z) * g
        numerator = _safe_log(t_band(nu + 1.0, lower, upper))
    return numerator - skew_t_log_normalizer(nu, alpha0, alpha1, alpha2)


def skew_normal_log_weight(z, alpha0, alpha1, alpha2=None):
    """Log skewing factor of the extended skew-normal at standardized z."""
    z = np.asarray(z, dtype=float)
    s = np.sqrt(1.0 + np.square(alpha1))
    if alpha2 is None:
        return special.log_ndtr(alpha0 + alpha1 * z) - special.log_ndtr(np.asarray(alpha0) / s)
    numerator = _safe_log(normal_band(alpha2 + alpha1 * z, alpha0 + alpha1 * z))
    return numerator - _safe_log(normal_band(np.asarray(alpha2) / s, np.asarray(alpha0) / s))


# --- Density objects ---

def _scalar_out(value, like):
    value = np.asarray(value, dtype=float)
    return float(value) if np.ndim(like) == 0 else value


def _check_probability(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if not np.all((p > 0) & (p < 1)):
        raise DomainError("quantile requires 0 < p < 1")
    return p


class Density(ABC):
    """
    Univariate evaluatable distribution.

    Instances are immutable after construction; every method is pure.
    """

    support: Tuple[float, float] = (-np.inf, np.inf)

    def __init__(self, params):
        self.params = params

    @abstractmethod
    def logpdf(self, t):
        """Log density at t (scalar or array)."""

    def pdf(self, t):
        t_arr = np.asarray(t, dtype=float)
        return _scalar_out(np.exp(self.logpdf(t_arr)), t)

    @abstractmethod
    def cdf(self, t):
        """Cumulative distribution function at t."""

    @abstractmethod
    def quantile(self, p):
        """Inverse cdf, 0 < p < 1."""

    def _mean_exists(self) -> bool:
        return True

    def _breakpoints(self) -> np.ndarray:
        levels = np.array([TAIL_MASS, 1e-6, 1e-2, 0.25, 0.5, 0.75, 0.99, 1 - 1e-6, 1 - TAIL_MASS])
        return np.unique(np.asarray(self.quantile(levels), dtype=float))

    def _integrate_over_mass(self, func) -> float:
        edges = self._breakpoints()
        return sum(adaptive_integral(func, lo, hi) for lo, hi in zip(edges[:-1], edges[1:]))

    def mean(self) -> float:
        """
        Mean by quadrature over the range where both tails hold more than 1e-12.

        Raises:
            NumericIntegrityError: if the mean does not exist
        """
        if not self._mean_exists():
            raise NumericIntegrityError(f"Mean does not exist for {self.params.family} with these parameters")
        return self._integrate_over_mass(lambda t: t * float(np.exp(self.logpdf(t))))

    def normalization(self) -> float:
        """Integral of the pdf (should be 1)."""
        total = self._integrate_over_mass(lambda t: float(np.exp(self.logpdf(t))))
        return total + 2 * TAIL_MASS

    def sample(self, n: int, seed: int) -> np.ndarray:
        """
        Draw n values by inverse-cdf transform of the seeded uniform stream.

        The same (n, seed) always returns identical output.
        """
        if n < 1:
            raise DomainError("sample size must be at least 1")
        rng = substream(seed, "density-sample")
        u = (rng.integers(0, 2 ** 53, size=n).astype(float) + 0.5) / 2.0 ** 53
        return np.asarray(self.quantile(u), dtype=float)


class NormalDensity(Density):
    """N(xi, tau^2)."""

    def logpdf(self, t):
        z = (np.asarray(t, dtype=float) - self.params.location) / self.params.tau
        return _scalar_out(-0.5 * z * z - np.log(self.params.tau) - 0.5 * np.log(2 * np.pi), t)

    def cdf(self, t):
        z = (np.asarray(t, dtype=float) - self.params.location) / self.params.tau
        return _scalar_out(special.ndtr(z), t)

    def quantile(self, p):
        q = _check_probability(p)
        return _scalar_out(self.params.location + self.params.tau * special.ndtri(q), p)


class StudentTDensity(Density):
    """Location-scale Student t; closed-form cdf and quantile."""

    def logpdf(self, t):
        prm = self.params
        return _scalar_out(student_t_logpdf(t, prm.nu, prm.location, prm.tau), t)

    def cdf(self, t):
        z = (np.asarray(t, dtype=float) - self.params.location) / self.params.tau
        return _scalar_out(special.stdtr(self.params.nu, z), t)

    def quantile(self, p):
        q = _check_probability(p)
        return _scalar_out(self.params.location + self.params.tau * special.stdtrit(self.params.nu, q), p)

    def _mean_exists(self) -> bool:
        return self.params.nu > 1


class ScaleInvChiSqDensity(Density):
    """
    Scale inverse chi-squared on x > 0:
    (tau^2 nu/2)^(nu/2) / Gamma(nu/2) * x^-(1 + nu/2) * exp(-nu tau^2 / (2x)).
    """

    support = (0.0, np.inf)

    def logpdf(self, t):
        x = np.asarray(t, dtype=float)
        nu, tau = self.params.nu, self.params.tau
        scale = nu * tau * tau / 2.0
        with np.errstate(divide="ignore", invalid="ignore"):
            value = (nu / 2.0) * np.log(scale) - special.gammaln(nu / 2.0) - (1.0 + nu / 2.0) * np.log(x) - scale / x
        return _scalar_out(np.where(x > 0, value, -np.inf), t)

    def cdf(self, t):
        x = np.asarray(t, dtype=float)
        nu, tau = self.params.nu, self.params.tau
        with np.errstate(divide="ignore"):
            value = special.gammaincc(nu / 2.0, nu * tau * tau / (2.0 * np.where(x > 0, x, 1.0)))
        return _scalar_out(np.where(x > 0, value, 0.0), t)

    def quantile(self, p):
        q = _check_probability(p)
        nu, tau = self.params.nu, self.params.tau
        return _scalar_out(nu * tau * tau / (2.0 * special.gammainccinv(nu / 2.0, q)), p)

    def mode(self) -> float:
        return self.params.nu * self.params.tau ** 2 / (self.params.nu + 2.0)

    def _mean_exists(self) -> bool:
        return self.params.nu > 2


class _CumulativeTable:
    """Knots (standardized scale) and cumulative probabilities at the knots."""

    def __init__(self, knots: np.ndarray, cumulative: np.ndarray, total: float, first_moment: float):
        self.knots = knots
        self.cumulative = cumulative
        self.total = total
        self.first_moment = first_moment


class WeightedDensity(Density):
    """
    Density of the form base(z) * weight(z) / tau with z = (t - xi)/tau, where
    base is a standard t or normal density and weight is a bounded skewing
    factor.
    """

    @abstractmethod
    def _base_logpdf(self, z):
        """Standardized base log density."""

    @abstractmethod
    def _base_quantile(self, u):
        """Standardized base quantile."""

    @abstractmethod
    def _log_weight(self, z):
        """Log skewing factor."""

    def _std_pdf(self, z):
        return np.exp(self._base_logpdf(z) + self._log_weight(z))

    def _std_pdf_scalar(self, z: float) -> float:
        return float(self._std_pdf(np.asarray(z, dtype=float)))

    def logpdf(self, t):
        z = (np.asarray(t, dtype=float) - self.params.location) / self.params.tau
        return _scalar_out(self._base_logpdf(z) + self._log_weight(z) - np.log(self.params.tau), t)

    @cached_property
    def _table(self) -> _CumulativeTable:
        knots = np.asarray(self._base_quantile(special.expit(_LOGIT_GRID)), dtype=float)
        knots = np.unique(knots[np.isfinite(knots)])
        increments = gauss_legendre_panels(self._std_pdf, knots[:-1], knots[1:])
        moments = gauss_legendre_panels(lambda z: z * self._std_pdf(z), knots[:-1], knots[1:])
        left = adaptive_integral(self._std_pdf_scalar, -np.inf, knots[0], abs_tol=1e-14)
        right = adaptive_integral(self._std_pdf_scalar, knots[-1], np.inf, abs_tol=1e-14)
        cumulative = left + np.concatenate([[0.0], np.cumsum(increments)])
        total = float(cumulative[-1] + right)
        if not np.isfinite(total) or abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise NumericIntegrityError(
                f"{self.params.family} density integrates to {total}, not 1 (tolerance {NORMALIZATION_TOLERANCE})"
            )
        logger.debug(f"Built cumulative table for {self.params.family}: {len(knots)} knots, total {total}")
        return _CumulativeTable(knots, cumulative / total, total, float(np.sum(moments)) / total)

    def normalization(self) -> float:
        return self._table.total

    def _std_cdf(self, z: np.ndarray) -> np.ndarray:
        table = self._table
        knots, cumulative = table.knots, table.cumulative
        z = np.asarray(z, dtype=float).ravel()
        out = np.empty_like(z)
        inside = (z >= knots[0]) & (z <= knots[-1])
        if inside.any():
            zi = z[inside]
            j = np.clip(np.searchsorted(knots, zi, side="right") - 1, 0, len(knots) - 2)
            out[inside] = cumulative[j] + gauss_legendre_panels(self._std_pdf, knots[j], zi) / table.total
        for idx in np.flatnonzero(~inside):
            value = z[idx]
            if np.isnan(value):
                raise DomainError("cdf received NaN")
            if value < knots[0]:
                out[idx] = adaptive_integral(self._std_pdf_scalar, -np.inf, value, abs_tol=1e-15) / table.total
            else:
                out[idx] = 1.0 - adaptive_integral(self._std_pdf_scalar, value, np.inf, abs_tol=1e-15) / table.total
        return np.clip(out, 0.0, 1.0)

    def cdf(self, t):
        z = (np.asarray(t, dtype=float) - self.params.location) / self.params.tau
        return _scalar_out(self._std_cdf(z).reshape(np.shape(z)), t)

    def _tail_quantile(self, target: float) -> float:
        knots = self._table.knots
        width = knots[-1] - knots[0]
        if target < self._table.cumulative[0]:
            lo, hi = knots[0] - width, knots[0]
            while self._std_cdf(np.array([lo]))[0] > target:
                lo -= 2 * (hi - lo)
        else:
            lo, hi = knots[-1], knots[-1] + width
            while self._std_cdf(np.array([hi]))[0] < target:
                hi += 2 * (hi - lo)
        return optimize.brentq(lambda z: self._std_cdf(np.array([z]))[0] - target, lo, hi, xtol=1e-14)

    def _std_quantile(self, p: np.ndarray) -> np.ndarray:
        table = self._table
        knots, cumulative = table.knots, table.cumulative
        p = np.asarray(p, dtype=float).ravel()
        out = np.empty_like(p)
        inside = (p >= cumulative[0]) & (p <= cumulative[-1])
        if inside.any():
            target = p[inside]
            j = np.clip(np.searchsorted(cumulative, target, side="right") - 1, 0, len(knots) - 2)
            a, b = knots[j].copy(), knots[j + 1].copy()
            fa, fb = cumulative[j], cumulative[j + 1]
            z = a + (target - fa) * (b - a) / np.maximum(fb - fa, 1e-300)
            # Newton steps safeguarded by bisection inside the shrinking bracket
            for _ in range(80):
                f = self._std_cdf(z) - target
                converged = (np.abs(f) <= 1e-14) | (b - a <= 1e-13 * (1.0 + np.abs(z)))
                if converged.all():
                    break
                a = np.where(f < 0, z, a)
                b = np.where(f > 0, z, b)
                with np.errstate(divide="ignore", invalid="ignore"):
                    step = z - f / self._std_pdf(z)
                bisect = ~np.isfinite(step) | (step <= a) | (step >= b)
                z = np.where(converged, z, np.where(bisect, 0.5 * (a + b), step))
            out[inside] = z
        for idx in np.flatnonzero(~inside):
            out[idx] = self._tail_quantile(p[idx])
        return out

    def quantile(self, p):
        q = _check_probability(p)
        z = self._std_quantile(q).reshape(np.shape(q))
        return _scalar_out(self.params.location + self.params.tau * z, p)

    def mean(self) -> float:
        if not self._mean_exists():
            raise NumericIntegrityError(f"Mean does not exist for {self.params.family} with these parameters")
        return self.params.location + self.params.tau * self._table.first_moment


class SkewNormalDensity(WeightedDensity):
    """Extended skew-normal (p = 1)."""

    def _base_logpdf(self, z):
        return -0.5 * np.square(z) - 0.5 * np.log(2 * np.pi)

    def _base_quantile(self, u):
        return special.ndtri(u)

    def _log_weight(self, z):
        prm = self.params
        return skew_normal_log_weight(z, prm.alpha0, prm.alpha1[0], prm.alpha2)


class SkewTDensity(WeightedDensity):
    """One- or two-sided skew-Student t (p = 1)."""

    def _base_logpdf(self, z):
        return student_t_logpdf(z, self.params.nu, 0.0, 1.0)

    def _base_quantile(self, u):
        return special.stdtrit(self.params.nu, u)

    def _log_weight(self, z):
        prm = self.params
        return skew_t_log_weight(z, prm.nu, prm.alpha0, prm.alpha1[0], getattr(prm, "alpha2", None))

    def _mean_exists(self) -> bool:
        return self.params.nu > 1


_DENSITY_CLASSES = {
    "normal": NormalDensity,
    "student_t": StudentTDensity,
    "skew_normal": SkewNormalDensity,
    "skew_t": SkewTDensity,
    "skew_t_two_sided": SkewTDensity,
    "scale_inv_chisq": ScaleInvChiSqDensity,
}


def make_density(params) -> Density:
    """
    Build the Density object for a parameter set.

    Raises:
        UnsupportedDimensionError: if p > 1
    """
    if getattr(params, "p", 1) != 1:
        raise UnsupportedDimensionError(
            f"Exact evaluation of {params.family} is available for p=1 only (got p={params.p}); "
            "use the sampling oracle for p > 1"
        )
    return _DENSITY_CLASSES[params.family](params)


# --- Operations ---

def _point(params, t) -> np.ndarray:
    point = np.atleast_1d(np.asarray(t, dtype=float))
    if point.shape[-1] != params.p:
        raise InvalidParameterError(f"Point has dimension {point.shape[-1]} but p={params.p}")
    return point


def student_t_pdf(params: StudentTParams, t) -> float:
    """
    Density of T_p(nu, xi, tau) at a point of dimension p:
    tau^-p Gamma((nu+p)/2) / (Gamma(nu/2) (pi nu)^(p/2)) (1 + |t-xi|^2/(nu tau^2))^(-(nu+p)/2).
    """
    point = _point(params, t)
    p, nu, tau = params.p, params.nu, params.tau
    squared = float(np.sum(np.square(point - np.asarray(params.xi))))
    log_value = (
        special.gammaln((nu + p) / 2.0)
        - special.gammaln(nu / 2.0)
        - (p / 2.0) * np.log(np.pi * nu)
        - p * np.log(tau)
        - (nu + p) / 2.0 * np.log1p(squared / (nu * tau * tau))
    )
    return float(np.exp(log_value))


def skew_t_one_sided_pdf(params: SkewTOneSidedParams, t: float) -> float:
    """One-sided skew-t density over t (includes the 1/tau Jacobian)."""
    _point(params, t)
    return make_density(params).pdf(float(np.asarray(t, dtype=float).ravel()[0]))


def skew_t_two_sided_pdf(params: SkewTTwoSidedParams, t: float) -> float:
    """Two-sided skew-t density over t."""
    _point(params, t)
    return make_density(params).pdf(float(np.asarray(t, dtype=float).ravel()[0]))


def skew_normal_pdf(params: SkewNormalParams, t: float) -> float:
    """Extended skew-normal density over t; normalizer Phi(alpha0 / sqrt(1 + alpha1^2))."""
    _point(params, t)
    return make_density(params).pdf(float(np.asarray(t, dtype=float).ravel()[0]))


def scale_inv_chisq_pdf(params: ScaleInvChiSqParams, x: float) -> float:
    """
    Scale inverse chi-squared density at x > 0.

    Raises:
        DomainError: if x <= 0
    """
    if not x > 0:
        raise DomainError("scale inverse chi-squared density requires x > 0")
    return float(ScaleInvChiSqDensity(params).pdf(x))


def density_cdf(d: Density, t):
    return d.cdf(t)


def density_quantile(d: Density, p):
    return d.quantile(p)


def density_mean(d: Density) -> float:
    return d.mean()


def density_sample(d: Density, n: int, seed: int) -> np.ndarray:
    return d.sample(n, seed)


def skew_t_mean_closed_form(params) -> float:
    """
    Mean of a skew-t or skew-normal from its conditioning representation:
    E[Z] = delta * E[X0 | -c0 < X0 < -c2] with delta = a1/sqrt(1+a1^2),
    c = a/sqrt(1+a1^2). Requires nu > 1 for the t families.
    """
    if params.p != 1:
        raise UnsupportedDimensionError("closed-form mean is available for p=1 only")
    alpha1 = params.alpha1[0]
    s = np.sqrt(1.0 + alpha1 * alpha1)
    delta = alpha1 / s
    c0 = params.alpha0 / s
    alpha2 = getattr(params, "alpha2", None)
    if params.family == "skew_normal":
        partial = lambda c: float(np.exp(-0.5 * c * c) / np.sqrt(2 * np.pi))
        mass = lambda c: float(special.ndtr(c))
    else:
        nu = params.nu
        if nu <= 1:
            raise NumericIntegrityError("Mean does not exist for nu <= 1")
        partial = lambda c: float((nu + c * c) / (nu - 1.0) * np.exp(student_t_logpdf(c, nu, 0.0, 1.0)))
        mass = lambda c: float(special.stdtr(nu, c))
    if alpha2 is None:
        conditional = partial(c0) / mass(c0)
    else:
        c2 = alpha2 / s
        conditional = (partial(c0) - partial(c2)) / (mass(c0) - mass(c2))
    return params.location + params.tau * delta * conditional
