"""
Special Functions Module

Scalar special functions used by every density in the library:

- log-gamma
- regularized incomplete beta
- standard Student t cdf / quantile
- standard normal pdf / cdf

The numerical work is done by scipy.special (Cephes): `betainc` evaluates the
continued fraction with the usual symmetry switch at x > a/(a+b), `stdtr` goes
through the incomplete beta, and `stdtrit` inverts it. This module adds the
domain checks, so out-of-domain inputs raise DomainError instead of quietly
producing NaN.

All functions accept scalars or numpy arrays and return a float for scalar
input.
"""

import logging
from typing import Union

import numpy as np
from scipy import special

from src.exceptions import DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def _out(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def _require(condition, message: str) -> None:
    if not np.all(condition):
        raise DomainError(message)


def log_gamma(x: ArrayLike) -> ArrayLike:
    """
    Natural log of the gamma function for x > 0.

    Raises:
        DomainError: if any x <= 0 or is not finite
    """
    x = np.asarray(x, dtype=float)
    _require(np.isfinite(x) & (x > 0), "log_gamma requires x > 0")
    return _out(special.gammaln(x))


def regularized_incomplete_beta(a: ArrayLike, b: ArrayLike, x: ArrayLike) -> ArrayLike:
    """
    Regularized incomplete beta function I_x(a, b).

    Args:
        a: Positive shape
        b: Positive shape
        x: Point in [0, 1]

    Returns:
        Probability in [0, 1]
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    _require((a > 0) & np.isfinite(a), "incomplete beta requires a > 0")
    _require((b > 0) & np.isfinite(b), "incomplete beta requires b > 0")
    _require((x >= 0) & (x <= 1), "incomplete beta requires 0 <= x <= 1")
    return _out(special.betainc(a, b, x))


def student_t_cdf(nu: ArrayLike, t: ArrayLike) -> ArrayLike:
    """
    Cdf of the standard Student t distribution with `nu` degrees of freedom.
    """
    nu = np.asarray(nu, dtype=float)
    t = np.asarray(t, dtype=float)
    _require(nu > 0, "student_t_cdf requires nu > 0")
    _require(~np.isnan(t), "student_t_cdf received NaN")
    return _out(special.stdtr(nu, t))


def student_t_quantile(nu: ArrayLike, p: ArrayLike) -> ArrayLike:
    """
    Quantile of the standard Student t distribution.

    Raises:
        DomainError: if nu <= 0 or p is not strictly inside (0, 1)
    """
    nu = np.asarray(nu, dtype=float)
    p = np.asarray(p, dtype=float)
    _require(nu > 0, "student_t_quantile requires nu > 0")
    _require((p > 0) & (p < 1), "student_t_quantile requires 0 < p < 1")
    return _out(special.stdtrit(nu, p))


def student_t_pdf(nu: ArrayLike, t: ArrayLike) -> ArrayLike:
    """Density of the standard Student t distribution."""
    nu = np.asarray(nu, dtype=float)
    t = np.asarray(t, dtype=float)
    _require(nu > 0, "student_t_pdf requires nu > 0")
    log_norm = special.gammaln((nu + 1.0) / 2.0) - special.gammaln(nu / 2.0) - 0.5 * np.log(np.pi * nu)
    return _out(np.exp(log_norm - (nu + 1.0) / 2.0 * np.log1p(t * t / nu)))


def normal_cdf(z: ArrayLike) -> ArrayLike:
    """Standard normal cdf."""
    z = np.asarray(z, dtype=float)
    _require(~np.isnan(z), "normal_cdf received NaN")
    return _out(special.ndtr(z))


def normal_pdf(z: ArrayLike) -> ArrayLike:
    """Standard normal density."""
    z = np.asarray(z, dtype=float)
    _require(~np.isnan(z), "normal_pdf received NaN")
    return _out(_INV_SQRT_2PI * np.exp(-0.5 * z * z))


def normal_quantile(p: ArrayLike) -> ArrayLike:
    """Standard normal quantile, 0 < p < 1."""
    p = np.asarray(p, dtype=float)
    _require((p > 0) & (p < 1), "normal_quantile requires 0 < p < 1")
    return _out(special.ndtri(p))
