"""
Quadrature helpers.

- `adaptive_integral`: scipy's QUADPACK with failures turned into
  NumericIntegrityError instead of warnings.
- `gauss_legendre_panels`: fixed-order Gauss-Legendre over many intervals at
  once (vectorized over interval endpoints).
- `normal_expectation_nodes`: probabilists' Gauss-Hermite nodes/weights for
  expectations under N(mu, sigma^2).
"""

import logging
import warnings
from functools import lru_cache
from typing import Callable, Sequence, Optional, Tuple

import numpy as np
from scipy import integrate
from numpy.polynomial.hermite_e import hermegauss
from numpy.polynomial.legendre import leggauss

from src.exceptions import NumericIntegrityError

logger = logging.getLogger(__name__)


def adaptive_integral(
    func: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-10,
    points: Optional[Sequence[float]] = None,
    limit: int = 400,
) -> float:
    """
    Integrate `func` over [a, b] (infinite bounds allowed) with QUADPACK.

    Raises:
        NumericIntegrityError: if the integrator reports non-convergence or
            returns a non-finite value
    """
    kwargs = {"epsabs": abs_tol, "epsrel": rel_tol, "limit": limit}
    if points is not None and np.isfinite(a) and np.isfinite(b):
        inside = [p for p in points if a < p < b]
        if inside:
            kwargs["points"] = inside
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, error = integrate.quad(func, a, b, **kwargs)
        except integrate.IntegrationWarning as e:
            raise NumericIntegrityError(f"Quadrature did not converge on [{a}, {b}]: {e}") from e
    if not np.isfinite(value):
        raise NumericIntegrityError(f"Quadrature produced a non-finite value on [{a}, {b}]")
    logger.debug(f"adaptive_integral on [{a}, {b}] = {value} (err {error})")
    return float(value)


@lru_cache(maxsize=8)
def _legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    return nodes, weights


def gauss_legendre_panels(
    func: Callable[[np.ndarray], np.ndarray],
    lower: np.ndarray,
    upper: np.ndarray,
    order: int = 16,
) -> np.ndarray:
    """
    Integrate a vectorized function over each interval [lower[i], upper[i]].

    Args:
        func: Function accepting an array of points (any shape)
        lower: Lower endpoints
        upper: Upper endpoints, same shape as lower
        order: Number of Gauss-Legendre nodes per interval

    Returns:
        Array of integrals, one per interval
    """
    nodes, weights = _legendre(order)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    half = 0.5 * (upper - lower)
    mid = 0.5 * (upper + lower)
    points = mid[..., None] + half[..., None] * nodes
    values = func(points)
    return half * np.sum(values * weights, axis=-1)


@lru_cache(maxsize=8)
def normal_expectation_nodes(order: int = 96) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes g_i and weights w_i with sum(w_i f(g_i)) ~ E[f(G)], G ~ N(0, 1).
    """
    nodes, weights = hermegauss(order)
    return nodes, weights / np.sqrt(2.0 * np.pi)
