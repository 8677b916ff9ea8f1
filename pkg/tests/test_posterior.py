"""
Tests for the two-sample summary, restriction sets and the posterior
quantities of theta1 and eta.
"""

import numpy as np
import pytest
from scipy import integrate, special, stats

from src.distributions import skew_normal_log_weight
from src.exceptions import DomainError, InvalidRestrictionError, InvalidSummaryError, UnsupportedDimensionError
from src.posterior import (
    AlphaConvention,
    ModelPoint,
    RestrictionSet,
    TwoSampleSummary,
    check_azzalini_identity,
    conditional_theta1_given_eta,
    eta_posterior_pdf,
    integrate_over_eta,
    log_joint_density,
    marginal_posterior_theta1_normalizer,
    marginal_posterior_theta1_unnorm,
)


# --- Summary and restriction ---

@pytest.mark.parametrize("s2, k", [(-1.0, 3), (0.0, 3), (1.0, 1)])
def test_summary_rejects_invalid_values(s2, k):
    """Test that a non-positive s^2 or k is rejected."""
    with pytest.raises(InvalidSummaryError):
        TwoSampleSummary.from_values(1.0, 0.0, s2, k)


def test_summary_rejects_mismatched_dimensions():
    """Test that group means of different length are rejected."""
    with pytest.raises(InvalidSummaryError):
        TwoSampleSummary.from_values([1.0, 2.0], [0.0], 1.0, 3)


def test_summary_properties(unit_summary):
    """Test the derived difference and predictive scale of a summary."""
    assert unit_summary.difference == 1.0
    assert unit_summary.tau == pytest.approx(np.sqrt(2.0 / 3.0))


def test_multivariate_summary_is_not_univariate():
    """Test that p = 2 summaries fail the univariate requirement."""
    summary = TwoSampleSummary.from_values([1.0, 2.0], [0.0, 0.0], 1.0, 3)
    assert summary.p == 2
    with pytest.raises(UnsupportedDimensionError):
        marginal_posterior_theta1_unnorm(0.0, summary, RestrictionSet.positive())


def test_restriction_membership():
    """Test membership in the positive, interval and unrestricted sets."""
    positive = RestrictionSet.positive()
    interval = RestrictionSet.interval(2.0)
    assert positive.contains(0.0)
    assert not positive.contains(-1e-9)
    assert interval.contains(-2.0) and interval.contains(2.0)
    assert not interval.contains(2.5)
    assert RestrictionSet.unrestricted().contains(-100.0)
    coordinates = np.array([[1.0, 2.0], [1.0, -0.5]])
    assert positive.contains(coordinates).tolist() == [True, False]


@pytest.mark.parametrize("m", [0.0, -1.0])
def test_interval_requires_positive_m(m):
    """Test that interval restrictions need a positive finite m."""
    with pytest.raises(InvalidRestrictionError):
        RestrictionSet.interval(m)


# --- Joint density ---

def test_log_joint_density_is_location_invariant():
    """Test that shifting data and parameters together leaves the joint unchanged."""
    point = ModelPoint(theta1=0.3, theta2=-0.2, sigma2=1.7)
    moved = ModelPoint(theta1=5.3, theta2=4.8, sigma2=1.7)
    assert log_joint_density(point, 1.0, 0.5, 2.0, 4) == pytest.approx(log_joint_density(moved, 6.0, 5.5, 2.0, 4), abs=1e-12)


def test_log_joint_density_requires_positive_s2():
    """Test that a zero s^2 raises DomainError."""
    with pytest.raises(DomainError):
        log_joint_density(ModelPoint(theta1=0.0, theta2=0.0, sigma2=1.0), 0.0, 0.0, 0.0, 3)


def test_sigma_integrated_joint_has_product_form():
    """Integrating sigma^2 out of the joint (prior 1/sigma^2) leaves
    (1 + a/s^2)^-(p+k/2) (1 + b/(s^2 + a))^-(p+k/2) up to a constant."""
    x1, x2, s2, k = 0.4, -0.1, 1.3, 3
    ratios = []
    for theta1 in np.linspace(-1, 1, 5):
        for theta2 in np.linspace(-1, 1, 5):

            def integrand(sigma2):
                point = ModelPoint(theta1=theta1, theta2=theta2, sigma2=sigma2)
                return np.exp(log_joint_density(point, x1, x2, s2, k)) / sigma2

            integrated = integrate.quad(integrand, 0, np.inf, epsabs=0, epsrel=1e-12, limit=200)[0]
            a, b = (x1 - theta1) ** 2, (x2 - theta2) ** 2
            power = -(1 + k / 2)
            product = (1 + a / s2) ** power * (1 + b / (s2 + a)) ** power
            ratios.append(integrated / product)
    ratios = np.array(ratios)
    assert np.ptp(ratios) / ratios.mean() < 1e-6


# --- Marginal posterior of theta1 ---

def test_marginal_at_tied_means(tied_summary):
    """Test the theta1 marginal when the observed means are equal."""
    positive = RestrictionSet.positive()
    x1, s2, k = tied_summary.x1[0], tied_summary.s2, tied_summary.k
    base = stats.t.pdf(x1, k, loc=x1, scale=np.sqrt(s2 / k))
    assert marginal_posterior_theta1_unnorm(x1, tied_summary, positive) == pytest.approx(0.5 * base, rel=1e-12)
    unrestricted = marginal_posterior_theta1_unnorm(x1 + 0.3, tied_summary, RestrictionSet.unrestricted())
    assert unrestricted == pytest.approx(stats.t.pdf(x1 + 0.3, k, loc=x1, scale=np.sqrt(s2 / k)), rel=1e-12)


def test_marginal_normalizer_is_restriction_probability(unit_summary, tied_summary):
    """Test that the marginal normalizer equals the posterior probability of A."""
    positive = RestrictionSet.positive()
    assert marginal_posterior_theta1_normalizer(tied_summary, positive) == pytest.approx(0.5, abs=1e-8)
    expected = special.stdtr(unit_summary.k, unit_summary.difference / unit_summary.tau)
    assert marginal_posterior_theta1_normalizer(unit_summary, positive) == pytest.approx(expected, abs=1e-8)
    interval = RestrictionSet.interval(2.0)
    d, tau, k = unit_summary.difference, unit_summary.tau, unit_summary.k
    expected = special.stdtr(k, (d + 2.0) / tau) - special.stdtr(k, (d - 2.0) / tau)
    assert marginal_posterior_theta1_normalizer(unit_summary, interval) == pytest.approx(expected, abs=1e-8)


def test_marginal_is_vectorized(unit_summary):
    """Test that the marginal accepts an array of theta1 values."""
    theta = np.linspace(-2, 3, 7)
    values = marginal_posterior_theta1_unnorm(theta, unit_summary, RestrictionSet.positive())
    assert values.shape == (7,)
    assert values[3] == pytest.approx(marginal_posterior_theta1_unnorm(float(theta[3]), unit_summary, RestrictionSet.positive()))


# --- Posterior of eta ---

def test_eta_posterior_at_tied_means_is_gamma(tied_summary):
    """Test that the eta posterior is a Gamma density at tied means."""
    eta = np.linspace(0.05, 4, 9)
    reference = stats.gamma.pdf(eta, a=tied_summary.k / 2, scale=2.0 / tied_summary.s2)
    assert np.allclose(eta_posterior_pdf(eta, tied_summary, RestrictionSet.positive()), reference, rtol=1e-12)


def test_eta_posterior_integrates_to_one(unit_summary):
    """Test eta-posterior normalization for each restriction kind."""
    for restriction in (RestrictionSet.positive(), RestrictionSet.interval(0.5), RestrictionSet.unrestricted()):
        total = integrate_over_eta(lambda eta: eta_posterior_pdf(eta, unit_summary, restriction), unit_summary)
        assert total == pytest.approx(1.0, abs=1e-6)


def test_eta_posterior_integrates_to_one_over_random_summaries():
    """Test eta-posterior normalization for randomized summaries under both restriction kinds."""
    rng = np.random.default_rng(31)
    for _ in range(6):
        summary = TwoSampleSummary.from_values(
            float(rng.uniform(-2.0, 2.0)), 0.0, float(rng.uniform(0.25, 4.0)), int(rng.choice([3, 5, 20]))
        )
        for restriction in (RestrictionSet.positive(), RestrictionSet.interval(float(rng.choice([0.5, 2.0, 6.0])))):
            total = integrate_over_eta(lambda eta: eta_posterior_pdf(eta, summary, restriction), summary)
            assert total == pytest.approx(1.0, abs=1e-6)


def test_wide_interval_eta_posterior_is_gamma(unit_summary):
    """Test that a very wide interval gives the unrestricted Gamma posterior."""
    eta = np.array([0.2, 1.0, 3.0])
    reference = stats.gamma.pdf(eta, a=unit_summary.k / 2, scale=2.0 / unit_summary.s2)
    wide = eta_posterior_pdf(eta, unit_summary, RestrictionSet.interval(1e6))
    assert np.allclose(wide, reference, rtol=1e-9)


@pytest.mark.parametrize("eta", [0.0, -1.0])
def test_eta_posterior_requires_positive_eta(unit_summary, eta):
    """Test that non-positive eta raises DomainError."""
    with pytest.raises(DomainError):
        eta_posterior_pdf(eta, unit_summary, RestrictionSet.positive())


# --- Conditional posterior of theta1 given eta ---

def test_conditional_parameters(unit_summary, tied_summary):
    """Test the skew-normal parameters of theta1 given eta."""
    exact = conditional_theta1_given_eta(4.0, unit_summary, RestrictionSet.positive())
    assert exact.alpha0 == pytest.approx(2.0)
    assert exact.alpha1 == (1.0,)
    assert exact.tau == pytest.approx(0.5)
    assert exact.xi == unit_summary.x1
    printed = conditional_theta1_given_eta(4.0, unit_summary, RestrictionSet.positive(), AlphaConvention.PRINTED)
    assert printed.alpha0 == pytest.approx(np.sqrt(2.0))
    assert conditional_theta1_given_eta(4.0, tied_summary, RestrictionSet.positive()).alpha0 == 0.0
    band = conditional_theta1_given_eta(1.0, unit_summary, RestrictionSet.interval(2.0))
    assert (band.alpha0, band.alpha2) == (pytest.approx(3.0), pytest.approx(-1.0))


def test_conditional_requires_positive_eta(unit_summary):
    """Test that the conditional rejects eta = 0."""
    with pytest.raises(DomainError):
        conditional_theta1_given_eta(0.0, unit_summary, RestrictionSet.positive())


def test_conditional_mixes_to_the_marginal(unit_summary):
    """Mixing the skew-normal conditional over the eta posterior recovers
    the normalized marginal posterior of theta1."""
    for restriction in (RestrictionSet.positive(), RestrictionSet.interval(1.5)):
        normalizer = marginal_posterior_theta1_normalizer(unit_summary, restriction)
        x1, scale = unit_summary.x1[0], np.sqrt(unit_summary.s2 / unit_summary.k)
        for theta in x1 + scale * np.linspace(-3, 3, 7):

            def integrand(eta):
                params = conditional_theta1_given_eta(eta, unit_summary, restriction)
                z = (theta - params.xi[0]) / params.tau
                log_value = (
                    -0.5 * z * z
                    - 0.5 * np.log(2 * np.pi)
                    - np.log(params.tau)
                    + skew_normal_log_weight(z, params.alpha0, params.alpha1[0], params.alpha2)
                )
                return float(np.exp(log_value) * eta_posterior_pdf(eta, unit_summary, restriction))

            mixed = integrate_over_eta(integrand, unit_summary)
            target = marginal_posterior_theta1_unnorm(theta, unit_summary, restriction) / normalizer
            assert mixed == pytest.approx(target, rel=1e-6)


# --- Gamma-mixture identity ---

@pytest.mark.parametrize(
    "a, b, c", [(1.5, 1.0, 1.0), (0.5, 2.0, 0.3), (3.0, 0.5, 0.8), (10.0, 4.0, 2.0), (214.0, 1.0, 0.05)]
)
def test_identity_holds_by_monte_carlo(a, b, c):
    """Test E[Phi(c sqrt(eta))] against the Student t closed form for several Gamma mixtures."""
    report = check_azzalini_identity(a, b, c, n_mc=100_000, seed=3)
    assert report.analytic == pytest.approx(special.stdtr(2.0 * a, c * np.sqrt(a / b)))
    assert abs(report.mc_estimate - report.analytic) <= 4.0 * report.mc_se


def test_identity_limits():
    """Test the Gamma-mixture identity at very small and very large c."""
    small = check_azzalini_identity(2.0, 1.0, 1e-8, n_mc=1000, seed=1)
    assert small.analytic == pytest.approx(0.5, abs=1e-7)
    large = check_azzalini_identity(2.0, 1.0, 50.0, n_mc=1000, seed=1)
    assert large.analytic > 1 - 1e-4


def test_identity_rejects_bad_arguments():
    """Test that non-positive Gamma parameters are rejected."""
    with pytest.raises(DomainError):
        check_azzalini_identity(-1.0, 1.0, 1.0, n_mc=100, seed=0)
