"""
Exception hierarchy for the skew-t predictive library.

Every error carries the process exit code the CLI uses when it surfaces:
1 for validation problems, 2 for numeric-integrity problems and 3 when a
reproduction check fails.
"""


class SkewTPredictiveError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class DomainError(SkewTPredictiveError, ValueError):
    """An argument lies outside the domain of a function."""


class InvalidParameterError(SkewTPredictiveError, ValueError):
    """A distribution parameter set violates its invariants."""


class UnsupportedDimensionError(SkewTPredictiveError, ValueError):
    """Exact evaluation was requested for a dimension other than p=1."""


class InvalidSummaryError(SkewTPredictiveError, ValueError):
    """A two-sample summary is unusable (s2 <= 0, k < 2, ...)."""


class InvalidRestrictionError(SkewTPredictiveError, ValueError):
    """A restriction set is malformed (for example m <= 0)."""


class InvalidScenarioError(SkewTPredictiveError, ValueError):
    """A risk scenario violates the restriction or its own invariants."""


class DataValidationError(SkewTPredictiveError, ValueError):
    """Raw input data could not be parsed into a summary."""


class NumericIntegrityError(SkewTPredictiveError, ArithmeticError):
    """Quadrature failed, a density did not normalize, or a moment is undefined."""

    exit_code = 2


class InfeasibleSamplingError(NumericIntegrityError):
    """The rejection sampler accepts too few draws to be usable."""


class ReproductionError(SkewTPredictiveError):
    """One or more reproduction acceptance checks failed."""

    exit_code = 3

    def __init__(self, message: str, failures=None):
        super().__init__(message)
        self.failures = list(failures or [])
