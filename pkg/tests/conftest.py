"""
Shared fixtures for the test suite.
"""

import os
import sys

import pytest

# Add the project root to the path to import the modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.data_io import ingest_raw, summary_from_flags
from src.posterior import TwoSampleSummary
from src.reproduce import DEFAULT_DATA_PATH


@pytest.fixture
def body_mass_summary() -> TwoSampleSummary:
    """Body-mass summary: n1=429, mean 31, sd 5.7; group-2 mean 30.4."""
    return summary_from_flags("31,30.4,5.7,429")


@pytest.fixture
def walking_summary() -> TwoSampleSummary:
    """Summary of the child walking ages in data/child_walking.csv."""
    return ingest_raw(DEFAULT_DATA_PATH)


@pytest.fixture
def unit_summary() -> TwoSampleSummary:
    """x1 - x2 = 1, s^2 = 1, k = 3."""
    return TwoSampleSummary.from_values(1.0, 0.0, 1.0, 3)


@pytest.fixture
def tied_summary() -> TwoSampleSummary:
    """x1 = x2, s^2 = 2, k = 4."""
    return TwoSampleSummary.from_values(0.5, 0.5, 2.0, 4)
