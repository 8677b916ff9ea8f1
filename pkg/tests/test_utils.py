"""
Tests for configuration, grid parsing, number formatting, random substreams
and quadrature helpers.
"""

import numpy as np
import pytest

from src.config import get_settings
from src.exceptions import InvalidParameterError, NumericIntegrityError
from src.utils.common_utils import format_number, parse_deltas
from src.utils.quadrature import adaptive_integral, gauss_legendre_panels, normal_expectation_nodes
from src.utils.random_streams import chunk_sizes, substream


def test_parse_deltas_range_is_inclusive():
    """Test that a start:stop:step grid includes both endpoints."""
    assert parse_deltas("0:5:0.5") == [i * 0.5 for i in range(11)]
    assert parse_deltas("-6:6:0.5")[0] == -6.0
    assert parse_deltas("-6:6:0.5")[-1] == 6.0
    assert len(parse_deltas("-6:6:0.5")) == 25


def test_parse_deltas_list():
    """Test parsing a comma-separated list of deltas."""
    assert parse_deltas("0, 1.5,3") == [0.0, 1.5, 3.0]


@pytest.mark.parametrize("spec", ["", "a,b", "0:5:0", "5:0:1", "0:1"])
def test_parse_deltas_rejects_bad_specs(spec):
    """Test that malformed grids raise InvalidParameterError."""
    with pytest.raises(InvalidParameterError):
        parse_deltas(spec)


def test_format_number():
    """Test rounded and full-precision number formatting."""
    assert format_number(0.123456789) == "0.123457"
    assert format_number(31.0) == "31"
    assert format_number(0.1, full_precision=True) == "0.1"
    assert float(format_number(1 / 3, full_precision=True)) == 1 / 3


def test_settings_defaults(monkeypatch):
    """Test the settings defaults with no environment overrides."""
    for name in ("SKEWT_SEED", "SKEWT_NMC", "SKEWT_WORKERS", "SKEWT_PROGRESS"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    try:
        settings = get_settings()
        assert settings.seed == 20240601
        assert settings.n_mc == 100_000
        assert settings.workers == 1
        assert settings.progress is True
    finally:
        get_settings.cache_clear()


def test_settings_from_environment(monkeypatch):
    """Test that SKEWT_ environment variables override the defaults."""
    monkeypatch.setenv("SKEWT_SEED", "7")
    monkeypatch.setenv("SKEWT_PROGRESS", "off")
    get_settings.cache_clear()
    try:
        settings = get_settings()
        assert settings.seed == 7
        assert settings.progress is False
    finally:
        get_settings.cache_clear()


def test_substream_is_reproducible():
    """Test that the same seed and key give the same stream."""
    a = substream(11, "risk", 3).standard_normal(5)
    b = substream(11, "risk", 3).standard_normal(5)
    assert np.array_equal(a, b)


def test_substreams_differ_by_key_and_seed():
    """Test that changing the key or seed changes the stream."""
    base = substream(11, "risk", 3).standard_normal(5)
    assert not np.array_equal(base, substream(11, "risk", 4).standard_normal(5))
    assert not np.array_equal(base, substream(12, "risk", 3).standard_normal(5))
    assert not np.array_equal(base, substream(11, "oracle", 3).standard_normal(5))


def test_substream_rejects_negative_seed():
    """Test that a negative seed is rejected."""
    with pytest.raises(ValueError):
        substream(-1)


def test_chunk_sizes():
    """Test splitting a total into chunks with a short last chunk."""
    assert chunk_sizes(10, 4) == [4, 4, 2]
    assert chunk_sizes(8, 4) == [4, 4]
    assert chunk_sizes(3, 8) == [3]


def test_adaptive_integral_gaussian():
    """Test adaptive quadrature of the Gaussian integral over the real line."""
    value = adaptive_integral(lambda x: np.exp(-0.5 * x * x), -np.inf, np.inf)
    assert value == pytest.approx(np.sqrt(2.0 * np.pi), rel=1e-10)


def test_adaptive_integral_reports_divergence():
    """Test that a divergent integral raises NumericIntegrityError."""
    with pytest.raises(NumericIntegrityError):
        adaptive_integral(lambda x: 1.0 / x, 0.0, 1.0)


def test_gauss_legendre_panels():
    """Test panelwise Gauss-Legendre integration of a polynomial."""
    values = gauss_legendre_panels(lambda x: x * x, np.array([0.0, 1.0]), np.array([1.0, 2.0]))
    assert np.allclose(values, [1.0 / 3.0, 7.0 / 3.0], atol=1e-14)


def test_normal_expectation_nodes_moments():
    """Test that the normal-expectation rule reproduces the first two moments."""
    nodes, weights = normal_expectation_nodes(64)
    assert weights.sum() == pytest.approx(1.0, abs=1e-13)
    assert np.dot(weights, nodes) == pytest.approx(0.0, abs=1e-13)
    assert np.dot(weights, nodes ** 2) == pytest.approx(1.0, abs=1e-12)
    assert np.dot(weights, nodes ** 4) == pytest.approx(3.0, abs=1e-11)
