"""Tests for deterministic trends and their decay bound."""
import numpy as np
import pytest

from src.tools.trend import (
    ZERO_TREND,
    TrendForm,
    TrendSpec,
    eval_trend,
    shifted_power,
    trend_path,
    verify_bound,
)
from src.utils.errors import DomainError


class TestTrendSpec:

    def test_shifted_power_value(self):
        assert eval_trend(shifted_power(2.0, 0.5), 3.0) == pytest.approx(1.0)
        assert eval_trend(shifted_power(2.0, 0.5), 0.0) == pytest.approx(2.0)

    def test_zero_trend(self):
        np.testing.assert_array_equal(eval_trend(ZERO_TREND, np.linspace(0, 10, 11)), np.zeros(11))

    def test_scalar_input_gives_float(self):
        assert isinstance(eval_trend(shifted_power(1.0, 1.0), 2.0), float)

    @pytest.mark.parametrize("beta", [0.25, 0.1, 0.0, -1.0])
    def test_rejects_small_beta(self, beta):
        with pytest.raises(DomainError, match="1/4"):
            shifted_power(1.0, beta)

    def test_rejects_negative_scale(self):
        with pytest.raises(DomainError):
            shifted_power(-1.0, 0.5)

    def test_rejects_negative_time(self):
        with pytest.raises(DomainError):
            eval_trend(shifted_power(1.0, 0.5), -0.1)

    def test_strictly_decreasing(self, trend):
        values = eval_trend(trend, np.linspace(0.0, 1e3, 2001))
        assert np.all(np.diff(values) < 0.0)

    def test_linear_in_scale(self):
        times = np.linspace(0.0, 50.0, 101)
        np.testing.assert_array_equal(eval_trend(shifted_power(2.0, 0.75), times),
                                      2.0 * eval_trend(shifted_power(1.0, 0.75), times))

    def test_form_from_string(self):
        assert TrendSpec("zero").form is TrendForm.ZERO


class TestBound:

    def test_shifted_power_satisfies_bound(self):
        check = verify_bound(shifted_power(1.5, 0.75), np.geomspace(0.01, 1e4, 300))
        assert check.holds
        assert check.max_ratio <= 1.0

    def test_custom_trend_violates_bound(self):
        spec = shifted_power(1.0, 0.5)
        check = verify_bound(spec, np.geomspace(1.0, 100.0, 50), trend=lambda t: 2.0 * t ** -0.5)
        assert not check.holds
        assert check.max_ratio == pytest.approx(2.0)

    def test_constant_trend_violates_bound(self):
        check = verify_bound(shifted_power(1.0, 0.5), [0.5, 1.0, 10.0, 100.0],
                             trend=lambda t: np.ones_like(t))
        assert not check.holds
        assert check.max_ratio == pytest.approx(10.0)

    def test_zero_scale(self):
        spec = TrendSpec(TrendForm.SHIFTED_POWER, 0.0, 0.5)
        assert verify_bound(spec, [1.0, 2.0]).max_ratio == 0.0
        assert verify_bound(ZERO_TREND, [1.0, 2.0]).holds

    def test_rejects_nonpositive_times(self):
        with pytest.raises(DomainError):
            verify_bound(shifted_power(1.0, 0.5), [0.0, 1.0])


class TestTrendPath:

    def test_samples_on_grid(self):
        times = np.arange(8) * 0.5
        values = trend_path(shifted_power(1.0, 1.0), times)
        np.testing.assert_allclose(values, 1.0 / (1.0 + times))
