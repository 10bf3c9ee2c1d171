"""Tests for the Monte Carlo robustness and CLT harnesses."""
import pytest

from src.tools.monte_carlo import mc_clt, mc_difference_functional, mc_estimator_robustness
from src.tools.trend import ZERO_TREND
from src.tools.whittle import WhittleConfig
from src.utils.errors import DomainError
from src.utils.pool import ReplicationPool

RATE_ONLY = WhittleConfig(free=("rate",))


class TestDifferenceFunctional:

    def test_zero_trend_is_exactly_zero(self, ou_model, kernel):
        report = mc_difference_functional(ou_model, ZERO_TREND, kernel, 64.0, 50, base_seed=3, n=256)
        assert report.mean == 0.0
        assert report.mean_abs == 0.0
        assert report.extra["D_T"] == 0.0
        assert report.replications == 50
        assert report.failures == 0

    def test_trend_part_tracks_d(self, ou_model, trend, kernel):
        report = mc_difference_functional(ou_model, trend, kernel, 64.0, 50, base_seed=3, n=256)
        assert report.extra["mean_S_trend"] == pytest.approx(report.extra["D_T"], rel=0.1)

    def test_cross_term_is_centred(self, ou_model, trend, kernel):
        report = mc_difference_functional(ou_model, trend, kernel, 64.0, 50, base_seed=3, n=256)
        assert abs(report.extra["mean_S_cross"]) < 4.0 * report.extra["stderr_S_cross"]

    def test_too_few_replications(self, ou_model, trend, kernel):
        with pytest.raises(DomainError):
            mc_difference_functional(ou_model, trend, kernel, 64.0, 49, base_seed=3, n=256)

    def test_samples_not_dumped(self, ou_model, trend, kernel):
        report = mc_difference_functional(ou_model, trend, kernel, 64.0, 50, base_seed=3, n=256)
        assert len(report.samples) == 50
        assert "samples" not in report.model_dump()

    def test_parallel_matches_serial(self, ou_model, trend, kernel):
        serial = mc_difference_functional(ou_model, trend, kernel, 64.0, 50, base_seed=11, n=256)
        parallel = mc_difference_functional(ou_model, trend, kernel, 64.0, 50, base_seed=11, n=256,
                                            pool=ReplicationPool(2, max_workers=2))
        assert parallel.model_dump() == serial.model_dump()

    @pytest.mark.slow
    def test_shrinks_with_horizon(self, ou_model, trend, kernel):
        short = mc_difference_functional(ou_model, trend, kernel, 100.0, 200, base_seed=5)
        long = mc_difference_functional(ou_model, trend, kernel, 400.0, 200, base_seed=5)
        assert long.mean_abs < short.mean_abs


class TestClt:

    def test_too_few_replications(self, ou_model, kernel):
        with pytest.raises(DomainError):
            mc_clt(ou_model, kernel, 200.0, 199, base_seed=1)

    @pytest.mark.slow
    def test_standardized_functional_is_normal(self, ou_model, kernel):
        report = mc_clt(ou_model, kernel, 200.0, 500, base_seed=20240601)
        assert report.ks_pvalue > 0.01
        assert 0.7 < report.extra["variance_ratio"] < 1.3
        assert abs(report.extra["mean_in_stderr"]) < 3.0


class TestEstimatorRobustness:

    def test_zero_trend_gives_identical_fits(self, ou_model):
        report = mc_estimator_robustness(ou_model, ZERO_TREND, RATE_ONLY, 100.0, 50,
                                         base_seed=9, n=256)
        assert report.extra["rate_median_abs_diff"] == 0.0
        assert report.extra["rate_median_abs_err_X"] == report.extra["rate_median_abs_err_Y"]
        assert report.mean_abs == 0.0

    def test_too_few_replications(self, ou_model, trend):
        with pytest.raises(DomainError):
            mc_estimator_robustness(ou_model, trend, RATE_ONLY, 100.0, 10, base_seed=9)

    def test_theta_init_starts_both_fits(self, ou_model):
        report = mc_estimator_robustness(ou_model, ZERO_TREND, RATE_ONLY, 100.0, 50,
                                         base_seed=9, n=256, theta_init={"rate": 2.0})
        assert report.extra["rate_median_abs_diff"] == 0.0
        assert report.replications + report.failures + report.excluded == 50

    def test_theta_init_outside_bounds(self, ou_model, trend):
        with pytest.raises(DomainError, match="outside bounds"):
            mc_estimator_robustness(ou_model, trend, RATE_ONLY, 100.0, 50,
                                    base_seed=9, n=256, theta_init={"rate": 100.0})

    @pytest.mark.slow
    def test_trend_effect_below_sampling_error(self, ou_model, trend):
        report = mc_estimator_robustness(ou_model, trend, RATE_ONLY, 400.0, 100, base_seed=17)
        assert report.extra["rate_median_abs_diff"] < report.extra["rate_median_abs_err_Y"] < 0.15

    @pytest.mark.slow
    def test_contaminated_error_shrinks(self, ou_model, trend):
        short = mc_estimator_robustness(ou_model, trend, RATE_ONLY, 100.0, 100, base_seed=17)
        long = mc_estimator_robustness(ou_model, trend, RATE_ONLY, 400.0, 100, base_seed=17)
        assert long.extra["rate_median_abs_err_X"] < short.extra["rate_median_abs_err_X"]
