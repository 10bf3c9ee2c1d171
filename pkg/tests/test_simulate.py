"""Tests for circulant-embedding simulation and trend contamination."""
import numpy as np
import pytest
from scipy import stats

from src.tools import simulate
from src.tools.simulate import (
    PathLabel,
    SampledPath,
    SamplingGrid,
    contaminate,
    export_path_csv,
    replication_seed,
    sample_gaussian_path,
    subtract_trend,
)
from src.tools.spectral_models import ou
from src.tools.trend import ZERO_TREND
from src.utils.errors import DomainError, EmbeddingNotPSDError, UsageError


@pytest.fixture(scope="module")
def ou_ensemble():
    """2000 independent OU(1, 1) paths on the 64 / 256 grid, one per row."""
    grid = SamplingGrid(64.0, 256)
    model = ou(1.0, 1.0)
    paths = [sample_gaussian_path(model, grid, replication_seed(2024, i)).values for i in range(2000)]
    return grid, np.array(paths)


class TestSamplingGrid:

    def test_delta_and_times(self):
        grid = SamplingGrid(64.0, 256)
        assert grid.delta == 0.25
        assert grid.times[0] == 0.0
        assert grid.times[-1] == pytest.approx(63.75)

    @pytest.mark.parametrize("T, n", [(0.0, 256), (-1.0, 256), (64.0, 100), (64.0, 32)])
    def test_rejects(self, T, n):
        with pytest.raises(DomainError):
            SamplingGrid(T, n)


class TestSampling:

    def test_deterministic_in_seed(self, ou_model, small_grid):
        first = sample_gaussian_path(ou_model, small_grid, seed=11)
        second = sample_gaussian_path(ou_model, small_grid, seed=11)
        other = sample_gaussian_path(ou_model, small_grid, seed=12)
        np.testing.assert_array_equal(first.values, second.values)
        assert not np.array_equal(first.values, other.values)

    def test_clean_and_read_only(self, ou_path):
        assert ou_path.label is PathLabel.CLEAN
        assert ou_path.seed == 7
        with pytest.raises(ValueError):
            ou_path.values[0] = 1.0

    def test_sample_variance_matches_r0(self, ou_model):
        grid = SamplingGrid(256.0, 1024)
        variances = [np.var(sample_gaussian_path(ou_model, grid, replication_seed(3, i)).values)
                     for i in range(20)]
        assert np.mean(variances) == pytest.approx(1.0, abs=0.1)

    def test_negative_seed(self, ou_model, small_grid):
        with pytest.raises(DomainError):
            sample_gaussian_path(ou_model, small_grid, seed=-1)

    def test_embedding_not_psd(self, ou_model, small_grid, monkeypatch):
        def bad_covariance(model, lags):
            r = np.zeros(len(lags))
            r[0], r[1] = 1.0, 1.5
            return r

        monkeypatch.setattr(simulate, "covariance", bad_covariance)
        with pytest.raises(EmbeddingNotPSDError, match="EMBEDDING_NOT_PSD") as info:
            sample_gaussian_path(ou_model, small_grid, seed=0)
        assert info.value.min_eigenvalue < 0
        assert info.value.embedding_size >= 2 * small_grid.n

    def test_path_shape_checked(self, small_grid):
        with pytest.raises(DomainError):
            SampledPath(grid=small_grid, values=np.zeros(10))
        with pytest.raises(DomainError):
            SampledPath(grid=small_grid, values=np.full(small_grid.n, np.nan))


class TestEnsemble:

    def test_marginal_is_standard_normal(self, ou_ensemble):
        _, paths = ou_ensemble
        assert stats.kstest(paths[:, 0], "norm").pvalue > 0.01

    def test_variance_is_r0(self, ou_ensemble):
        _, paths = ou_ensemble
        assert np.var(paths[:, 0]) == pytest.approx(1.0, abs=0.1)
        assert np.mean(np.var(paths, axis=0)) == pytest.approx(1.0, abs=0.1)

    @pytest.mark.parametrize("lag", [1, 4, 8])
    def test_lag_correlation(self, ou_ensemble, lag):
        grid, paths = ou_ensemble
        correlation = np.corrcoef(paths[:, 0], paths[:, lag])[0, 1]
        assert correlation == pytest.approx(np.exp(-lag * grid.delta), abs=0.08)

    def test_covariance_does_not_depend_on_start(self, ou_ensemble):
        grid, paths = ou_ensemble
        lag = 4
        for start in (0, 64, 128, 192, grid.n - 1 - lag):
            cov = np.mean(paths[:, start] * paths[:, start + lag])
            assert cov == pytest.approx(np.exp(-lag * grid.delta), abs=0.1)


class TestSeeds:

    def test_replication_seed(self):
        assert replication_seed(0, 5) == replication_seed(0, 5)
        assert len({replication_seed(0, i) for i in range(100)}) == 100
        assert replication_seed(0, 1) != replication_seed(1, 0)


class TestContamination:

    def test_round_trip(self, ou_path, trend):
        dirty = contaminate(ou_path, trend)
        assert dirty.label is PathLabel.CONTAMINATED
        assert dirty.seed == ou_path.seed
        assert dirty.values[0] == pytest.approx(ou_path.values[0] + 1.0)
        restored = subtract_trend(dirty, trend)
        assert restored.label is PathLabel.CLEAN
        np.testing.assert_allclose(restored.values, ou_path.values, atol=1e-12)

    def test_zero_trend_leaves_values(self, ou_path):
        np.testing.assert_array_equal(contaminate(ou_path, ZERO_TREND).values, ou_path.values)

    def test_double_contamination(self, ou_path, trend):
        with pytest.raises(UsageError):
            contaminate(contaminate(ou_path, trend), trend)

    def test_subtract_from_clean(self, ou_path, trend):
        with pytest.raises(UsageError):
            subtract_trend(ou_path, trend)


class TestExport:

    def test_csv(self, ou_path, tmp_path):
        target = export_path_csv(ou_path, tmp_path / "path.csv")
        lines = target.read_text().splitlines()
        assert lines[0] == "t,value"
        assert len(lines) == ou_path.grid.n + 1
        data = np.loadtxt(target, delimiter=",", skiprows=1)
        np.testing.assert_array_equal(data[:, 1], ou_path.values)
