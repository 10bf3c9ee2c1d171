"""Tests for FFT-based symmetric Toeplitz products."""
import numpy as np
import pytest
from scipy import linalg

from src.utils.toeplitz import SymmetricToeplitz, trapezoid_weights


class TestSymmetricToeplitz:

    def test_matvec_matches_dense(self):
        rng = np.random.default_rng(0)
        top = np.exp(-np.arange(50) / 7.0)
        x = rng.standard_normal(50)
        np.testing.assert_allclose(SymmetricToeplitz(top).matvec(x), linalg.toeplitz(top) @ x,
                                   rtol=1e-10, atol=1e-12)

    def test_quadratic_form(self):
        top = np.array([2.0, -1.0, 0.5])
        x = np.array([1.0, 2.0, 3.0])
        assert SymmetricToeplitz(top).quadratic_form(x) == pytest.approx(x @ linalg.toeplitz(top) @ x)

    def test_single_entry(self):
        np.testing.assert_allclose(SymmetricToeplitz(np.array([3.0])).matvec(np.array([2.0])), [6.0])

    @pytest.mark.parametrize("top", [np.zeros((2, 2)), np.array([])])
    def test_rejects_bad_top(self, top):
        with pytest.raises(ValueError):
            SymmetricToeplitz(top)

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            SymmetricToeplitz(np.ones(3)).matvec(np.ones(4))


def test_trapezoid_weights():
    np.testing.assert_allclose(trapezoid_weights(4, 0.5), [0.25, 0.5, 0.5, 0.25])
