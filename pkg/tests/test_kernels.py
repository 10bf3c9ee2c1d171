"""Tests for smoothing kernels, their transforms and the decay check."""
import math

import numpy as np
import pytest
from scipy import integrate

from src.tools.kernels import (
    KernelForm,
    SmoothingKernel,
    fejer,
    kernel_density,
    kernel_fourier,
    poisson,
    power,
    verify_kernel_decay,
)
from src.tools.spectral_models import EXPONENTIAL
from src.utils.errors import DomainError


def transform_by_quadrature(kernel, t):
    """(1/2pi) * integral of exp(i lam t) g(lam) over the real line, for even g."""
    value, _ = integrate.quad(lambda x: kernel_density(kernel, x), 0.0, np.inf,
                              weight="cos", wvar=t, limlst=200)
    return value / math.pi


class TestPoisson:

    def test_transform_values(self):
        k = poisson()
        assert kernel_fourier(k, 0.0) == pytest.approx(1.0 / (2.0 * math.pi))
        assert kernel_fourier(k, 1.0) == pytest.approx(0.058550, abs=1e-6)
        assert kernel_density(k, 0.0) == pytest.approx(1.0 / math.pi)

    def test_transform_pair(self):
        assert transform_by_quadrature(poisson(), 0.7) == pytest.approx(
            kernel_fourier(poisson(), 0.7), rel=1e-6)

    def test_transform_bounded_by_origin(self):
        t = np.linspace(-5.0, 5.0, 101)
        assert np.all(np.abs(kernel_fourier(poisson(), t)) <= kernel_fourier(poisson(), 0.0))


class TestFejer:

    def test_compact_support(self):
        k = fejer(bandwidth=2.0)
        assert kernel_fourier(k, 0.5) == pytest.approx(0.75)
        assert kernel_fourier(k, 2.5) == 0.0

    def test_density(self):
        k = fejer(bandwidth=2.0)
        assert kernel_density(k, 0.0) == pytest.approx(2.0)
        assert kernel_density(k, 1.0) == pytest.approx(2.0 * math.sin(1.0) ** 2)

    def test_transform_pair(self):
        k = fejer(bandwidth=2.0)
        assert transform_by_quadrature(k, 0.5) == pytest.approx(0.75, rel=1e-5)


class TestPower:

    def test_gamma_two_is_exponential_density(self):
        lam = np.array([0.0, 0.5, 3.0])
        np.testing.assert_allclose(kernel_density(power(2.0), lam), math.pi * np.exp(-lam), rtol=1e-10)

    def test_transform_pair(self):
        k = power(3.0)
        assert transform_by_quadrature(k, 1.3) == pytest.approx(kernel_fourier(k, 1.3), rel=1e-5)

    def test_origin_pole(self):
        k = power(0.8)
        assert k.singular_at_origin
        with pytest.raises(DomainError):
            kernel_density(k, 0.0)
        assert kernel_density(k, 0.5) > 0.0

    @pytest.mark.parametrize("exponent", [0.0, -1.0, math.inf])
    def test_rejects_exponent(self, exponent):
        with pytest.raises(DomainError):
            power(exponent)


class TestKernelProperties:

    def test_even(self):
        lam = np.linspace(0.1, 9.0, 17)
        for k in (poisson(), fejer(1.5), power(1.5)):
            np.testing.assert_array_equal(kernel_density(k, lam), kernel_density(k, -lam))
            np.testing.assert_array_equal(kernel_fourier(k, lam), kernel_fourier(k, -lam))

    def test_scale(self):
        assert poisson(scale=2.0).density(1.0) == pytest.approx(2.0 * poisson().density(1.0))
        assert poisson().rescaled(3.0).fourier(0.2) == pytest.approx(3.0 * poisson().fourier(0.2))

    def test_decay_markers(self):
        assert poisson().decay == EXPONENTIAL
        assert fejer().decay == EXPONENTIAL
        assert power(1.5).decay == 1.5
        assert math.isinf(poisson().gamma)

    def test_form_from_string(self):
        assert SmoothingKernel("fejer", bandwidth=1.0).form is KernelForm.FEJER

    def test_fejer_rejects_bandwidth(self):
        with pytest.raises(DomainError):
            fejer(bandwidth=0.0)


class TestDecayCheck:

    def test_power_kernel_holds(self):
        check = verify_kernel_decay(power(2.0))
        assert check.holds
        assert check.exponent == 2.0
        assert check.fitted_C <= 1.0

    def test_exponential_kernels_hold(self):
        assert verify_kernel_decay(poisson()).holds
        fejer_check = verify_kernel_decay(fejer(1.0))
        assert fejer_check.holds
        assert fejer_check.fitted_C == 0.0

    def test_too_fast_exponent_fails(self):
        check = verify_kernel_decay(power(2.0), exponent=3.0)
        assert not check.holds
        assert check.tail_slope == pytest.approx(1.0, abs=0.01)

    def test_rejects_nonpositive_lags(self):
        with pytest.raises(DomainError):
            verify_kernel_decay(poisson(), t_grid=[0.0, 1.0])
