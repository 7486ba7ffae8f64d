# External:
import numpy as np
import pytest

# Internal:
from pyalfven.operators.kernels import (fd_derivative, heat_kernel, heat_kernel_derivatives, newton_radial,
                                        newton_radial_prime, surface_area, theta, theta_moment, theta_prime)
from pyalfven.operators.pressure import DyadicLadder, ring_l1_profile


class TestCutoff:
    @pytest.mark.parametrize('r, value', [(0.0, 1.0), (0.5, 1.0), (1.5, 0.5), (2.0, 0.0), (3.0, 0.0)])
    def test_values(self, r, value):
        assert theta(r) == pytest.approx(value)

    def test_derivative(self):
        r = np.linspace(1.05, 1.95, 10)
        numeric = fd_derivative(lambda X: theta(X[0]), r[None], 0, 1e-4)
        np.testing.assert_allclose(numeric, theta_prime(r), atol=1e-8)

    def test_first_moment(self):
        assert theta_moment(1) == pytest.approx(8.0 / 7.0, rel=1e-10)


class TestNewton:
    @pytest.mark.parametrize('d', [2, 3])
    def test_radial_derivative(self, d):
        r = np.array([0.3, 1.0, 4.0])
        numeric = fd_derivative(lambda X: newton_radial(X[0], d), r[None], 0, 1e-4)
        np.testing.assert_allclose(numeric, newton_radial_prime(r, d), rtol=1e-8)

    def test_flux_through_spheres_is_one(self):
        for d in (2, 3):
            for r in (0.5, 2.0):
                assert surface_area(d) * r ** (d - 1) * newton_radial_prime(r, d) == pytest.approx(1.0)


class TestHeatKernel:
    def test_unit_mass(self):
        x = np.arange(-12.0, 12.0, 0.1)
        X = np.stack(np.meshgrid(x, x, indexing='ij'))
        assert abs(heat_kernel(0.5, X).sum() * 0.01 - 1.0) <= 1e-8

    def test_gradient_magnitude(self):
        X = np.array([[0.3, -1.2, 2.0], [0.4, 0.1, -0.5]])
        numeric = np.stack([fd_derivative(lambda Y: heat_kernel(0.7, Y), X, a, 1e-4) for a in range(2)])
        np.testing.assert_allclose(heat_kernel_derivatives(0.7, X, 1), np.sqrt(np.sum(numeric ** 2, axis=0)),
                                   rtol=1e-7)
        np.testing.assert_array_equal(heat_kernel_derivatives(0.7, X, 0), heat_kernel(0.7, X))

    @pytest.mark.parametrize('k', [0, 1, 2])
    def test_gaussian_domination(self, k):
        x = np.linspace(-5.0, 5.0, 41)
        X = np.stack(np.meshgrid(x, x, indexing='ij'))
        for t in (0.1, 1.0, 10.0):
            ratio = heat_kernel_derivatives(t, X, k) * t ** (k / 2.0) / heat_kernel(2.0 * t, X)
            assert np.isfinite(ratio).all()
            assert ratio.max() <= 4.0


class TestRingKernels:
    def test_l1_scaling(self):
        profile = ring_l1_profile(range(0, 4), alpha=0.5)
        np.testing.assert_allclose(profile['l1_scaled'], profile['l1_scaled'].iloc[0], rtol=1e-4)
        np.testing.assert_allclose(profile['grad_scaled'], profile['grad_scaled'].iloc[0], rtol=1e-4)

    def test_unknown_family(self):
        with pytest.raises(KeyError, match='Unknown kernel family'):
            DyadicLadder('laplace', 0, 3)
