# External:
import numpy as np
import pytest

# Internal:
from pyalfven.fields.core import ScalarField, VectorField
from pyalfven.operators.oracles import (derivative_fft, heat_fft, inverse_laplacian_fft, pi1_fft, pi2_fft,
                                        riesz_fft, wavenumbers)
from pyalfven.solvers.initial import stream_velocity


class TestFourierOracles:
    def test_riesz_trace_identity(self, torus, wave):
        total = sum(riesz_fft(wave, i, i).data for i in range(torus.d))
        np.testing.assert_allclose(total, -wave.data, atol=1e-12)

    def test_riesz_symbol_on_a_mode(self, torus):
        u = ScalarField.from_function(torus, lambda x, y: np.cos(x + 2.0 * y))
        np.testing.assert_allclose(riesz_fft(u, 0, 1).data, -0.4 * u.data, atol=1e-12)

    def test_inverse_laplacian(self, torus, wave):
        np.testing.assert_allclose(inverse_laplacian_fft(wave.data, torus), -wave.data / 5.0, atol=1e-12)

    def test_spectral_derivative(self, torus, wave):
        X, Y = torus.coordinates
        np.testing.assert_allclose(derivative_fft(wave.data, torus, 0), np.cos(X) * np.cos(2.0 * Y), atol=1e-12)

    def test_heat_symbol(self, torus, wave):
        np.testing.assert_allclose(heat_fft(wave, 0.2).data, np.exp(-1.0) * wave.data, atol=1e-12)

    def test_needs_torus(self, box):
        with pytest.raises(ValueError, match='periodic torus'):
            wavenumbers(box)

    def test_pi_operators_vanish_for_constant_drift(self, torus, wave):
        u = VectorField(torus, np.ones((2,) + torus.shape))
        w = stream_velocity(wave.data, torus)
        np.testing.assert_allclose(pi2_fft(u, w).data, 0.0, atol=1e-10)
        # div(1 ⊗ w) = (1·∇)w, so Π₁(1, w) = Δ⁻¹curl((1·∇)w) = (1·∇)Δ⁻¹curl w.
        assert np.abs(pi1_fft(u, w).data).max() > 0.0
