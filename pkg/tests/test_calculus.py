# External:
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Internal:
from pyalfven.analytics.trends import observed_order, ratio_series
from pyalfven.fields.calculus import curl, derivative, divergence, gradient, laplacian, row_divergence
from pyalfven.fields.core import CurlField, ScalarField, VectorField
from pyalfven.fields.grid import Grid
from pyalfven.solvers.initial import stream_velocity


class TestDerivative:
    def test_exact_on_quartics_including_edges(self, box):
        u = ScalarField.from_function(box, lambda x, y: x ** 4 - 2.0 * x * y ** 3)
        grad = gradient(u)
        X, Y = box.coordinates
        np.testing.assert_allclose(grad.data[0], 4.0 * X ** 3 - 2.0 * Y ** 3, atol=1e-9)
        np.testing.assert_allclose(grad.data[1], -6.0 * X * Y ** 2, atol=1e-9)

    def test_periodic_fourth_order(self):
        errors, spacings = [], []
        for N in (16, 32, 64):
            grid = Grid(d=2, L=np.pi, N=N, geometry='periodic-torus')
            u = ScalarField.from_function(grid, lambda x, y: np.sin(x) + 0.0 * y)
            exact = np.cos(grid.coordinates[0])
            errors.append(np.abs(derivative(u.data, grid, 0) - exact).max())
            spacings.append(grid.spacing)
        assert errors[0] / errors[1] >= 12.0
        assert observed_order(ratio_series(errors, spacings)) == pytest.approx(4.0, abs=0.3)

    def test_component_axes_are_skipped(self, torus, wave):
        stacked = np.stack([wave.data, 2.0 * wave.data])
        out = derivative(stacked, torus, 1)
        np.testing.assert_allclose(out[1], 2.0 * out[0])

    @settings(max_examples=20, deadline=None)
    @given(a=st.floats(-5, 5), b=st.floats(-5, 5))
    def test_linearity(self, a, b):
        grid = Grid(d=2, L=np.pi, N=16, geometry='periodic-torus')
        X, Y = grid.coordinates
        f, g = np.sin(X) * np.cos(Y), np.cos(2.0 * X)
        np.testing.assert_allclose(derivative(a * f + b * g, grid, 0),
                                   a * derivative(f, grid, 0) + b * derivative(g, grid, 0), atol=1e-10)


class TestVectorCalculus:
    def test_rotation_curl(self, box):
        z = VectorField.from_function(box, lambda x, y: [-y, x])
        np.testing.assert_allclose(curl(z).data[0], -2.0, atol=1e-12)
        np.testing.assert_allclose(divergence(z).data, 0.0, atol=1e-12)

    @pytest.mark.parametrize('geometry', ['free-box', 'periodic-torus'])
    def test_stream_velocity_is_solenoidal(self, geometry):
        grid = Grid(d=2, L=np.pi, N=32, geometry=geometry)
        X, Y = grid.coordinates
        z = stream_velocity(np.exp(-(X ** 2 + Y ** 2)) * np.sin(X + 2.0 * Y), grid)
        assert divergence(z).max_abs() <= 1e-10 * max(z.max_abs(), 1.0)

    def test_row_divergence_of_curl_potential_is_solenoidal(self, torus, wave):
        psi = CurlField(torus, wave.data[None])
        assert divergence(row_divergence(psi)).max_abs() <= 1e-10

    def test_laplacian_of_eigenfunction(self, torus, wave):
        error = (laplacian(wave) + 5.0 * wave).max_abs()
        assert error <= 5e-2
