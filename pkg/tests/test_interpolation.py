# External:
import numpy as np
import pytest

# Internal:
from pyalfven.fields.core import ScalarField, VectorField
from pyalfven.fields.interpolation import fold_strip, interpolate, interpolate_data, lagrange_weights


class TestLagrangeWeights:
    def test_partition_of_unity(self):
        t = np.linspace(0.0, 3.0, 13)
        np.testing.assert_allclose(lagrange_weights(t).sum(axis=0), 1.0)

    def test_nodal(self):
        np.testing.assert_array_equal(lagrange_weights(np.arange(4.0)), np.eye(4))


class TestInterpolate:
    def test_exact_at_nodes(self, box):
        u = ScalarField.from_function(box, lambda x, y: np.exp(-x ** 2 - y ** 2))
        np.testing.assert_allclose(interpolate(u, box.coordinates), u.data, atol=1e-14)

    def test_exact_on_cubics(self, box):
        func = lambda x, y: x ** 3 - 2.0 * x * y + y ** 3
        u = ScalarField.from_function(box, func)
        rng = np.random.default_rng(3)
        points = rng.uniform(-3.9, 3.7, size=(2, 50))
        np.testing.assert_allclose(interpolate(u, points), func(*points), atol=1e-10)

    def test_vector_components(self, box):
        z = VectorField.from_function(box, lambda x, y: [x, 2.0 * y])
        out = interpolate(z, np.array([[0.1], [0.3]]))
        np.testing.assert_allclose(out[:, 0], [0.1, 0.6], atol=1e-12)

    def test_clamp_counted(self, box):
        u = ScalarField.from_function(box, lambda x, y: x + 0.0 * y)
        values, clamped = interpolate_data(u.data, box, np.array([[10.0, 0.0], [0.0, 0.0]]))
        assert clamped == 1
        assert values[0] == pytest.approx(box.axis(0)[-1])

    def test_periodic_wrap(self, torus, wave):
        points = np.array([[0.3, 0.3 + 2.0 * np.pi], [1.1, 1.1]])
        values = interpolate(wave, points)
        assert values[0] == pytest.approx(values[1], abs=1e-12)

    def test_strip_folding(self, strip):
        u = ScalarField.from_function(strip, lambda x, y: np.cos(np.pi * y) + 0.0 * x)
        values = interpolate(u, np.array([[0.0, 0.0], [0.5, 1.5]]))
        assert values[0] == pytest.approx(values[1], abs=1e-12)

    def test_fold_strip(self):
        np.testing.assert_allclose(fold_strip(np.array([-0.5, 0.5, 1.5, 3.0])), [0.5, 0.5, 0.5, 1.0])
