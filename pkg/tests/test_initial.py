# External:
import numpy as np
import pytest

# Internal:
from pyalfven.fields.calculus import divergence
from pyalfven.solvers.initial import band_limited, envelope, initial_pair, random_solenoidal


class TestRandomSolenoidal:
    def test_amplitude(self, box):
        z = random_solenoidal(box, eps=0.03, seed=5)
        assert z.max_abs() == pytest.approx(0.03, rel=1e-12)

    def test_zero_amplitude(self, strip):
        assert random_solenoidal(strip, eps=0.0).max_abs() == 0.0

    def test_reproducible(self, box):
        np.testing.assert_array_equal(random_solenoidal(box, seed=11).data, random_solenoidal(box, seed=11).data)
        assert not np.array_equal(random_solenoidal(box, seed=11).data, random_solenoidal(box, seed=12).data)

    def test_divergence_free_on_torus(self, torus):
        z = random_solenoidal(torus, eps=1.0, k_max=3.0, seed=2)
        assert divergence(z).max_abs() <= 1e-10

    def test_normal_component_vanishes_on_walls(self, strip):
        z = random_solenoidal(strip, eps=1.0, k_max=4.0, seed=3)
        np.testing.assert_array_equal(z.data[-1][..., 0], 0.0)
        np.testing.assert_array_equal(z.data[-1][..., -1], 0.0)

    def test_empty_band(self, torus):
        with pytest.raises(ValueError, match='admits no modes'):
            random_solenoidal(torus, k_max=0.5)


class TestInitialPair:
    def test_independent_and_reproducible(self, box):
        plus, minus = initial_pair(box, seed=4)
        again, _ = initial_pair(box, seed=4)
        np.testing.assert_array_equal(plus.data, again.data)
        assert not np.allclose(plus.data, minus.data)


class TestHelpers:
    def test_envelope(self, box, torus):
        assert envelope(box).max() == pytest.approx(1.0)
        assert envelope(box)[0, 0] == pytest.approx((1.0 + 32.0) ** (-0.625))
        np.testing.assert_array_equal(envelope(torus), 1.0)

    def test_band_limited_parity(self, box):
        with pytest.raises(ValueError, match='parity'):
            band_limited(box, 1.0, np.random.default_rng(0), parity='mixed')

    def test_even_strip_samples(self, strip):
        s = band_limited(strip, 4.0, np.random.default_rng(1), parity='even')
        assert s.shape == strip.shape
        assert np.all(np.isfinite(s))
