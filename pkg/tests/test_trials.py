# External:
import numpy as np
import pytest

# Internal:
from pyalfven.analytics.holder import seminorm_alpha, sup_weighted
from pyalfven.analytics.weights import WeightSpec
from pyalfven.fields.calculus import divergence
from pyalfven.fields.core import ScalarField, VectorField
from pyalfven.lab.trials import TrialSpec, smooth_coefficients, trial_field, trial_fields
from pyalfven.utils.errors import PreconditionError


class TestTrialSpec:
    @pytest.mark.parametrize('kwargs, match', [
        ({'kind': 'tensor'}, 'unknown trial kind'),
        ({'parity': 'mixed'}, 'parity'),
        ({'k_max': 0.0}, 'band limit'),
        ({'amplitude': -1.0}, 'band limit'),
    ])
    def test_invalid(self, kwargs, match):
        with pytest.raises(ValueError, match=match):
            TrialSpec(**kwargs)


class TestTrialField:
    def test_unit_amplitude(self, box):
        u = trial_field(TrialSpec(k_max=2.0), box, seed=1)
        assert isinstance(u, ScalarField)
        assert sup_weighted(u, None) == pytest.approx(1.0)

    def test_weighted_amplitude(self, box):
        h = WeightSpec.power_f0(2.0, 0.25)
        u = trial_field(TrialSpec(kind='vector', envelope=h, amplitude=0.5), box, seed=2)
        assert isinstance(u, VectorField)
        assert sup_weighted(u, h) == pytest.approx(0.5)

    def test_solenoidal(self, torus):
        u = trial_field(TrialSpec(kind='solenoidal', k_max=3.0), torus, seed=3)
        assert divergence(u).max_abs() <= 1e-10

    def test_strip_vector_parities(self, strip):
        u = trial_field(TrialSpec(kind='vector', k_max=4.0), strip, seed=4)
        np.testing.assert_allclose(u.data[-1][..., 0], 0.0, atol=1e-12)
        np.testing.assert_allclose(u.data[-1][..., -1], 0.0, atol=1e-12)

    def test_vanishing_draw(self, torus):
        with pytest.raises(PreconditionError, match='nonzero draw'):
            trial_field(TrialSpec(kind='solenoidal', k_max=0.5), torus)

    def test_ensemble(self, box):
        spec = TrialSpec()
        first, second = trial_fields(spec, box, seed=7, count=2)
        again = trial_fields(spec, box, seed=7, count=2)
        np.testing.assert_array_equal(first.data, again[0].data)
        assert not np.array_equal(first.data, second.data)


class TestSmoothCoefficients:
    def test_symmetric_and_close_to_identity(self, box):
        a = smooth_coefficients(box, 0.1, 0.5, seed=0)
        np.testing.assert_array_equal(a[0, 1], a[1, 0])
        for i in range(2):
            for j in range(2):
                assert np.abs(a[i, j] - float(i == j)).max() <= 0.1 + 1e-12

    def test_entry_holder_budget(self, box):
        a = smooth_coefficients(box, 1.0, 0.5, seed=1)
        s = ScalarField(box, a[0, 1])
        assert s.max_abs() + seminorm_alpha(s, None, 0.5) <= 1.0 + 1e-9
