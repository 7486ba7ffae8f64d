# External:
import numpy as np
import pytest

# Internal:
from pyalfven.fields.core import CurlField, FieldHistory, ScalarField, VectorField
from pyalfven.fields.grid import Grid


class TestGrid:
    def test_spacing_and_shape(self, box):
        assert box.spacing == pytest.approx(0.25)
        assert box.shape == (32, 32)
        assert box.axis(0)[0] == -4.0
        assert box.axis(0)[16] == pytest.approx(0.0)

    def test_strip_shapes(self, strip):
        assert strip.strip_points == 4
        assert strip.shape == (32, 5)
        assert strip.extended().shape == (32, 8)
        assert strip.extended().strip() == strip
        np.testing.assert_allclose(strip.axis(1), [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_periodicity(self, box, torus, strip):
        assert box.periodic == (False, False)
        assert torus.periodic == (True, True)
        assert strip.extended().periodic == (False, True)
        assert strip.extended().periods == (None, 2.0)

    def test_refined_halves_spacing(self, strip):
        fine = strip.refined()
        assert fine.spacing == pytest.approx(strip.spacing / 2.0)
        assert fine.strip_points == 2 * strip.strip_points

    def test_coordinates_are_read_only(self, box):
        with pytest.raises(ValueError):
            box.coordinates[0, 0, 0] = 1.0

    @pytest.mark.parametrize('kwargs, match', [
        ({'d': 4, 'L': 1.0, 'N': 16}, 'dimension'),
        ({'d': 2, 'L': 1.0, 'N': 4}, 'N >= 8'),
        ({'d': 2, 'L': -1.0, 'N': 16}, 'half-width'),
        ({'d': 2, 'L': 1.0, 'N': 16, 'geometry': 'sphere'}, 'geometry'),
        ({'d': 2, 'L': 3.0, 'N': 32, 'geometry': 'strip'}, 'integral'),
    ])
    def test_invalid_grids(self, kwargs, match):
        with pytest.raises(ValueError, match=match):
            Grid(**kwargs)

    def test_only_strips_extend(self, box):
        with pytest.raises(ValueError, match='only strip grids extend'):
            box.extended()


class TestFields:
    def test_arithmetic_requires_matching_types(self, box):
        u = ScalarField.from_function(box, lambda x, y: x)
        z = VectorField.zeros(box)
        with pytest.raises(ValueError, match='equal field types'):
            u + z

    def test_non_finite_data_rejected(self, box):
        with pytest.raises(ValueError, match='non-finite'):
            ScalarField(box, np.full(box.shape, np.nan))

    def test_max_abs_is_pointwise_euclidean(self, box):
        z = VectorField(box, np.stack([np.full(box.shape, 3.0), np.full(box.shape, 4.0)]))
        assert z.max_abs() == pytest.approx(5.0)

    def test_curl_field_antisymmetry(self, box):
        psi = CurlField(box, np.ones((1,) + box.shape))
        np.testing.assert_array_equal(psi.entry(1, 0), -psi.entry(0, 1))
        np.testing.assert_array_equal(psi.entry(0, 0), 0.0)
        assert psi.as_matrix().data.shape == (2, 2) + box.shape

    def test_history_interpolates_linearly(self, box):
        a, b = ScalarField.zeros(box), ScalarField(box, np.ones(box.shape))
        history = FieldHistory((0.0, 1.0), (a, b))
        np.testing.assert_allclose(history.at(0.25).data, 0.25)
        np.testing.assert_allclose(history.at(5.0).data, 1.0)

    def test_history_rejects_unordered_times(self, box):
        a = ScalarField.zeros(box)
        with pytest.raises(ValueError, match='increase strictly'):
            FieldHistory((1.0, 0.0), (a, a))
