# External:
import numpy as np
import pytest

# Internal:
from pyalfven.fields.core import ScalarField, VectorField
from pyalfven.fields.extension import (StripField, even_extend, extend_vector, odd_extend, reflect, restrict,
                                       subtract_trace)


@pytest.fixture
def even_field(strip) -> ScalarField:
    return ScalarField.from_function(strip, lambda x, y: np.exp(-x ** 2) * np.cos(np.pi * y) + y ** 2)


@pytest.fixture
def odd_field(strip) -> ScalarField:
    return ScalarField.from_function(strip, lambda x, y: np.exp(-x ** 2) * np.sin(np.pi * y))


class TestReflect:
    @pytest.mark.parametrize('y, folded', [(0.3, 0.3), (1.5, 0.5), (-0.3, 0.3), (2.25, 0.25), (-1.0, 1.0)])
    def test_folds_onto_unit_interval(self, y, folded):
        np.testing.assert_allclose(reflect([0.7, y]), [0.7, folded])


class TestEvenExtension:
    def test_restriction_recovers_field(self, even_field):
        ext = even_extend(StripField(even_field, 'even'))
        np.testing.assert_array_equal(restrict(ext).data, even_field.data)

    def test_mirror_symmetry(self, strip, even_field):
        ext = even_extend(StripField(even_field, 'even')).values
        M = strip.strip_points
        for j in range(1, M):
            np.testing.assert_array_equal(ext[..., 2 * M - j], ext[..., j])

    def test_rejects_odd_tag(self, odd_field):
        with pytest.raises(ValueError, match='even-tagged'):
            even_extend(StripField(odd_field, 'odd'))


class TestOddExtension:
    def test_antisymmetry(self, strip, odd_field):
        ext = odd_extend(StripField(odd_field, 'odd')).values
        M = strip.strip_points
        np.testing.assert_array_equal(ext[..., M], 0.0)
        for j in range(1, M):
            np.testing.assert_allclose(ext[..., 2 * M - j], -ext[..., j])

    def test_nonzero_trace_rejected(self, even_field):
        with pytest.raises(ValueError, match='zero boundary trace'):
            odd_extend(StripField(even_field, 'odd'))

    def test_trace_subtraction(self, even_field):
        corrected, magnitude = subtract_trace(even_field)
        assert magnitude > 0.0
        assert StripField(corrected, 'odd').boundary_trace <= 1e-12
        ext = odd_extend(StripField(even_field, 'odd'), subtract=True)
        np.testing.assert_allclose(restrict(ext).data, corrected.data)


class TestVectorExtension:
    def test_component_parities(self, strip, even_field, odd_field):
        z = VectorField.from_components([even_field, odd_field])
        ext = extend_vector(z)
        assert ext.grid.geometry == 'extended-strip'
        np.testing.assert_array_equal(ext.data[0], even_extend(StripField(even_field, 'even')).data)
        np.testing.assert_array_equal(ext.data[1], odd_extend(StripField(odd_field, 'odd')).data)

    def test_strip_field_needs_strip(self, box):
        with pytest.raises(ValueError, match='strip geometry'):
            StripField(ScalarField.zeros(box))
