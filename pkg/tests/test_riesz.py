# External:
import numpy as np
import pytest

# Internal:
from pyalfven.fields.core import ScalarField
from pyalfven.fields.grid import Grid
from pyalfven.operators.oracles import commutator_fft, riesz_fft
from pyalfven.operators.riesz import riesz_commutator, riesz_ladder, riesz_second


@pytest.fixture
def torus64() -> Grid:
    return Grid(d=2, L=np.pi, N=64, geometry='periodic-torus')


@pytest.fixture
def band_limited(torus64) -> ScalarField:
    return ScalarField.from_function(torus64, lambda x, y: np.sin(x) * np.cos(2.0 * y) + 0.5 * np.cos(3.0 * x + y))


class TestRieszLadder:
    def test_ring_range(self, torus64):
        ladder = riesz_ladder(torus64)
        assert 2.0 ** (-ladder.n_max) >= 2.0 * torus64.spacing
        assert 2.0 ** (-ladder.n_min) <= 2.0 * torus64.L


class TestCommutator:
    def test_constant_multiplier_commutes(self, torus, wave):
        u = ScalarField(torus, np.full(torus.shape, 2.5))
        np.testing.assert_array_equal(riesz_commutator(u, wave, 0, 1, 0).data, 0.0)

    def test_grid_mismatch(self, torus, box, wave):
        with pytest.raises(ValueError, match='different grids'):
            riesz_commutator(ScalarField.zeros(box), wave, 0, 1)

    def test_unknown_form(self, torus, wave):
        with pytest.raises(ValueError, match='unknown commutator form'):
            riesz_commutator(wave, wave, 0, 1, form='spectral')


@pytest.mark.slow
class TestAgainstSymbols:
    @pytest.mark.parametrize('i, j', [(0, 0), (0, 1), (1, 1)])
    def test_riesz_second(self, band_limited, i, j):
        quadrature = riesz_second(band_limited, i, j).data
        symbol = riesz_fft(band_limited, i, j).data
        assert np.abs(quadrature - symbol).max() <= 2e-2 * np.abs(symbol).max()

    def test_commutator_forms_agree(self, torus64, band_limited):
        u = ScalarField.from_function(torus64, lambda x, y: np.cos(x) + 0.3 * np.sin(y))
        reference = commutator_fft(u, band_limited, 0, 1, 1).data
        for form in ('parts', 'gradient'):
            value = riesz_commutator(u, band_limited, 0, 1, 1, form=form).data
            assert np.abs(value - reference).max() <= 5e-2 * np.abs(reference).max()
