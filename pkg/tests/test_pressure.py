# External:
import numpy as np
import pytest

# Internal:
from pyalfven.fields.core import ScalarField, VectorField
from pyalfven.fields.grid import Grid
from pyalfven.operators.oracles import pressure_fft
from pyalfven.operators.pressure import DyadicLadder, pressure_I, witness
from pyalfven.solvers.initial import stream_velocity


@pytest.fixture
def torus64() -> Grid:
    return Grid(d=2, L=np.pi, N=64, geometry='periodic-torus')


@pytest.fixture
def pair(torus64) -> tuple[VectorField, VectorField]:
    X, Y = torus64.coordinates
    u = stream_velocity(np.sin(X) * np.sin(Y), torus64)
    w = stream_velocity(np.cos(X + Y) + 0.5 * np.sin(2.0 * X), torus64)
    return u, w


class TestPressureOperator:
    def test_zero_operand(self, torus, wave):
        w = VectorField.from_components([wave, wave])
        assert pressure_I(VectorField.zeros(torus), w).max_abs() == 0.0

    def test_operand_checks(self, torus, box, strip):
        with pytest.raises(ValueError, match='different grids'):
            pressure_I(VectorField.zeros(torus), VectorField.zeros(box))
        with pytest.raises(ValueError, match='extend strip fields'):
            pressure_I(VectorField.zeros(strip), VectorField.zeros(strip))

    def test_cutoff_scale_below_spacing(self, box):
        with pytest.raises(ValueError, match='below the grid spacing'):
            DyadicLadder.for_grid(box, 'gradN-theta', R=0.1)

    def test_witness_of_constant_vanishes(self, torus):
        u = ScalarField(torus, np.full(torus.shape, 1.5))
        np.testing.assert_allclose(witness(u, 1).data, 0.0, atol=1e-12)


@pytest.mark.slow
class TestPressureAgainstSymbols:
    def test_matches_fourier_pressure(self, pair):
        u, w = pair
        reference = pressure_fft(u, w).data
        assert np.abs(pressure_I(u, w).data - reference).max() <= 5e-2 * np.abs(reference).max()

    def test_symmetric(self, pair):
        u, w = pair
        scale = pressure_I(u, w).max_abs()
        assert (pressure_I(u, w) - pressure_I(w, u)).max_abs() <= 1e-8 * scale

    def test_cutoff_independence(self, pair):
        u, w = pair
        base = pressure_I(u, w, R=1.0)
        assert (pressure_I(u, w, R=0.5) - base).max_abs() <= 1e-2 * base.max_abs()
