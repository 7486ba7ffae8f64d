# Standard:
import logging

# External:
import numpy as np
import pytest

# Internal:
from pyalfven.fields.core import ScalarField, VectorField
from pyalfven.fields.grid import Grid
from pyalfven.operators.heat import heat_apply, heat_mass, heat_stencil
from pyalfven.operators.oracles import heat_fft
from pyalfven.operators.trace import TraceRecorder

# Constants:
from pyalfven.utils.constants import HEAT_MASS_TOL


@pytest.fixture
def wide_box() -> Grid:
    return Grid(d=2, L=8.0, N=64)


@pytest.fixture
def gaussian(wide_box) -> ScalarField:
    return ScalarField.from_function(wide_box, lambda x, y: np.exp(-x ** 2 - y ** 2))


class TestHeatApply:
    def test_zero_time_is_identity(self, gaussian):
        assert heat_apply(gaussian, 1.0, 0.0) is gaussian

    def test_torus_matches_symbol(self, torus, wave):
        np.testing.assert_allclose(heat_apply(wave, 0.5, 0.3).data, heat_fft(wave, 0.15).data, atol=1e-12)
        np.testing.assert_allclose(heat_apply(wave, 1.0, 0.1).data, np.exp(-0.5) * wave.data, atol=1e-12)

    def test_semigroup(self, gaussian):
        twice = heat_apply(heat_apply(gaussian, 1.0, 0.25), 1.0, 0.25)
        once = heat_apply(gaussian, 1.0, 0.5)
        assert (twice - once).max_abs() <= 1e-10

    def test_mass_conserved_in_the_interior(self, wide_box, gaussian):
        smoothed = heat_apply(gaussian, 1.0, 0.25)
        assert smoothed.data.sum() == pytest.approx(gaussian.data.sum(), rel=1e-10)

    def test_free_box_matches_exact_gaussian(self, wide_box):
        u = ScalarField.from_function(wide_box, lambda x, y: np.exp(-(x ** 2 + y ** 2)))
        tau = 0.4
        X, Y = wide_box.coordinates
        exact = np.exp(-(X ** 2 + Y ** 2) / (1.0 + 4.0 * tau)) / (1.0 + 4.0 * tau)
        np.testing.assert_allclose(heat_apply(u, 1.0, tau).data, exact, atol=1e-10)

    def test_componentwise(self, torus, wave):
        z = VectorField.from_components([wave, 2.0 * wave])
        out = heat_apply(z, 1.0, 0.2)
        np.testing.assert_allclose(out.data[1], 2.0 * out.data[0])

    def test_negative_time_rejected(self, gaussian):
        with pytest.raises(ValueError, match='γt >= 0'):
            heat_apply(gaussian, 1.0, -0.1)

    def test_strip_rejected(self, strip):
        with pytest.raises(ValueError, match='extend strip fields'):
            heat_apply(ScalarField.zeros(strip), 1.0, 0.1)

    def test_under_resolved_kernel_logged(self, gaussian, caplog):
        with caplog.at_level(logging.WARNING, logger='pyalfven.operators.heat'):
            heat_apply(gaussian, 1.0, 1e-4)
        assert 'under-resolved' in caplog.text

    def test_mass_defect_logged(self, gaussian, caplog):
        with caplog.at_level(logging.WARNING, logger='pyalfven.operators.heat'):
            heat_apply(gaussian, 1.0, 1e-3)
        assert 'stencil mass' in caplog.text

    def test_resolved_kernel_is_quiet(self, gaussian, caplog):
        with caplog.at_level(logging.WARNING, logger='pyalfven.operators.heat'):
            heat_apply(gaussian, 1.0, 0.5)
        assert 'stencil mass' not in caplog.text

    def test_trace_row(self, gaussian):
        recorder = TraceRecorder()
        heat_apply(gaussian, 1.0, 0.5, recorder)
        frame = recorder.to_frame(timing=False)
        assert list(frame['op']) == ['heat']
        assert frame['coarse_tail'].iloc[0] <= HEAT_MASS_TOL


class TestHeatMass:
    def test_stencil_is_normalized(self):
        weights, raw = heat_stencil(0.25, 0.5)
        assert weights.sum() == pytest.approx(1.0)
        assert abs(raw - 1.0) <= HEAT_MASS_TOL

    def test_grid_mass(self, box, torus):
        assert abs(heat_mass(box, 0.5) - 1.0) <= HEAT_MASS_TOL
        assert heat_mass(torus, 0.5) == 1.0
        assert heat_mass(box, 0.0) == 1.0
