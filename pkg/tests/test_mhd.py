# External:
import numpy as np
import pytest

# Internal:
from pyalfven.fields.core import VectorField
from pyalfven.fields.grid import Grid
from pyalfven.solvers.mhd import (MDiagnostics, MhdState, bootstrap_check, energy, ideal_picard,
                                  linear_alfven_reference, viscous_solve)

# Constants:
from pyalfven.utils.constants import REFINEMENT_DRIFT


@pytest.fixture
def small_strip() -> Grid:
    return Grid(d=2, L=1.0, N=8, geometry='strip')


class TestLinearReference:
    @pytest.mark.parametrize('sign', [1, -1])
    def test_wave_moves_along_b0(self, torus, wave, sign):
        X, Y = torus.coordinates
        w = linear_alfven_reference(wave, 0.5, sign)
        np.testing.assert_allclose(w.data, np.sin(X + sign * 0.5) * np.cos(2.0 * Y), atol=1e-3)

    def test_zero_time(self, wave):
        assert linear_alfven_reference(wave, 0.0) is wave

    def test_sign(self, wave):
        with pytest.raises(ValueError, match='sign'):
            linear_alfven_reference(wave, 1.0, 0)


class TestDiagnostics:
    def test_running_supremum(self):
        diag = MDiagnostics()
        for t, m in [(0.0, 1.0), (0.1, 3.0), (0.2, 2.0)]:
            diag.record(t, m, 0.5 * m, 0.0, 1.0)
        np.testing.assert_array_equal(diag.M_plus, [1.0, 3.0, 3.0])
        np.testing.assert_array_equal(diag.M_minus, [0.5, 1.5, 1.5])
        assert len(diag) == 3
        assert list(diag.to_frame()['t']) == [0.0, 0.1, 0.2]

    def test_energy(self, box):
        ones = VectorField(box, np.ones((2,) + box.shape))
        assert energy(ones, VectorField.zeros(box)) == pytest.approx(0.5 * 2 * box.size * box.cell_volume)

    def test_elsasser_coefficients(self, box):
        state = MhdState(t=0.0, z_plus=VectorField.zeros(box), z_minus=VectorField.zeros(box), nu=0.3, mu=0.1)
        assert state.mu1 == pytest.approx(0.2)
        assert state.mu2 == pytest.approx(0.1)
        assert not state.is_viscous
        assert state.reconstruction_residual() == 0.0


class TestBootstrap:
    def test_zero_data(self):
        diag = MDiagnostics()
        for t in (0.0, 0.5, 1.0):
            diag.record(t, 0.0, 0.0, 0.0, 0.0)
        report = bootstrap_check(diag, mu1=0.1, mu2=0.0)
        assert report.C == 0.0
        assert report.gate == 0.0
        assert report.passed

    def test_constant_trajectory(self):
        diag = MDiagnostics()
        for t in (0.0, 1.0):
            diag.record(t, 0.1, 0.1, 0.0, 0.0)
        report = bootstrap_check(diag, mu1=1.0, mu2=0.0)
        # M(s) <= C (M(0) + M(s)M(s)) is tight at C = 0.1 / 0.11.
        assert report.C == pytest.approx(0.1 / 0.11)
        assert report.eps == pytest.approx(0.1)

    def test_refinement_drift(self):
        coarse, fine = MDiagnostics(), MDiagnostics()
        for t, m in [(0.0, 0.1), (1.0, 0.2)]:
            coarse.record(t, m, m, 0.0, 0.0)
            fine.record(t, 2.0 * m, 2.0 * m, 0.0, 0.0)
        assert bootstrap_check(coarse, 1.0, 0.0, refined=fine).drift > 0.0

    def test_refined_run_that_disagrees_fails(self):
        coarse, fine = MDiagnostics(), MDiagnostics()
        for t, m in [(0.0, 0.1), (1.0, 0.2)]:
            coarse.record(t, m, m, 0.0, 0.0)
            fine.record(t, 3.0 * m, 3.0 * m, 0.0, 0.0)
        report = bootstrap_check(coarse, 1.0, 0.0, refined=fine)
        assert report.C_refined is not None
        assert report.drift > REFINEMENT_DRIFT
        assert not report.passed

    def test_needs_positive_mu1(self):
        diag = MDiagnostics()
        diag.record(0.0, 0.0, 0.0, 0.0, 0.0)
        with pytest.raises(ValueError, match='μ₁ > 0'):
            bootstrap_check(diag, 0.0, 0.0)

    def test_needs_a_run(self):
        with pytest.raises(ValueError, match='completed run'):
            bootstrap_check(MDiagnostics(), 1.0, 0.0)


class TestSolverPreconditions:
    def test_picard_needs_strip(self, box):
        with pytest.raises(ValueError, match='strip grid'):
            ideal_picard(VectorField.zeros(box), VectorField.zeros(box), 1.0)

    def test_viscous_rejects_strip(self, strip):
        with pytest.raises(ValueError, match='not on the strip'):
            viscous_solve(VectorField.zeros(strip), VectorField.zeros(strip), 0.1, 0.1, 1.0)

    def test_viscous_needs_dissipation(self, box):
        with pytest.raises(ValueError, match='ν \\+ μ > 0'):
            viscous_solve(VectorField.zeros(box), VectorField.zeros(box), 0.0, 0.0, 1.0)


@pytest.mark.slow
class TestZeroData:
    def test_picard_stays_at_zero(self, small_strip):
        zero = VectorField.zeros(small_strip)
        result = ideal_picard(zero, zero, T=0.5, n_iter=2, slices=2)
        np.testing.assert_array_equal(result.increments.to_numpy(), 0.0)
        assert result.gate == 0.0
        assert result.C2 == 0.0
        assert len(result.iterates) == 2

    def test_viscous_stays_at_zero(self, small_box):
        zero = VectorField.zeros(small_box)
        result = viscous_solve(zero, zero, nu=0.2, mu=0.1, T=0.2, dt=0.1)
        assert result.final.z_plus.max_abs() == 0.0
        assert bootstrap_check(result.diagnostics, 0.15, 0.05).C == 0.0
