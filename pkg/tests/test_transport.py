# External:
import numpy as np
import pytest

# Internal:
from pyalfven.fields.core import FieldHistory, ScalarField, VectorField
from pyalfven.solvers.transport import (compose, flow, flow_points, substep_bound, transport_diffusion_step,
                                        transport_solve)
from pyalfven.utils.errors import CFLViolation


def constant_drift(grid, c) -> VectorField:
    return VectorField(grid, np.stack([np.full(grid.shape, ci) for ci in c]))


class TestFlow:
    def test_zero_drift_is_identity(self, torus):
        fmap = flow(VectorField.zeros(torus), 0.0, 1.0)
        np.testing.assert_array_equal(fmap.positions, torus.coordinates)
        assert fmap.identity_deviation() == 0.0

    def test_same_time_is_identity(self, torus):
        fmap = flow(constant_drift(torus, (1.0, -0.5)), 0.3, 0.3)
        np.testing.assert_array_equal(fmap.displacement, 0.0)

    def test_constant_drift_translates(self, torus):
        fmap = flow(constant_drift(torus, (0.5, -0.25)), 0.0, 2.0)
        np.testing.assert_allclose(fmap.displacement[0], 1.0, atol=1e-12)
        np.testing.assert_allclose(fmap.displacement[1], -0.5, atol=1e-12)
        np.testing.assert_allclose(fmap.determinant, 1.0, atol=1e-12)

    def test_backward_undoes_forward(self, torus):
        Z = constant_drift(torus, (0.7, 0.2))
        there, _ = flow_points(Z, 0.0, 1.0, torus.coordinates, with_jacobian=False)
        back, _ = flow_points(Z, 1.0, 0.0, there, with_jacobian=False)
        np.testing.assert_allclose(back, torus.coordinates, atol=1e-12)

    def test_compose_needs_chained_times(self, torus):
        Z = constant_drift(torus, (1.0, 0.0))
        with pytest.raises(ValueError, match='do not chain'):
            compose(flow(Z, 0.5, 1.0), flow(Z, 0.0, 0.4), Z)

    def test_substep_bound(self, torus):
        Z = FieldHistory.constant(constant_drift(torus, (2.0, 0.0)))
        assert substep_bound(Z) == pytest.approx(0.5 * torus.spacing / 2.0)
        assert substep_bound(Z, dt=1e-3) == 1e-3

    def test_too_many_substeps(self, torus):
        with pytest.raises(CFLViolation):
            flow(constant_drift(torus, (1e6, 0.0)), 0.0, 10.0)


class TestTransportSolve:
    def test_translation(self, torus, wave):
        u = transport_solve(wave, constant_drift(torus, (0.5, 0.0)), t=1.0)
        X, Y = torus.coordinates
        np.testing.assert_allclose(u.data, np.sin(X - 0.5) * np.cos(2.0 * Y), atol=5e-3)

    def test_constant_source(self, torus, wave):
        u = transport_solve(wave, VectorField.zeros(torus), F=ScalarField(torus, np.ones(torus.shape)), t=0.75)
        np.testing.assert_allclose(u.data, wave.data + 0.75, atol=1e-12)

    def test_keeps_field_type(self, torus, wave):
        v = VectorField.from_components([wave, wave])
        assert isinstance(transport_solve(v, VectorField.zeros(torus), t=0.1), VectorField)


class TestTransportDiffusionStep:
    def test_pure_diffusion_matches_heat(self, torus, wave):
        u = transport_diffusion_step(wave, VectorField.zeros(torus), gamma=0.5, dt=0.2)
        # sin(x)cos(2y) is a Laplacian eigenfunction with eigenvalue -5.
        np.testing.assert_allclose(u.data, np.exp(-0.5) * wave.data, atol=1e-8)

    def test_pure_transport(self, torus, wave):
        Z = constant_drift(torus, (0.0, 0.25))
        stepped = transport_diffusion_step(wave, Z, gamma=0.0, dt=0.4)
        np.testing.assert_allclose(stepped.data, transport_solve(wave, Z, t=0.4).data, atol=1e-10)

    def test_negative_diffusivity(self, torus, wave):
        with pytest.raises(ValueError, match='nonnegative'):
            transport_diffusion_step(wave, VectorField.zeros(torus), gamma=-1.0)
