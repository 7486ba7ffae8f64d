# External:
import numpy as np
import pytest
from scipy import special

# Internal:
from pyalfven.analytics.weights import (WeightSpec, check_ass_f, delta_T, delta_limit, doubling_ratio, evaluate,
                                        gauss_hermite_heat, kernel_average, sample)


class TestWeightSpec:
    @pytest.mark.parametrize('text', [
        'unit',
        'powerf0:c0=2,delta=0.25',
        'phi1:delta=0.25,eps=0',
        'heat(phi1:delta=0.25,eps=0):mu1=1,t0=1',
        'shifted(powerf0:c0=4,delta=0.25):sign=-1',
    ])
    def test_canonical_text(self, text):
        assert WeightSpec.from_text(text).to_text() == text

    def test_whitespace_insensitive(self):
        assert WeightSpec.from_text(' powerf0 : c0 = 2 , delta=0.25') == WeightSpec.power_f0(2.0, 0.25)

    def test_unknown_kind(self):
        with pytest.raises(KeyError, match='unknown weight kind'):
            WeightSpec.from_text('gaussian:sigma=1')

    def test_unknown_parameter(self):
        with pytest.raises(ValueError, match="takes no parameter 'eps'"):
            WeightSpec.from_text('powerf0:c0=2,eps=1')

    @pytest.mark.parametrize('kwargs', [
        {'kind': 'powerf0', 'c0': 1.0},
        {'kind': 'powerf0', 'delta': 1.5},
        {'kind': 'phi1', 'delta': 0.75},
        {'kind': 'heat'},
        {'kind': 'shifted', 'base': WeightSpec.unit(), 'sign': 2},
    ])
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(ValueError, match='Input Error'):
            WeightSpec(**kwargs)

    def test_structure_properties(self):
        f = WeightSpec.viscous_f(0.5)
        assert f.heat_rate == 0.5
        assert not f.x_only
        assert WeightSpec.shifted(WeightSpec.power_f0(), 1).x_only
        assert f.with_eps(1.0).base.eps == 1.0


class TestEvaluate:
    def test_power_weight(self):
        f = WeightSpec.power_f0(2.0, 0.25)
        X = np.array([[0.0, 1.0], [5.0, -3.0]])
        np.testing.assert_allclose(evaluate(f, 0.0, X), [2.0 ** -0.625, 3.0 ** -0.625])

    def test_shift_moves_along_b0(self):
        f = WeightSpec.power_f0(2.0, 0.25)
        plus, minus = WeightSpec.shifted(f, 1), WeightSpec.shifted(f, -1)
        X = np.array([[0.5], [0.0]])
        assert evaluate(plus, 2.0, X)[0] == pytest.approx(evaluate(f, 0.0, X + [[2.0], [0.0]])[0])
        assert evaluate(minus, 2.0, X)[0] == pytest.approx(evaluate(f, 0.0, X - [[2.0], [0.0]])[0])

    def test_heat_evolved_decays_at_origin(self):
        f = WeightSpec.viscous_f(1.0)
        origin = np.zeros((2, 1))
        values = [evaluate(f, t, origin)[0] for t in (0.0, 1.0, 4.0)]
        assert values[0] > values[1] > values[2] > 0.0

    @pytest.mark.parametrize('kind', ['phi1', 'phi0'])
    def test_closed_form_at_origin(self, kind):
        tau, delta = 0.7, 0.25
        base = WeightSpec(kind=kind, delta=delta)
        value = evaluate(WeightSpec.heat_evolved(base, mu1=0.0, t0=tau), 0.0, np.zeros((2, 1)))[0]
        if kind == 'phi1':
            expected = (4.0 * tau) ** (-(1.0 + delta) / 2.0) * special.gamma((1.0 - delta) / 2.0)
        else:
            expected = (4.0 * tau) ** (-delta / 2.0) * special.gamma((1.0 - delta) / 2.0) / np.sqrt(np.pi)
        assert value == pytest.approx(expected, rel=1e-12)

    def test_heat_of_constant_is_constant(self):
        X = np.array([[0.0, 7.0], [1.0, -2.0]])
        np.testing.assert_allclose(gauss_hermite_heat(lambda Y: np.ones(Y.shape[1:]), 3.0, X), 1.0)

    def test_regularized_sample_is_finite(self, box):
        assert np.all(np.isfinite(sample(WeightSpec.phi1(0.25, eps=1.0), box)))


class TestDecayCondition:
    def test_delta_is_monotone_and_bounded(self):
        f = WeightSpec.power_f0(2.0, 0.25)
        values = [delta_T(f, T) for T in (1.0, 10.0, 100.0)]
        assert values[0] < values[1] < values[2] < delta_limit(f)

    def test_delta_needs_positive_window(self):
        with pytest.raises(ValueError, match='T > 0'):
            delta_T(WeightSpec.power_f0(), 0.0)

    def test_doubling_fails_for_small_offset(self):
        assert doubling_ratio(WeightSpec.power_f0(2.0, 0.25)) == pytest.approx(2.28, abs=0.02)

    def test_doubling_holds_for_larger_offset(self):
        reports = {r.condition: r for r in check_ass_f(WeightSpec.power_f0(4.0, 0.25), C1=8.0)}
        assert reports['ass-f:doubling'].passed
        assert reports['ass-f:delta'].passed

    def test_kernel_average_of_constant(self):
        X = np.zeros((2, 1))
        total = 2.0 * np.pi * (2.0 * np.pi / (3.0 * np.sqrt(3.0)))
        value = kernel_average(lambda Y: np.ones(Y.shape[1:]), X, 8.0)[0]
        assert total * (1.0 - 1e-3) <= value <= total * 1.02
