# External:
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Internal:
from pyalfven.analytics.holder import (brute_force_seminorm, norm_0alpha, norm_c1alpha, pair_schedule, reports_to_frame,
                                       seminorm_alpha, sup_weighted)
from pyalfven.analytics.weights import WeightSpec, sample
from pyalfven.fields.core import ScalarField, VectorField
from pyalfven.fields.grid import Grid
from pyalfven.utils.constants import HOLDER_COLS


@pytest.fixture
def bump(box) -> ScalarField:
    return ScalarField.from_function(box, lambda x, y: np.exp(-(x - 0.3) ** 2 - y ** 2))


class TestPairSchedule:
    def test_exhaustive_on_small_grids(self, small_box):
        first, second = pair_schedule(small_box)
        n = small_box.size
        assert first.size == n * (n - 1) // 2

    def test_deterministic_in_seed(self, box):
        a, b = pair_schedule(box, seed=4), pair_schedule(Grid(d=2, L=4.0, N=32), seed=4)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])

    def test_no_self_pairs(self, box):
        first, second = pair_schedule(box, seed=1)
        assert not np.any(first == second)


class TestSeminorm:
    def test_exhaustive_estimator_matches_all_pairs(self, small_box):
        rng = np.random.default_rng(0)
        u = ScalarField(small_box, rng.standard_normal(small_box.shape))
        h = WeightSpec.power_f0(4.0, 0.25)
        assert seminorm_alpha(u, h, 0.5) == brute_force_seminorm(u, h, 0.5)

    def test_constant_has_zero_seminorm(self, box):
        assert seminorm_alpha(ScalarField(box, np.full(box.shape, 3.0))) == 0.0

    def test_lower_bound_of_all_pairs(self, box, bump):
        assert seminorm_alpha(bump, None, 0.5) <= brute_force_seminorm(bump, None, 0.5) * (1.0 + 1e-12)

    @settings(max_examples=15, deadline=None)
    @given(c=st.floats(-10.0, 10.0).filter(lambda v: abs(v) > 1e-3))
    def test_homogeneity(self, c):
        grid = Grid(d=2, L=1.0, N=8)
        u = ScalarField.from_function(grid, lambda x, y: np.sin(2.0 * x) * y)
        assert seminorm_alpha(u * c) == pytest.approx(abs(c) * seminorm_alpha(u), rel=1e-12)

    @pytest.mark.parametrize('alpha', [0.0, 1.5])
    def test_exponent_range(self, bump, alpha):
        with pytest.raises(ValueError, match='Hölder exponent'):
            seminorm_alpha(bump, None, alpha)


class TestWeightedNorms:
    def test_unit_weight_sup_is_max_abs(self, bump):
        assert sup_weighted(bump) == pytest.approx(bump.max_abs())

    def test_weight_spec_and_samples_agree(self, box, bump):
        h = WeightSpec.power_f0(2.0, 0.25)
        assert sup_weighted(bump, h) == sup_weighted(bump, sample(h, box))
        assert sup_weighted(bump, h) >= sup_weighted(bump)

    def test_vector_uses_node_magnitude(self, box):
        z = VectorField(box, np.stack([np.full(box.shape, 3.0), np.full(box.shape, -4.0)]))
        assert sup_weighted(z) == pytest.approx(5.0)

    def test_unscaled_report_reconstructs_norms(self, bump):
        report = norm_c1alpha(bump, None, 0.5)
        assert report.norm0 == pytest.approx(report.sup_weighted + report.semi_alpha)
        assert report.norm1 == pytest.approx(report.norm0 + report.grad_sup + report.grad_semi_alpha)
        assert norm_0alpha(bump, None, 0.5) == pytest.approx(report.norm0)

    def test_scaled_report(self, bump):
        report = norm_c1alpha(bump, None, 0.5, R=4.0)
        assert report.norm0 == pytest.approx(report.sup_weighted + 2.0 * report.semi_alpha)
        assert report.norm1 == pytest.approx(report.sup_weighted + report.semi_alpha
                                             + 4.0 * (report.grad_sup + 2.0 * report.grad_semi_alpha))

    def test_negative_scale_rejected(self, bump):
        with pytest.raises(ValueError, match='nonnegative'):
            norm_c1alpha(bump, None, 0.5, R=-1.0)

    def test_underflowing_weight_rejected(self, bump, box):
        with pytest.raises(ValueError, match='underflows'):
            sup_weighted(bump, np.zeros(box.shape))

    def test_report_frame_columns(self, bump):
        frame = reports_to_frame([norm_c1alpha(bump)])
        assert list(frame.columns) == HOLDER_COLS
