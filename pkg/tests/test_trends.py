# External:
import numpy as np
import pandas as pd
import pytest

# Internal:
from pyalfven.analytics.trends import (decay_exponent, observed_order, ratio_series, refinement_ratio, richardson,
                                       running_sup)


class TestTrends:
    def test_observed_order_of_quadratic_errors(self):
        h = [0.4, 0.2, 0.1, 0.05]
        series = ratio_series([3.0 * x ** 2 for x in h], h)
        assert observed_order(series) == pytest.approx(2.0)

    def test_refinement_ratio_coarse_first(self):
        series = ratio_series([1.0, 1.0 / 16.0, 1.0 / 256.0], [0.1, 0.2, 0.4][::-1])
        ratios = refinement_ratio(series.sort_index())
        np.testing.assert_allclose(ratios.to_numpy(), [16.0, 16.0])

    def test_decay_exponent(self):
        levels = np.arange(6)
        series = pd.Series(5.0 * 2.0 ** (-0.5 * levels), index=levels)
        assert decay_exponent(series) == pytest.approx(0.5)

    def test_running_sup(self):
        series = pd.Series([1.0, 3.0, 2.0, 4.0], index=[0.0, 0.1, 0.2, 0.3])
        np.testing.assert_array_equal(running_sup(series).to_numpy(), [1.0, 3.0, 3.0, 4.0])

    def test_richardson(self):
        assert richardson(1.0, 1.0 + 3e-3, order=2.0) == pytest.approx(1e-3)

    def test_order_needs_two_points(self):
        with pytest.raises(ValueError, match='at least two'):
            observed_order(ratio_series([1.0, 0.0], [0.1, 0.05]))
