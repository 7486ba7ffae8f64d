# Standard:
import math

# External:
import numpy as np
import pytest

# Internal:
from pyalfven.lab import registry
from pyalfven.lab.registry import (REGISTERED_CASES, InequalityCase, InequalityReport, get_case, list_cases,
                                   reports_to_frame, run_case, run_suite, select_cases, trial_seeds)
from pyalfven.utils.errors import PreconditionError

# Constants:
from pyalfven.utils.constants import LEMMA_REPORT_COLS


def constant_ratio(grid, seed):
    return 1.0, 2.0


def refusing(grid, seed):
    raise PreconditionError('smallness', 'never admissible')


def diverging(grid, seed):
    return 1.0, 0.0


@pytest.fixture
def stub(monkeypatch):
    def register(evaluator, **kwargs):
        case = InequalityCase('X1', 'lhs ≤ rhs', evaluator, ('stub',), L=1.0, N=8, **kwargs)
        monkeypatch.setitem(registry.CASES, case.id, case)
        return case.id
    return register


class TestRegistry:
    def test_ids_unique(self):
        ids = [case.id for case in REGISTERED_CASES]
        assert len(ids) == len(set(ids))
        assert len(ids) >= 21

    def test_every_case_has_a_grid(self):
        for case in REGISTERED_CASES:
            assert case.grid.geometry == case.geometry

    def test_tag_filter(self):
        assert {case.id for case in select_cases('heat')} == {'L5.3', 'L5.4', 'E5.6-kernel'}

    def test_prefix_and_list_filter(self):
        assert [case.id for case in select_cases('L2.5')] == ['L2.5-even', 'L2.5-odd']
        assert [case.id for case in select_cases('E5.7, L5.7')] == ['L5.7', 'E5.7']

    def test_empty_filter_selects_all(self):
        assert len(select_cases('')) == len(REGISTERED_CASES)

    def test_unknown_filter(self):
        with pytest.raises(KeyError, match='matches no registered case'):
            select_cases('heat,Z9')

    def test_unknown_id(self):
        with pytest.raises(KeyError, match='unknown registry id'):
            get_case('Z9')

    def test_listing(self):
        lines = list_cases()
        assert len(lines) == len(REGISTERED_CASES)
        assert lines[0].split('\t')[0] == REGISTERED_CASES[0].id
        assert all(line.count('\t') == 1 for line in lines)

    def test_trial_seeds(self):
        assert trial_seeds('L5.7', 4, 0) == trial_seeds('L5.7', 4, 0)
        assert trial_seeds('L5.7', 4, 0) != trial_seeds('L5.4', 4, 0)
        assert trial_seeds('L5.7', 4, 0) != trial_seeds('L5.7', 4, 1)


class TestReports:
    def test_drift_floor(self):
        report = InequalityReport('X1', 1, 0.0, 0.0, True, 0)
        assert report.drift == 0.0

    def test_frame_columns(self):
        frame = reports_to_frame([InequalityReport('X1', 2, 0.5, 0.5, True, 3)])
        assert list(frame.columns) == LEMMA_REPORT_COLS
        assert frame.loc[0, 'wall_ms'] == 0.0


class TestRunCase:
    def test_stable_ratio_passes(self, stub):
        report = run_case(stub(constant_ratio), n_trials=3)
        assert report.passed
        assert report.max_ratio == report.ratio_refined == 0.5
        assert report.trials == 3

    def test_bounds(self, stub):
        assert not run_case(stub(constant_ratio, bounds=(None, 0.25)), n_trials=2).passed
        assert not run_case(stub(constant_ratio, bounds=(0.75, None)), n_trials=2).passed

    def test_trial_cap(self, stub):
        assert run_case(stub(constant_ratio, max_trials=2), n_trials=10).trials == 2

    def test_zero_rhs_fails(self, stub):
        report = run_case(stub(diverging), n_trials=1)
        assert math.isinf(report.max_ratio)
        assert not report.passed

    def test_exhausted_gate(self, stub):
        with pytest.raises(PreconditionError, match='smallness'):
            run_case(stub(refusing), n_trials=1)

    def test_needs_trials(self):
        with pytest.raises(ValueError, match='at least one trial'):
            run_case('E5.7', n_trials=0)

    def test_threads_do_not_change_reports(self, stub):
        case_id = stub(lambda grid, seed: (float(seed % 97), 100.0))
        assert run_case(case_id, n_trials=6, threads=1) == run_case(case_id, n_trials=6, threads=3)


@pytest.mark.slow
class TestRegisteredCases:
    def test_interpolation_inequality(self):
        report = run_case('E5.7', n_trials=4, seed=0)
        assert report.passed
        assert report.max_ratio <= registry.SLACK_HI

    def test_suite_frame(self):
        frame = run_suite('E5.7', n_trials=2)
        assert frame['id'].tolist() == ['E5.7']
        assert frame['pass'].dtype == np.bool_

    def test_replay_seed(self):
        report = run_case('L2.5-even', n_trials=3, seed=5)
        assert report.seed in trial_seeds('L2.5-even', 3, 5)
        assert report.passed
