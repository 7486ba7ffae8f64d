# Standard:
import json

# External:
import pandas as pd
import pytest

# Internal:
from pyalfven.cli import build_parser, load_config, main
from pyalfven.lab.registry import REGISTERED_CASES
from pyalfven.utils.errors import ConfigError

# Constants:
from pyalfven.utils.constants import EXIT_CONFIG, EXIT_OK


class TestParser:
    def test_flags_override_config_file(self, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text('{"command": "verify", "N": 64, "seed": 3}')
        args = build_parser().parse_args(['norms', '--config', str(path), '--seed', '5'])
        config = load_config(args)
        assert (config.command, config.N, config.seed) == ('norms', 64, 5)

    def test_missing_config_file(self, tmp_path):
        args = build_parser().parse_args(['verify', '--config', str(tmp_path / 'absent.json')])
        with pytest.raises(ConfigError, match='cannot read'):
            load_config(args)

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(['simulate'])


class TestMain:
    def test_list_cases(self, capsys):
        assert main(['list-cases']) == EXIT_OK
        lines = capsys.readouterr().out.strip().split('\n')
        assert len(lines) == len(REGISTERED_CASES)

    def test_verify_list(self, capsys):
        assert main(['verify', '--list', '--filter', 'heat']) == EXIT_OK
        ids = [line.split('\t')[0] for line in capsys.readouterr().out.strip().split('\n')]
        assert ids == ['L5.3', 'L5.4', 'E5.6-kernel']

    @pytest.mark.parametrize('argv', [
        ['verify', '--alpha', '1.5'],
        ['verify', '--list', '--filter', 'Z9'],
        ['solve-ideal', '--geometry', 'free-box'],
        ['solve-viscous', '--delta', '0.75'],
    ])
    def test_configuration_errors(self, argv, capsys):
        assert main(argv) == EXIT_CONFIG
        assert 'Error' in capsys.readouterr().err


@pytest.mark.slow
class TestRuns:
    def test_solve_ideal_zero_data(self, tmp_path):
        out = tmp_path / 'ideal'
        argv = ['solve-ideal', '--geometry', 'strip', '--L', '1', '--N', '8', '--eps', '0', '--T', '0.25',
                '--n-iter', '1', '--out', str(out)]
        assert main(argv) == EXIT_OK
        increments = pd.read_csv(out / 'increments.csv')
        assert increments['increment'].tolist() == [0.0]
        manifest = json.loads((out / 'manifest.json').read_text())
        assert manifest['summary']['gate'] == 0.0
        assert (out / 'z_plus.afld').exists()
        assert 'wall_ms' not in pd.read_csv(out / 'traces.csv').columns

    def test_solve_viscous_runs_refined_twin(self, tmp_path):
        out = tmp_path / 'viscous'
        argv = ['solve-viscous', '--L', '1', '--N', '8', '--eps', '0', '--T', '0.1', '--dt', '0.05', '--out', str(out)]
        assert main(argv) == EXIT_OK
        summary = json.loads((out / 'manifest.json').read_text())['summary']
        assert summary['C_refined'] is not None
        assert summary['C_refined'] == summary['C_plus'] == 0.0
        assert summary['drift'] == 0.0
        assert summary['refined_steps'] >= summary['steps'] >= 1
        assert summary['pass'] is True
        assert (out / 'z_plus-000.afld').exists()

    def test_norms_of_a_trial(self, tmp_path):
        out = tmp_path / 'norms'
        assert main(['norms', '--L', '2', '--N', '16', '--out', str(out)]) == EXIT_OK
        frame = pd.read_csv(out / 'norms.csv')
        assert frame.loc[0, 'weight'] == 'powerf0:c0=2,delta=0.25'
        assert frame.loc[0, 'norm1'] >= frame.loc[0, 'norm0'] > 0.0
        assert (out / 'trial.afld').exists()

    def test_verify_writes_report(self, tmp_path):
        out = tmp_path / 'verify'
        code = main(['verify', '--filter', 'E5.7', '--n-trials', '2', '--out', str(out)])
        frame = pd.read_csv(out / 'lemma-report.csv')
        assert frame['id'].tolist() == ['E5.7']
        assert code == (EXIT_OK if frame.loc[0, 'pass'] else 1)
