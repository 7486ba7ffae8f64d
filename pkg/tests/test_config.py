# External:
import pytest

# Internal:
from pyalfven.utils.config import RunConfig
from pyalfven.utils.errors import ConfigError


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()
        assert (config.L, config.N, config.geometry) == (16.0, 128, 'free-box')
        assert config.mu1 == pytest.approx(0.0075)
        assert config.mu2 == pytest.approx(0.0025)

    def test_json_round_trip_is_byte_identical(self):
        text = RunConfig(command='norms', N=64, weight='phi1:delta=0.25,eps=0.5', seed=9).to_json()
        assert RunConfig.from_json(text).to_json() == text
        assert text.endswith('}\n')

    def test_partial_json_uses_defaults(self):
        config = RunConfig.from_json('{"command": "verify", "n_trials": 4}')
        assert config.n_trials == 4
        assert config.N == 128

    @pytest.mark.parametrize('text, match', [
        ('{"command": "verify", "colour": 1}', 'unknown field'),
        ('{"command": ', 'malformed JSON'),
        ('[1, 2]', 'must be an object'),
        ('{"command": "fly"}', 'unknown command'),
    ])
    def test_rejects_bad_files(self, text, match):
        with pytest.raises(ConfigError, match=match):
            RunConfig.from_json(text)

    @pytest.mark.parametrize('changes, match', [
        ({'alpha': 1.5}, '0 < alpha < 1'),
        ({'delta': 0.0}, 'delta > 0'),
        ({'command': 'solve-viscous', 'delta': 0.6}, '0 < delta < 1/2'),
        ({'command': 'solve-viscous', 'nu': 0.0, 'mu': 0.0}, 'mu1'),
        ({'command': 'solve-ideal'}, 'strip geometry'),
        ({'d': 4}, 'd in'),
        ({'N': 2}, 'N >='),
        ({'threads': 0}, 'threads'),
        ({'geometry': 'sphere'}, 'unknown geometry'),
    ])
    def test_named_constraints(self, changes, match):
        with pytest.raises(ConfigError, match=match):
            RunConfig(**changes)

    def test_non_viscous_commands_accept_large_delta(self):
        assert RunConfig(command='norms', delta=0.75).delta == 0.75

    def test_overrides_skip_unset(self):
        config = RunConfig(seed=3).with_overrides(seed=None, N=64)
        assert (config.seed, config.N) == (3, 64)

    def test_overrides_reject_unknown(self):
        with pytest.raises(ConfigError, match='unknown field'):
            RunConfig().with_overrides(colour='red')

    def test_config_error_is_value_error(self):
        with pytest.raises(ValueError):
            RunConfig(alpha=0.0)
