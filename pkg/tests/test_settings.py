"""
Tests for configuration loading, precedence and validation.
"""
import json

import pytest

from config.settings import Settings, load_figure_table, parse_key_value
from config.validator import ConfigurationError, ConfigurationValidator
from utils.data_structures import CriticalObjective, FactorVariant, SignConvention


class TestDefaults:
    def test_shipped_defaults(self):
        settings = Settings()
        params = settings.get_chain_params()
        assert (params.n, params.gamma, params.alpha, params.eta) == (3001, 0.5, 0.5, 1.0)
        coupling = settings.get_coupling()
        assert (coupling.g_a, coupling.g_b) == (0.005, 0.005)
        grid = settings.get_time_grid()
        assert (grid.t_start, grid.t_end, grid.steps) == (0.0, 50.0, 501)
        assert settings.get_etas() == [0.0, 0.5, 0.9, 1.0, 1.2]
        assert settings.get_alpha_range() == (-1.0, 0.5, 31)
        assert settings.get_validation_sizes() == [7, 9, 11]

    def test_run_config_enums(self):
        run = Settings().build_run_config('timeseries', out_path='x.csv')
        assert run.sign_convention is SignConvention.AS_PRINTED
        assert run.factor_variant is FactorVariant.LAMBDA
        assert run.objective is CriticalObjective.TIME_AVERAGE
        assert run.out_path == 'x.csv'
        assert run.log_level == 'INFO'

    def test_logging_config(self):
        config = Settings().get_logging_config('logs')
        assert config == {'log_level': 'INFO', 'log_filename': 'dephasing_run.log', 'log_directory': 'logs'}


class TestPrecedence:
    def test_overrides_beat_file_beat_defaults(self, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text(json.dumps({'n': 101, 'gamma': 1.0}))
        settings = Settings(str(path), overrides={'n': 7, 'eta': None})
        params = settings.get_chain_params()
        assert params.n == 7
        assert params.gamma == 1.0
        assert params.eta == 1.0

    def test_key_value_file(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text("# sweep\nn = 101\netas = 0.9, 1.2\nobjective = late-time\nlog-level = debug\n")
        settings = Settings(str(path))
        assert settings.get_chain_params().n == 101
        assert settings.get_etas() == [0.9, 1.2]
        assert settings.get_objective() is CriticalObjective.LATE_TIME
        assert settings.config['log_level'] == 'DEBUG'

    def test_summary_names_the_file(self, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text('{"workers": 2}')
        summary = Settings(str(path)).get_config_summary()
        assert summary['Workers'] == 2
        assert summary['Config file'] == str(path)


class TestValidation:
    def test_unknown_key(self, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text('{"chain_length": 7}')
        with pytest.raises(ConfigurationError, match="unknown configuration key 'chain_length'"):
            Settings(str(path))

    @pytest.mark.parametrize("n", [4, 1])
    def test_chain_length_must_be_odd(self, n):
        with pytest.raises(ConfigurationError, match="odd"):
            Settings(overrides={'n': n})

    @pytest.mark.parametrize("overrides, fragment", [
        ({'t_end': -1.0}, 't_end'),
        ({'t_steps': 1}, 't_steps'),
        ({'workers': 0}, 'workers'),
        ({'alpha_min': 0.5, 'alpha_max': 0.5}, 'alpha_min'),
        ({'objective': 'peak'}, 'objective'),
        ({'validation_sizes': [7, 13]}, 'validation sizes'),
        ({'gamma': 'one'}, 'gamma'),
        ({'n': True}, 'n must be an integer'),
    ])
    def test_rejected_values(self, overrides, fragment):
        with pytest.raises(ConfigurationError, match=fragment):
            Settings(overrides=overrides)

    def test_errors_are_joined_on_one_line(self):
        with pytest.raises(ConfigurationError) as info:
            Settings(overrides={'workers': 0, 't_steps': 1})
        message = str(info.value)
        assert '\n' not in message
        assert message.startswith('invalid configuration: ')
        assert '; ' in message

    def test_missing_file(self):
        with pytest.raises(ConfigurationError, match='not found'):
            Settings('no_such_config.json')

    def test_unparseable_line(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text('n 7\n')
        with pytest.raises(ConfigurationError, match=':1:'):
            Settings(str(path))

    def test_missing_keys_reported(self):
        errors = ConfigurationValidator().validate({'n': 7})
        assert "missing configuration key 'gamma'" in errors


class TestParsing:
    def test_comma_lists_and_scalars(self):
        parsed = parse_key_value("etas = [0.0, 1.2]\nvalidation-sizes = 7, 9\nsign_convention = flipped")
        assert parsed == {'etas': [0.0, 1.2], 'validation_sizes': [7, 9], 'sign_convention': 'flipped'}


class TestFigureTable:
    def test_nine_figures_in_order(self):
        table = load_figure_table()
        assert [entry['name'] for entry in table] == [f'fig{i}' for i in range(1, 10)]
        assert all(entry['kind'] == 'eta-family' for entry in table[:6])
        assert [entry['reported_critical_alpha'] for entry in table[6:]] == [-0.5216, -0.2695, -0.1206]

    def test_rejects_duplicate_names(self, tmp_path):
        path = tmp_path / 'figures.json'
        entry = {'name': 'fig1', 'kind': 'grid', 'gamma': 1.0, 'eta': 1.0, 'alpha_min': -1.0, 'alpha_max': 0.5}
        path.write_text(json.dumps({'figures': [entry, entry]}))
        with pytest.raises(ConfigurationError, match='Duplicate'):
            load_figure_table(str(path))
