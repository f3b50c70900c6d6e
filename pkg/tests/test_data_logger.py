"""
Tests for CSV and JSON outputs.
"""
import json
import os

import numpy as np
import pandas as pd
import pytest

from data_logging.data_logger import (DataLogger, OutputWriteError, metadata_path, write_critical_curve_csv,
                                      write_family_csv, write_grid_csv, write_timeseries_csv,
                                      write_validation_report)
from sweeps.sweeps import alpha_time_grid, eta_family, find_critical_alpha, time_series
from utils.data_structures import ChainParams, QutritCoupling, TimeGrid

PARAMS = ChainParams(101, 1.0, 0.5, 1.0)
COUPLING = QutritCoupling(0.005, 0.005)
GRID = TimeGrid(0.0, 10.0, 11)


def _read(path):
    return pd.read_csv(path, float_precision='round_trip')


class TestTimeseriesCsv:
    def test_header_and_rows(self, tmp_path):
        path = str(tmp_path / 'series.csv')
        write_timeseries_csv(time_series(PARAMS, COUPLING, GRID), path)
        with open(path, encoding='utf-8') as f:
            lines = f.read().split('\n')
        assert lines[0] == 't,f15_abs,f19_abs,f59_abs,negativity'
        assert lines[1].startswith('0,')
        assert lines[-1] == ''
        assert len(_read(path)) == 11

    def test_values_round_trip_exactly(self, tmp_path):
        path = str(tmp_path / 'series.csv')
        result = time_series(PARAMS, COUPLING, GRID)
        write_timeseries_csv(result, path)
        frame = _read(path)
        assert np.array_equal(frame['negativity'].to_numpy(), result.values)
        assert np.array_equal(frame['t'].to_numpy(), result.axes['t'])

    def test_uncoupled_series_writes_plain_ones(self, tmp_path):
        path = str(tmp_path / 'flat.csv')
        write_timeseries_csv(time_series(PARAMS, QutritCoupling(0.0, 0.0), GRID), path)
        with open(path, encoding='utf-8') as f:
            rows = f.read().splitlines()[1:]
        assert all(row.split(',')[-1] == '1' for row in rows)
        assert (_read(path)['negativity'] == 1.0).all()

    def test_sidecar_describes_the_run(self, tmp_path):
        path = str(tmp_path / 'series.csv')
        write_timeseries_csv(time_series(PARAMS, COUPLING, GRID), path)
        with open(metadata_path(path), encoding='utf-8') as f:
            metadata = json.load(f)
        assert metadata['chain'] == {'n': 101, 'gamma': 1.0, 'alpha': 0.5, 'eta': 1.0}
        assert metadata['coupling'] == {'g_a': 0.005, 'g_b': 0.005}
        assert metadata['time_grid'] == {'t_start': 0.0, 't_end': 10.0, 'steps': 11}
        assert metadata['kind'] == 'timeseries'
        assert 'code_version' in metadata and 'created_at' in metadata

    def test_reruns_are_byte_identical(self, tmp_path):
        first, second = str(tmp_path / 'a.csv'), str(tmp_path / 'b.csv')
        write_timeseries_csv(time_series(PARAMS, COUPLING, GRID), first)
        write_timeseries_csv(time_series(PARAMS, COUPLING, GRID, workers=3), second)
        with open(first, 'rb') as a, open(second, 'rb') as b:
            assert a.read() == b.read()

    def test_failed_write_leaves_no_file(self, tmp_path, monkeypatch):
        path = str(tmp_path / 'series.csv')

        def fail(self, *args, **kwargs):
            raise OSError(28, 'No space left on device')

        monkeypatch.setattr(pd.DataFrame, 'to_csv', fail)
        with pytest.raises(OutputWriteError, match='series.csv'):
            write_timeseries_csv(time_series(PARAMS, COUPLING, GRID), path)
        assert os.listdir(tmp_path) == []

    def test_unserializable_metadata_leaves_no_file(self, tmp_path):
        result = time_series(PARAMS, COUPLING, GRID)
        result.metadata['handle'] = object()
        with pytest.raises(TypeError, match='not JSON serializable'):
            write_timeseries_csv(result, str(tmp_path / 'series.csv'))
        assert os.listdir(tmp_path) == []

    def test_unwritable_directory(self, tmp_path):
        blocker = tmp_path / 'blocker'
        blocker.write_text('not a directory')
        with pytest.raises(OutputWriteError):
            write_timeseries_csv(time_series(PARAMS, COUPLING, GRID), str(blocker / 'series.csv'))


class TestGridAndFamilyCsv:
    def test_two_by_two_grid(self, tmp_path):
        path = str(tmp_path / 'grid.csv')
        write_grid_csv(alpha_time_grid(PARAMS, COUPLING, TimeGrid(0.0, 1.0, 2), -1.0, 0.5, 2), path)
        frame = _read(path)
        assert list(frame.columns) == ['alpha', 't', 'negativity']
        assert list(frame['alpha']) == [-1.0, -1.0, 0.5, 0.5]
        assert list(frame['t']) == [0.0, 1.0, 0.0, 1.0]
        assert (frame.loc[frame['t'] == 0.0, 'negativity'] == 1.0).all()

    def test_family_blocks(self, tmp_path):
        path = str(tmp_path / 'family.csv')
        family = eta_family(PARAMS, COUPLING, TimeGrid(0.0, 5.0, 6), [0.0, 1.2])
        write_family_csv(family, path, {'figure': 'fig5'})
        frame = _read(path)
        assert list(frame.columns) == ['eta', 't', 'f15_abs', 'f19_abs', 'f59_abs', 'negativity']
        assert list(frame['eta']) == [0.0] * 6 + [1.2] * 6
        with open(metadata_path(path), encoding='utf-8') as f:
            metadata = json.load(f)
        assert metadata['etas'] == [0.0, 1.2]
        assert metadata['figure'] == 'fig5'
        assert metadata['kind'] == 'eta-family'

    def test_critical_curve(self, tmp_path):
        path = str(tmp_path / 'critical.csv')
        result = find_critical_alpha(PARAMS, COUPLING, TimeGrid(0.0, 5.0, 6), coarse_steps=5, refine_iters=3)
        write_critical_curve_csv(result, path, {'chain': PARAMS.to_dict()})
        assert len(_read(path)) == 5
        with open(metadata_path(path), encoding='utf-8') as f:
            metadata = json.load(f)
        assert metadata['critical_alpha'] == result.alpha
        assert metadata['objective'] == 'time-average'


class TestDataLogger:
    def test_resolves_into_output_directory(self, tmp_path):
        logger = DataLogger(str(tmp_path / 'out'))
        written = logger.write_timeseries(time_series(PARAMS, COUPLING, GRID), 'series.csv')
        assert written == os.path.join(str(tmp_path / 'out'), 'series.csv')
        assert os.path.exists(written)
        assert logger.get_written_files() == [written]

    def test_validation_report(self, tmp_path):
        path = str(tmp_path / 'report.json')
        write_validation_report({'passed': True, 'checks': [], 'metric': np.float64(0.5)}, path)
        with open(path, encoding='utf-8') as f:
            assert json.load(f) == {'passed': True, 'checks': [], 'metric': 0.5}
