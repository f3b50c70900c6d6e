"""
Tests for time series, eta families, (alpha, t) grids and the critical-alpha search.
"""
import numpy as np
import pytest

from sweeps.sweeps import (FACTOR_COLUMNS, _best, alpha_axis, alpha_time_grid, eta_family, find_critical_alpha,
                           objective_value, time_series)
from utils.data_structures import ChainParams, CriticalObjective, ParameterDomainError, QutritCoupling, TimeGrid

WEAK_COUPLING = QutritCoupling(0.005, 0.005)


class TestTimeSeries:
    def test_uncoupled_series_is_exactly_one(self):
        result = time_series(ChainParams(101, 0.5, 0.5, 1.0), QutritCoupling(0.0, 0.0), TimeGrid(0.0, 20.0, 41))
        assert np.all(result.values == 1.0)
        for name in FACTOR_COLUMNS:
            assert np.all(result.factor_magnitudes[name] == 1.0)

    def test_starts_at_one_and_stays_in_range(self):
        result = time_series(ChainParams(301, 1.0, 0.5, 1.0), QutritCoupling(0.05, 0.02), TimeGrid(0.0, 30.0, 61))
        assert result.values[0] == 1.0
        assert np.all((result.values >= 0.0) & (result.values <= 1.0))
        assert result.metadata['kind'] == 'timeseries'
        assert result.metadata['chain']['n'] == 301

    def test_negativity_is_mean_of_magnitudes(self):
        result = time_series(ChainParams(101, 0.7, -0.2, 0.9), QutritCoupling(0.03, 0.01), TimeGrid(0.0, 10.0, 11))
        mean = sum(result.factor_magnitudes[name] for name in FACTOR_COLUMNS) / 3.0
        assert result.values == pytest.approx(mean, abs=1e-15)

    def test_worker_count_does_not_change_results(self):
        args = (ChainParams(301, 1.0, 0.5, 1.0), WEAK_COUPLING, TimeGrid(0.0, 50.0, 101))
        serial = time_series(*args, workers=1)
        threaded = time_series(*args, workers=4)
        assert np.array_equal(serial.values, threaded.values)
        for name in FACTOR_COLUMNS:
            assert np.array_equal(serial.factor_magnitudes[name], threaded.factor_magnitudes[name])

    @pytest.mark.parametrize("workers", [0, -1, 1.5, True])
    def test_rejects_bad_worker_count(self, workers):
        with pytest.raises(ParameterDomainError):
            time_series(ChainParams(7, 1.0, 0.0, 1.0), WEAK_COUPLING, TimeGrid(0.0, 1.0, 3), workers=workers)

    def test_critical_field_decays_faster_than_detuned_field(self):
        params = ChainParams(3001, 1.0, 0.5, 1.0)
        grid = TimeGrid(0.0, 50.0, 101)
        at_critical = time_series(params, WEAK_COUPLING, grid).values
        detuned = time_series(params.with_eta(1.2), WEAK_COUPLING, grid).values
        assert at_critical[-1] < at_critical[0]
        assert at_critical.mean() < detuned.mean()

    def test_negative_three_site_term_slows_the_decay(self):
        grid = TimeGrid(0.0, 50.0, 101)
        plus = time_series(ChainParams(3001, 1.0, 0.5, 1.0), WEAK_COUPLING, grid).values
        minus = time_series(ChainParams(3001, 1.0, -0.5, 1.0), WEAK_COUPLING, grid).values
        assert minus.mean() > plus.mean()


class TestEtaFamily:
    def test_single_eta_matches_time_series(self):
        params = ChainParams(101, 0.5, 0.5, 0.3)
        grid = TimeGrid(0.0, 10.0, 21)
        family = eta_family(params, WEAK_COUPLING, grid, [0.9])
        alone = time_series(params.with_eta(0.9), WEAK_COUPLING, grid)
        assert len(family) == 1
        assert np.array_equal(family[0].values, alone.values)

    def test_keeps_eta_order(self):
        family = eta_family(ChainParams(101, 0.5, 0.5, 1.0), WEAK_COUPLING, TimeGrid(0.0, 5.0, 6),
                            [1.2, 0.0, 0.5])
        assert [result.metadata['chain']['eta'] for result in family] == [1.2, 0.0, 0.5]

    def test_rejects_empty_etas(self):
        with pytest.raises(ParameterDomainError):
            eta_family(ChainParams(7, 1.0, 0.0, 1.0), WEAK_COUPLING, TimeGrid(), [])

    @pytest.mark.slow
    @pytest.mark.parametrize("gamma, alpha", [(0.5, 0.5), (0.5, -0.5), (1.0, 0.0), (1.0, 0.5), (1.0, -0.5)])
    def test_critical_field_ordering(self, gamma, alpha):
        family = eta_family(ChainParams(3001, gamma, alpha, 0.0), WEAK_COUPLING, TimeGrid(0.0, 50.0, 501),
                            [0.9, 1.0, 1.2], workers=4)
        below, critical, above = (result.values for result in family)
        assert critical.mean() < below.mean()
        assert critical.mean() < above.mean()
        assert above.min() > critical.min()


class TestAlphaTimeGrid:
    def test_axis_contract(self):
        with pytest.raises(ParameterDomainError):
            alpha_axis(-1.0, 0.5, 1)
        with pytest.raises(ParameterDomainError):
            alpha_axis(0.5, 0.5, 3)
        assert list(alpha_axis(-1.0, 0.5, 2)) == [-1.0, 0.5]

    def test_shape_and_first_column(self):
        result = alpha_time_grid(ChainParams(101, 1.0, 0.0, 1.0), WEAK_COUPLING, TimeGrid(0.0, 10.0, 11),
                                 -1.0, 0.5, 4)
        assert result.values.shape == (4, 11)
        assert list(result.axes) == ['alpha', 't']
        assert np.all(result.values[:, 0] == 1.0)
        assert result.metadata['alpha_range'] == {'min': -1.0, 'max': 0.5, 'steps': 4}

    def test_rows_match_time_series(self):
        base = ChainParams(101, 1.0, 0.0, 1.0)
        grid = TimeGrid(0.0, 10.0, 11)
        result = alpha_time_grid(base, WEAK_COUPLING, grid, -1.0, 0.5, 3)
        middle = time_series(base.with_alpha(float(result.axes['alpha'][1])), WEAK_COUPLING, grid)
        assert np.array_equal(result.values[1], middle.values)

    def test_deterministic_across_workers(self):
        args = (ChainParams(101, 0.5, 0.0, 1.0), WEAK_COUPLING, TimeGrid(0.0, 20.0, 21), -1.0, 0.5, 6)
        assert np.array_equal(alpha_time_grid(*args, workers=1).values, alpha_time_grid(*args, workers=3).values)


class TestCriticalAlpha:
    def test_objectives(self):
        values = np.array([1.0, 0.5, 0.3])
        assert objective_value(values, CriticalObjective.TIME_AVERAGE) == pytest.approx(0.6)
        assert objective_value(values, CriticalObjective.LATE_TIME) == 0.3

    def test_ties_go_to_smaller_magnitude(self):
        assert _best({0.2: 1.0, -0.1: 1.0, 0.5: 0.3}) == (-0.1, 1.0)

    def test_refinement_improves_on_coarse_scan(self):
        result = find_critical_alpha(ChainParams(101, 1.0, 0.0, 1.0), QutritCoupling(0.05, 0.05),
                                     TimeGrid(0.0, 10.0, 21), alpha_range=(-1.0, 0.5), coarse_steps=7,
                                     refine_iters=10)
        assert not result.flat
        assert -1.0 <= result.alpha <= 0.5
        assert result.objective_value >= result.coarse_best
        assert len(result.coarse_objective) == 7
        assert len(result.evaluations) > 7

    def test_flat_objective_reports_no_alpha(self):
        result = find_critical_alpha(ChainParams(101, 1.0, 0.0, 1.0), QutritCoupling(0.0, 0.0),
                                     TimeGrid(0.0, 10.0, 11), coarse_steps=5)
        assert result.flat
        assert result.alpha is None
        assert result.objective_value == 1.0

    @pytest.mark.slow
    @pytest.mark.parametrize("gamma, expected", [(1.0, -0.5216), (0.5, -0.2695), (0.2, -0.1206)])
    def test_reported_critical_alpha(self, gamma, expected):
        result = find_critical_alpha(ChainParams(3001, gamma, 0.0, 1.0), WEAK_COUPLING, TimeGrid(0.0, 50.0, 501),
                                     workers=4)
        assert not result.flat
        assert result.alpha == pytest.approx(expected, abs=0.05)
