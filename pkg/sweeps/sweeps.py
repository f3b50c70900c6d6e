"""
Negativity sweeps: single time series, eta families, (alpha, t) grids and the critical-alpha search.

Every grid point is computed by the same pure per-point kernel and written into a preallocated
array by index, so results do not depend on the worker count or completion order.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from entanglement.state import negativity_closed_form
from spin_chain.decoherence import STATE_PAIRS, factor_complex_from_tables
from spin_chain.spectrum import lambda_table, spectral_table
from utils.data_structures import (ChainParams, CriticalObjective, FactorVariant, ParameterDomainError,
                                   QutritCoupling, SweepResult, TimeGrid)

logger = logging.getLogger('qutrit_dephasing.sweeps')

ALPHA_RESOLUTION = 1e-4
FLAT_TOLERANCE = 1e-9
INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
FACTOR_COLUMNS = ('f15_abs', 'f19_abs', 'f59_abs')


def _check_workers(workers: int) -> int:
    if isinstance(workers, bool) or int(workers) != workers or workers < 1:
        raise ParameterDomainError(f"workers must be an integer >= 1 (got {workers})")
    return int(workers)


def _fill(count: int, width: int, point: Callable[[int], Sequence[float]], workers: int) -> np.ndarray:
    """Evaluate point(i) for i in 0..count-1 into row i of a (count, width) array"""
    out = np.empty((count, width), dtype=float)

    def fill_row(index: int):
        out[index, :] = point(index)

    if workers == 1 or count < 2:
        for index in range(count):
            fill_row(index)
    else:
        with ThreadPoolExecutor(max_workers=min(workers, count)) as executor:
            list(executor.map(fill_row, range(count)))
    return out


def _series_kernel(params: ChainParams, coupling: QutritCoupling,
                   variant: FactorVariant) -> Callable[[float], Tuple[float, float, float, float]]:
    fields = lambda_table(params.eta, coupling)
    eta_table = spectral_table(params.n, params.gamma, params.alpha, params.eta)
    pair_tables = [
        (spectral_table(params.n, params.gamma, params.alpha, fields[mu]),
         spectral_table(params.n, params.gamma, params.alpha, fields[nu]))
        for mu, nu in STATE_PAIRS
    ]

    def evaluate(t: float) -> Tuple[float, float, float, float]:
        magnitudes = [abs(factor_complex_from_tables(t, eta_table, mu_table, nu_table, variant))
                      for mu_table, nu_table in pair_tables]
        return (*magnitudes, negativity_closed_form(*magnitudes))

    return evaluate


def _series_rows(params: ChainParams, coupling: QutritCoupling, times: np.ndarray,
                 variant: FactorVariant, workers: int) -> np.ndarray:
    evaluate = _series_kernel(params, coupling, variant)
    return _fill(len(times), 4, lambda index: evaluate(float(times[index])), workers)


def time_series(params: ChainParams, coupling: QutritCoupling, grid: TimeGrid, workers: int = 1,
                variant: FactorVariant = FactorVariant.LAMBDA) -> SweepResult:
    """
    Negativity and factor magnitudes over a time grid.

    Args:
        params: Chain parameters
        coupling: Qutrit coupling strengths
        grid: Time grid
        workers: Number of threads evaluating time points
        variant: Exponent energies of the complex factor

    Returns:
        SweepResult: axis 't', negativity values and |F15|, |F19|, |F59| per point
    """
    workers = _check_workers(workers)
    start = time.time()
    times = grid.times()
    rows = _series_rows(params, coupling, times, variant, workers)
    logger.debug(f"Time series n={params.n}, eta={params.eta}, alpha={params.alpha}: "
                 f"{len(times)} points in {time.time() - start:.3f}s")
    return SweepResult(
        axes={'t': times},
        values=rows[:, 3].copy(),
        metadata=SweepResult.build_metadata(params, coupling, grid, kind='timeseries',
                                            factor_variant=variant.value),
        factor_magnitudes={name: rows[:, column].copy() for column, name in enumerate(FACTOR_COLUMNS)},
    )


def eta_family(params_base: ChainParams, coupling: QutritCoupling, grid: TimeGrid,
               etas: Sequence[float], workers: int = 1,
               variant: FactorVariant = FactorVariant.LAMBDA) -> List[SweepResult]:
    """One time series per eta on a shared grid"""
    if len(etas) == 0:
        raise ParameterDomainError("eta family needs at least one eta value")
    logger.info(f"Eta family: etas={list(etas)}, gamma={params_base.gamma}, alpha={params_base.alpha}, "
                f"n={params_base.n}")
    start = time.time()
    family = [time_series(params_base.with_eta(float(eta)), coupling, grid, workers, variant)
              for eta in etas]
    logger.info(f"Eta family finished: {len(family)} series in {time.time() - start:.2f}s")
    return family


def alpha_axis(alpha_min: float, alpha_max: float, alpha_steps: int) -> np.ndarray:
    if not (math.isfinite(alpha_min) and math.isfinite(alpha_max)) or alpha_min >= alpha_max:
        raise ParameterDomainError(f"alpha range must satisfy alpha_min < alpha_max (got {alpha_min}, {alpha_max})")
    if isinstance(alpha_steps, bool) or int(alpha_steps) != alpha_steps or alpha_steps < 2:
        raise ParameterDomainError(f"alpha steps must be an integer >= 2 (got {alpha_steps})")
    return np.linspace(alpha_min, alpha_max, int(alpha_steps))


def alpha_time_grid(params_base: ChainParams, coupling: QutritCoupling, grid: TimeGrid,
                    alpha_min: float, alpha_max: float, alpha_steps: int, workers: int = 1,
                    variant: FactorVariant = FactorVariant.LAMBDA) -> SweepResult:
    """Negativity over (alpha, t); rows are alpha values, columns time points"""
    workers = _check_workers(workers)
    alphas = alpha_axis(alpha_min, alpha_max, alpha_steps)
    times = grid.times()
    logger.info(f"Alpha-time grid: {len(alphas)} x {len(times)} points, gamma={params_base.gamma}, "
                f"eta={params_base.eta}, n={params_base.n}")
    start = time.time()

    def row(index: int) -> np.ndarray:
        params = params_base.with_alpha(float(alphas[index]))
        return _series_rows(params, coupling, times, variant, 1)[:, 3]

    values = _fill(len(alphas), len(times), row, workers)
    logger.info(f"Alpha-time grid finished in {time.time() - start:.2f}s")
    return SweepResult(
        axes={'alpha': alphas, 't': times},
        values=values,
        metadata=SweepResult.build_metadata(
            params_base, coupling, grid, kind='grid', factor_variant=variant.value,
            alpha_range={'min': alpha_min, 'max': alpha_max, 'steps': int(alpha_steps)}),
    )


def objective_value(values: np.ndarray, objective: CriticalObjective) -> float:
    """Scalar summary of a negativity series: its mean over the window, or its last value"""
    if objective is CriticalObjective.LATE_TIME:
        return float(values[-1])
    return float(np.mean(values))


@dataclass
class CriticalAlphaResult:
    """Location of the maximum of the alpha objective, with the coarse curve it was bracketed from"""
    alpha: Optional[float]
    objective_value: float
    coarse_alphas: np.ndarray
    coarse_objective: np.ndarray
    flat: bool = False
    objective: CriticalObjective = CriticalObjective.TIME_AVERAGE
    evaluations: Dict[float, float] = field(default_factory=dict)

    @property
    def coarse_best(self) -> float:
        return float(np.max(self.coarse_objective))


def _best(points: Dict[float, float]) -> Tuple[float, float]:
    """Highest objective; equal objectives go to the smaller |alpha|"""
    alpha = max(points, key=lambda a: (points[a], -abs(a)))
    return alpha, points[alpha]


def find_critical_alpha(params_base: ChainParams, coupling: QutritCoupling, grid: TimeGrid,
                        alpha_range: Tuple[float, float] = (-1.0, 0.5), coarse_steps: int = 31,
                        refine_iters: int = 40,
                        objective: CriticalObjective = CriticalObjective.TIME_AVERAGE,
                        workers: int = 1,
                        variant: FactorVariant = FactorVariant.LAMBDA) -> CriticalAlphaResult:
    """
    Alpha maximizing the negativity objective: coarse scan, then golden-section refinement.

    Args:
        params_base: Chain parameters (alpha is replaced)
        coupling: Qutrit coupling strengths
        grid: Time window of the objective
        alpha_range: (alpha_min, alpha_max)
        coarse_steps: Points of the coarse scan
        refine_iters: Cap on golden-section iterations
        objective: Time average (default) or value at the end of the window
        workers: Threads for the coarse scan
        variant: Exponent energies of the complex factor

    Returns:
        CriticalAlphaResult: alpha is None when the coarse objective is flat
    """
    workers = _check_workers(workers)
    alpha_min, alpha_max = alpha_range
    coarse = alpha_axis(alpha_min, alpha_max, coarse_steps)
    times = grid.times()
    start = time.time()
    logger.info(f"Critical alpha search: range [{alpha_min}, {alpha_max}] x {len(coarse)}, "
                f"gamma={params_base.gamma}, eta={params_base.eta}, objective={objective.value}")

    def evaluate(alpha: float) -> float:
        params = params_base.with_alpha(alpha)
        return objective_value(_series_rows(params, coupling, times, variant, 1)[:, 3], objective)

    coarse_objective = _fill(len(coarse), 1, lambda index: (evaluate(float(coarse[index])),), workers)[:, 0]
    evaluations = {float(a): float(v) for a, v in zip(coarse, coarse_objective)}

    if float(np.max(coarse_objective) - np.min(coarse_objective)) < FLAT_TOLERANCE:
        logger.warning(f"Objective is flat over [{alpha_min}, {alpha_max}]; no critical alpha reported")
        return CriticalAlphaResult(alpha=None, objective_value=float(np.max(coarse_objective)),
                                   coarse_alphas=coarse, coarse_objective=coarse_objective, flat=True,
                                   objective=objective, evaluations=evaluations)

    best_alpha, _ = _best(evaluations)
    index = int(np.flatnonzero(coarse == best_alpha)[0])
    low = float(coarse[max(index - 1, 0)])
    high = float(coarse[min(index + 1, len(coarse) - 1)])

    def cached(alpha: float) -> float:
        if alpha not in evaluations:
            evaluations[alpha] = evaluate(alpha)
        return evaluations[alpha]

    c = high - INV_GOLDEN * (high - low)
    d = low + INV_GOLDEN * (high - low)
    fc, fd = cached(c), cached(d)
    iteration = 0
    while high - low > ALPHA_RESOLUTION and iteration < refine_iters:
        if fc >= fd:
            high, d, fd = d, c, fc
            c = high - INV_GOLDEN * (high - low)
            fc = cached(c)
        else:
            low, c, fc = c, d, fd
            d = low + INV_GOLDEN * (high - low)
            fd = cached(d)
        iteration += 1
        logger.debug(f"Golden section step {iteration}: bracket [{low:.6f}, {high:.6f}]")
    cached(0.5 * (low + high))

    alpha, value = _best(evaluations)
    logger.info(f"Critical alpha {alpha:.4f} (objective {value:.6f}) after {len(evaluations)} "
                f"evaluations in {time.time() - start:.2f}s")
    return CriticalAlphaResult(alpha=alpha, objective_value=value, coarse_alphas=coarse,
                               coarse_objective=coarse_objective, flat=False, objective=objective,
                               evaluations=evaluations)
